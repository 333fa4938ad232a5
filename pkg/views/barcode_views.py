from typing import List, Optional
from xml.sax.saxutils import escape
import math

from config.tda_config import TDA_CONFIG
from orchestration.step3_persistence import PersistenceDiagram, PersistencePair


class BarcodeSVGView:
    """Hand-emitted SVG barcode: one horizontal bar per persistence pair.

    Bars are stacked by dimension then birth; dimension 0 is red and
    dimension 1 blue. Open bars run to the right edge of the plot area and end
    in an arrowhead. Each bar carries `class="bar dimK"` (plus `infinite` for
    open bars) so the output can be inspected without a renderer.
    """

    def __init__(self, title: str = "", axis_max: Optional[float] = None):
        self.title = title
        self.axis_max = axis_max
        self.settings = TDA_CONFIG["render"]

    def render(self, diagram: PersistenceDiagram, default_axis_max: float = 2.0) -> str:
        s = self.settings
        pairs: List[PersistencePair] = sorted(diagram.pairs)
        axis_max = self._axis_max(pairs, default_axis_max)
        # bars born at or past the right end have nothing to show
        pairs = [pair for pair in pairs if pair.birth < axis_max]

        plot_left = s["margin_left"]
        plot_right = s["width"] - s["margin_right"]
        row = s["bar_height"] + s["bar_gap"]
        height = s["margin_top"] + max(len(pairs), 1) * row + s["margin_bottom"]
        axis_y = height - s["margin_bottom"] + 4

        def x_of(t: float) -> float:
            return plot_left + (plot_right - plot_left) * min(t, axis_max) / axis_max

        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{s["width"]}" height="{height}" '
            f'viewBox="0 0 {s["width"]} {height}">',
            "<defs>",
        ]
        for dim, color in sorted(s["dim_colors"].items()):
            lines.append(
                f'<marker id="arrow{dim}" markerWidth="8" markerHeight="8" refX="6" refY="4" orient="auto">'
                f'<path d="M0,0 L8,4 L0,8 z" fill="{color}"/></marker>'
            )
        lines.append("</defs>")
        lines.append('<rect width="100%" height="100%" fill="white"/>')
        if self.title:
            lines.append(
                f'<text x="{s["width"] / 2:.1f}" y="{s["margin_top"] / 2:.1f}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="14">{escape(self.title)}</text>'
            )

        for position, pair in enumerate(pairs):
            color = s["dim_colors"].get(pair.dimension, "#7f7f7f")
            y = s["margin_top"] + position * row + s["bar_height"] / 2
            x1 = x_of(pair.birth)
            x2 = max(x1, plot_right - 6) if pair.is_infinite else x_of(pair.death)
            classes = f"bar dim{pair.dimension}" + (" infinite" if pair.is_infinite else "")
            marker = f' marker-end="url(#arrow{pair.dimension})"' if pair.is_infinite else ""
            lines.append(
                f'<line class="{classes}" x1="{x1:.3f}" y1="{y:.3f}" x2="{x2:.3f}" y2="{y:.3f}" '
                f'stroke="{color}" stroke-width="{s["bar_height"]}"{marker}/>'
            )

        lines.append(
            f'<line class="axis" x1="{plot_left}" y1="{axis_y}" x2="{plot_right}" y2="{axis_y}" stroke="black"/>'
        )
        for tick in self._ticks(axis_max):
            x = x_of(tick)
            lines.append(f'<line x1="{x:.3f}" y1="{axis_y}" x2="{x:.3f}" y2="{axis_y + 5}" stroke="black"/>')
            lines.append(
                f'<text x="{x:.3f}" y="{axis_y + 18}" text-anchor="middle" font-family="sans-serif" '
                f'font-size="11">{tick:g}</text>'
            )
        lines.append(
            f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{height - 4}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">t</text>'
        )
        lines.append("</svg>")
        return "\n".join(lines) + "\n"

    def _axis_max(self, pairs: List[PersistencePair], default_axis_max: float) -> float:
        if self.axis_max is not None:
            if self.axis_max <= 0:
                raise ValueError(f"❌ axis_max must be positive, got {self.axis_max}")
            return float(self.axis_max)
        finite = [p.death for p in pairs if not p.is_infinite] + [p.birth for p in pairs]
        return max([default_axis_max] + finite) or 1.0

    @staticmethod
    def _ticks(axis_max: float) -> List[float]:
        raw_step = axis_max / 8
        magnitude = 10 ** math.floor(math.log10(raw_step))
        step = next(m * magnitude for m in (1, 2, 2.5, 5, 10) if m * magnitude >= raw_step)
        count = int(math.floor(axis_max / step + 1e-9))
        return [round(i * step, 10) for i in range(count + 1)]
