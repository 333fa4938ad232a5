from typing import Dict, Tuple
from xml.sax.saxutils import escape
import json

import networkx as nx
from matplotlib import colormaps
from matplotlib.colors import to_hex

from config.tda_config import TDA_CONFIG
from orchestration.step4_mapper import MapperGraph, MapperNode


class MapperGraphView:
    """JSON, DOT and single-file HTML renderings of a Mapper graph.

    Nodes are filled from a viridis ramp over their mean row index: the
    earliest rows are yellow, the latest dark purple.
    """

    def __init__(self, graph: MapperGraph, title: str = ""):
        self.graph = graph
        self.title = title
        self.settings = TDA_CONFIG["render"]
        self._cmap = colormaps[self.settings["colormap"]]

    def node_color(self, node: MapperNode) -> str:
        span = max(self.graph.n_rows - 1, 1)
        position = min(max(node.color_value / span, 0.0), 1.0)
        return to_hex(self._cmap(position))

    def to_dict(self) -> Dict:
        return {
            "nodes": [
                {
                    "id": node.id,
                    "members": list(node.members),
                    "cover_index": list(node.cover_index),
                    "color_value": node.color_value,
                }
                for node in self.graph.nodes
            ],
            "edges": [
                {"source": source, "target": target, "shared": shared}
                for source, target, shared in self.graph.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_dot(self) -> str:
        lines = [f'graph "{self._dot_escape(self.title or "mapper")}" {{',
                 '  node [shape=circle, style=filled, fontsize=8];']
        for node in self.graph.nodes:
            label = f"{node.id}\\n({len(node.members)})"
            lines.append(
                f'  {node.id} [label="{label}", fillcolor="{self.node_color(node)}", '
                f'tooltip="cover {list(node.cover_index)}, mean row {node.color_value:.2f}"];'
            )
        for source, target, shared in self.graph.edges:
            lines.append(f'  {source} -- {target} [label="{shared}", penwidth="{1 + min(shared, 20) / 5:.1f}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def layout(self, size: float = 560.0, pad: float = 30.0) -> Dict[int, Tuple[float, float]]:
        graph = self.graph.to_networkx()
        if graph.number_of_nodes() == 0:
            return {}
        positions = nx.spring_layout(graph, seed=self.settings["layout_seed"])
        xs = [p[0] for p in positions.values()]
        ys = [p[1] for p in positions.values()]
        span_x = (max(xs) - min(xs)) or 1.0
        span_y = (max(ys) - min(ys)) or 1.0
        return {
            node: (pad + (x - min(xs)) / span_x * (size - 2 * pad), pad + (y - min(ys)) / span_y * (size - 2 * pad))
            for node, (x, y) in positions.items()
        }

    def to_svg(self, size: float = 560.0) -> str:
        positions = self.layout(size)
        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}">',
                 '<rect width="100%" height="100%" fill="white"/>']
        for source, target, _ in self.graph.edges:
            (x1, y1), (x2, y2) = positions[source], positions[target]
            lines.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="#999"/>')
        for node in self.graph.nodes:
            x, y = positions[node.id]
            radius = 4 + min(len(node.members), 50) / 5
            lines.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius:.1f}" fill="{self.node_color(node)}" stroke="#333">'
                f'<title>node {node.id}: {len(node.members)} rows, mean row {node.color_value:.1f}</title></circle>'
            )
        lines.append("</svg>")
        return "\n".join(lines)

    def to_html(self) -> str:
        title = escape(self.title or "Mapper graph")
        payload = json.dumps(self.to_dict()).replace("</", "<\\/")
        return (
            "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
            f"<title>{title}</title>\n</head>\n<body>\n<h1>{title}</h1>\n"
            f"<p>{len(self.graph.nodes)} nodes, {len(self.graph.edges)} edges. "
            "Yellow nodes hold the earliest rows, dark purple the latest.</p>\n"
            f"{self.to_svg()}\n"
            f"<script type=\"application/json\" id=\"mapper-graph\">{payload}</script>\n"
            "</body>\n</html>\n"
        )

    @staticmethod
    def _dot_escape(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')
