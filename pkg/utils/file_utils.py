import os
import tempfile
import logging
from pathlib import Path
from typing import Union

logger = logging.getLogger(__name__)


class FileUtils:
    @staticmethod
    def atomic_write_text(path: Union[str, Path], text: str) -> Path:
        """Write text to path via a temp file in the same directory and a rename"""
        path = Path(path)
        directory = path.parent if str(path.parent) else Path(".")
        if not directory.is_dir():
            raise OSError(f"❌ Output directory does not exist: {directory}")

        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

        logger.debug(f"Wrote {path}")
        return path

    @staticmethod
    def format_float(value: float) -> str:
        """Render a float with 17 significant digits, `inf` for open ends"""
        if value == float("inf"):
            return "inf"
        return format(float(value), ".17g")
