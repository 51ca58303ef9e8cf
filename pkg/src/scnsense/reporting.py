"""CSV emission with reproducibility metadata.

Every CSV starts with a comment line recording the configuration hash, the
master seed, and the condition-number convention, followed by a header row.
Number formatting is fixed per column so identical runs are byte-identical.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path
from typing import List, Optional

OUTPUT_DIR_ENV = "SCNSENSE_OUTDIR"


def meta_line(config_hash: str, seed: int, convention: str) -> str:
    return f"# config={config_hash} seed={seed} convention={convention}"


def render_csv(meta: str, header: str, rows: List[str]) -> str:
    return "\n".join([meta, header, *rows]) + "\n"


def resolve_output_path(output: Optional[str]) -> Optional[Path]:
    """Resolve a user-supplied output path against the output-dir env var."""
    if output is None:
        return None
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def write_csv(output: Optional[str], meta: str, header: str,
              rows: List[str]) -> Optional[Path]:
    """Write a CSV to the resolved path, or to stdout when no path is given."""
    text = render_csv(meta, header, rows)
    path = resolve_output_path(output)
    if path is None:
        sys.stdout.write(text)
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def fmt(value: float, spec: str = ".6g") -> str:
    return format(value, spec)
