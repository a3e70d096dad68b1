"""CSV / JSON serialization of experiment results, promoted atomically."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import shutil
import subprocess
import tempfile
from importlib import metadata as importlib_metadata
from pathlib import Path

from .experiments import ExperimentResult


def version_string() -> str:
    try:
        base = importlib_metadata.version("spectpd")
    except importlib_metadata.PackageNotFoundError:
        base = "0+unknown"
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{base}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return base


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    columns = list(rows[0])
    for r in rows[1:]:
        columns += [k for k in r if k not in columns]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_default(v):
    if hasattr(v, "item"):
        return v.item()
    raise TypeError(f"not JSON serializable: {type(v)}")


def render(result: ExperimentResult, fmt: str) -> dict[str, str]:
    """File name -> contents. Data files never contain wall time or versions."""
    files = {}
    if fmt == "csv":
        for key, rows in result.tables.items():
            files[f"{result.name}_{key}.csv"] = table_to_csv(rows)
    else:
        files[f"{result.name}.json"] = json.dumps(result.tables, indent=1, default=_json_default) + "\n"
    files[f"{result.name}.meta.json"] = json.dumps(result.metadata, indent=1, sort_keys=True, default=_json_default) + "\n"
    return files


def write_result(result: ExperimentResult, out_dir: str | Path, fmt: str) -> list[Path]:
    """Write into a temporary directory, then move every file into place."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{result.name}-", dir=out))
    written = []
    try:
        for name, text in render(result, fmt).items():
            (tmp / name).write_text(text, encoding="utf-8", newline="\n")
        for name in sorted(os.listdir(tmp)):
            os.replace(tmp / name, out / name)
            written.append(out / name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return written
