"""Artifact I/O helpers: JSON configs and distributions, CSV result tables."""

from pathlib import Path
import csv
import hashlib
import json
from typing import Any, Dict, List, Optional, Sequence

CSV_SCHEMA_VERSION = "1"


def save_json(path: str, obj: Dict[str, Any]) -> None:
    """Save JSON object to a file, creating directories as needed."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def config_hash(config: Dict[str, Any]) -> str:
    """Short stable digest of a resolved config."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def format_value(value: Any) -> str:
    if value is None:
        return "na"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: str, rows: Sequence[Dict[str, Any]], header: List[str], meta: Optional[Dict[str, Any]] = None) -> None:
    """Write a result table: one '# key=value ...' comment line, the header row, then the rows."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    meta = dict(meta or {})
    meta.setdefault("schema", CSV_SCHEMA_VERSION)
    with open(path, "w", newline="") as f:
        f.write("# " + " ".join(f"{k}={meta[k]}" for k in meta) + "\n")
        w = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: format_value(row.get(k)) for k in header})


def read_csv(path: str) -> List[Dict[str, str]]:
    """Read a table written by write_csv, skipping '#' comment lines."""
    with open(path, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))
