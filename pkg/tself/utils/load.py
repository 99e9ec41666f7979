"""
File helpers: YAML config files and versioned JSON artifacts.

Accepts either:
- POSIX-like relative strings: "runs/model.json"
- pathlib.Path objects (absolute or relative)
"""

from __future__ import annotations

import json
from logging import getLogger
from pathlib import Path
from typing import Any, Union

import yaml

from tself.errors import ArtifactError
from tself.utils.path import resolve_pathish

Pathish = Union[str, Path]

SCHEMA_VERSION = 1

log = getLogger("tself")

# === YAML ===
def load_yaml(path: Path) -> dict:
    """Missing file → {}. Parse errors propagate as yaml.YAMLError."""
    if not path.exists():
        return {}
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise yaml.YAMLError(f"{path}: expected a mapping at top level")
    return data

def write_text(pathish: Pathish, text: str, encoding: str = "utf-8") -> Path:
    """
    Write text to file, creating parent dirs if needed.
    """
    p = resolve_pathish(pathish)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding=encoding)
    return p

# === JSON artifacts ===
def dumps_artifact(kind: str, payload: dict[str, Any]) -> str:
    """Deterministic JSON text for an artifact of the given kind."""
    doc = {"format": kind, "schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"

def write_artifact(pathish: Pathish, kind: str, payload: dict[str, Any]) -> Path:
    p = write_text(pathish, dumps_artifact(kind, payload))
    log.info("wrote %s artifact to %s", kind, p)
    return p

def read_artifact(pathish: Pathish, kind: str) -> dict[str, Any]:
    """
    Load and validate a JSON artifact. Raises ArtifactError on a foreign
    format or a schema version this build does not read.
    """
    p = resolve_pathish(pathish)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ArtifactError(f"{p}: no such file") from e
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{p}: not valid JSON ({e.msg} at line {e.lineno})") from e

    if not isinstance(doc, dict) or doc.get("format") != kind:
        found = doc.get("format") if isinstance(doc, dict) else type(doc).__name__
        raise ArtifactError(f"{p}: expected a {kind} document, found {found!r}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ArtifactError(
            f"{p}: schema_version {doc.get('schema_version')!r} is not supported "
            f"(this build reads version {SCHEMA_VERSION}); re-create the file with this tself"
        )
    return doc

__all__ = ["load_yaml", "write_text", "dumps_artifact", "write_artifact", "read_artifact", "SCHEMA_VERSION"]
