"""Shared path resolution for homcx.

Attributes
----------
PACKAGE_ROOT : Path
    The ``homcx`` package directory (or the executable's directory in a
    frozen build).
DATA_DIR : Path
    Shipped example documents (``*.json``).
"""

import sys
from pathlib import Path
from typing import List, Union


def _compute_root() -> Path:
    if getattr(sys, "frozen", False):
        return Path(sys.executable).parent
    # this file -> homcx/paths.py; .parent -> homcx/
    return Path(__file__).resolve().parent


PACKAGE_ROOT: Path = _compute_root()
DATA_DIR: Path = PACKAGE_ROOT / "data"


def shipped_names() -> List[str]:
    """Names of the shipped example documents, sorted."""
    if not DATA_DIR.is_dir():
        return []
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))


def resolve_document(spec: Union[str, Path]) -> Path:
    """Resolve a document argument to an existing file.

    Accepts an existing path, a shipped name (``"hexagon"``), or any path whose
    file name matches a shipped document (``"examples/hexagon.json"``).

    Raises:
        FileNotFoundError: nothing matches.
    """
    candidate = Path(spec)
    if candidate.is_file():
        return candidate
    name = candidate.name
    stem = name[:-5] if name.endswith(".json") else name
    shipped = DATA_DIR / f"{stem}.json"
    if shipped.is_file():
        return shipped
    raise FileNotFoundError(f"No such document: {spec}")
