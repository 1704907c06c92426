"""JSON interchange documents: complexes, pairs and serialized Hom complexes.

A complex document is ``{"n": int, "facets": [[int, ...], ...], "labels": [...]}``
plus optional ``name``, ``involution`` and ``sigma`` keys. A pair document
``{"source": complex, "target": complex}`` stands for Hom(source, target).
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .config import atomic_write_json
from .errors import ParseError
from .hom_complex import HomComplex, JoinRule, cell_dimension, is_cell
from .paths import resolve_document
from .simplicial import Simplex, SimplicialComplex, from_facets

logger = logging.getLogger(__name__)

Document = Dict[str, Any]


def complex_to_dict(K: SimplicialComplex) -> Document:
    doc: Document = {"n": K.n_vertices, "facets": [list(f) for f in K.maximal_simplices]}
    if K.vertex_labels:
        doc["labels"] = list(K.vertex_labels)
    return doc


def complex_from_dict(doc: Any) -> SimplicialComplex:
    """Parse a complex document; unknown keys are ignored."""
    if not isinstance(doc, dict):
        raise ParseError("complex document must be a JSON object")
    if "n" not in doc or "facets" not in doc:
        raise ParseError("complex document needs 'n' and 'facets'")
    n, facets = doc["n"], doc["facets"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"'n' must be an integer, got {n!r}")
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise ParseError("'facets' must be a list of vertex lists")
    for f in facets:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in f):
            raise ParseError(f"facet {f!r} has a non-integer vertex")
    labels = doc.get("labels")
    if labels is not None and not isinstance(labels, list):
        raise ParseError("'labels' must be a list")
    return from_facets(n, facets, labels)


def hom_to_dict(h: HomComplex) -> Document:
    cells = [[d, [list(part) for part in eta]] for d, group in enumerate(h.cells) for eta in group]
    return {
        "source": complex_to_dict(h.source),
        "target": complex_to_dict(h.target),
        "rule": h.rule.value,
        "cells": cells,
    }


def hom_from_dict(doc: Document) -> HomComplex:
    """Rebuild a serialized Hom complex, re-validating every cell."""
    K = complex_from_dict(doc.get("source"))
    L = complex_from_dict(doc.get("target"))
    try:
        rule = JoinRule(doc.get("rule", JoinRule.TRANSVERSAL.value))
    except ValueError:
        raise ParseError(f"unknown join rule {doc.get('rule')!r}") from None
    grouped: Dict[int, List] = {}
    for entry in doc.get("cells", []):
        try:
            d, assignment = entry
            eta = tuple(tuple(sorted(int(x) for x in part)) for part in assignment)
        except (TypeError, ValueError):
            raise ParseError(f"malformed cell entry {entry!r}") from None
        if not is_cell(K, L, eta, rule):
            raise ParseError(f"{assignment} is not a cell of Hom(K, L)")
        if cell_dimension(eta) != d:
            raise ParseError(f"cell {assignment} has dimension {cell_dimension(eta)}, listed as {d}")
        grouped.setdefault(d, []).append(eta)
    top = max(grouped) if grouped else -1
    return HomComplex(K, L, [sorted(grouped.get(d, [])) for d in range(top + 1)], rule)


def load_document(spec: Union[str, Path]) -> Document:
    """Read a JSON document from a path or a shipped example name.

    Raises:
        ParseError: the file is missing or not valid JSON or UTF-8.
    """
    try:
        path = resolve_document(spec)
    except FileNotFoundError as e:
        raise ParseError(str(e)) from e
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from e
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    logger.debug("Loaded %s", path)
    return doc


def save_document(path: Union[str, Path], doc: Document, indent: Optional[int] = 2) -> None:
    atomic_write_json(Path(path), doc, indent=indent)


def is_pair(doc: Document) -> bool:
    return "source" in doc and "target" in doc and "cells" not in doc


def parse_int_list(text: Union[str, List[int]], what: str = "list") -> List[int]:
    """Parse ``"1,0,2"`` or ``"[1, 0, 2]"`` (or an already parsed list)."""
    if isinstance(text, list):
        values = text
    else:
        stripped = text.strip()
        try:
            if stripped.startswith("["):
                values = json.loads(stripped)
            else:
                values = [int(x) for x in stripped.split(",") if x.strip()]
        except ValueError:
            raise ParseError(f"cannot parse {what} {text!r}") from None
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                               for v in values):
        raise ParseError(f"cannot parse {what} {text!r}")
    return list(values)


def parse_simplex(text: Union[str, List[int]]) -> Simplex:
    values = parse_int_list(text, "simplex")
    if not values or len(set(values)) != len(values):
        raise ParseError(f"simplex {text!r} must list distinct vertices")
    return tuple(sorted(values))


def parse_permutation(text: Union[str, List[int]], n: Optional[int] = None) -> List[int]:
    """A vertex permutation as the list of images of ``0..n-1``."""
    values = parse_int_list(text, "permutation")
    if sorted(values) != list(range(len(values))):
        raise ParseError(f"{values} is not a permutation of 0..{len(values) - 1}")
    if n is not None and len(values) != n:
        raise ParseError(f"permutation has {len(values)} entries, complex has {n} vertices")
    return values
