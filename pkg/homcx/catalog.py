"""Named complexes: standard families, Z_2-complexes and tree-like samples."""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import ParseError
from .simplicial import Simplex, SimplicialComplex, from_facets, standard


@dataclass
class CatalogEntry:
    name: str
    complex: SimplicialComplex
    involution: Optional[Tuple[int, ...]] = None
    sigma: Optional[Simplex] = None
    description: str = ""


def odd_cycle_reflection(r: int) -> CatalogEntry:
    """C_{2r+1} with the reflection x -> 1 - x, which swaps the ends of edge [0, 1]."""
    n = 2 * r + 1
    return CatalogEntry(f"c{n}-reflection", standard("cycle", n),
                        tuple((1 - x) % n for x in range(n)), (0, 1),
                        f"odd cycle C_{n} with a reflection flipping edge [0, 1]")


def annulus_pair() -> CatalogEntry:
    """Two triangulated annuli glued along the triangle [0, 1, 2].

    The loop through the first annulus transposes 0 and 1; the loop through
    the second cycles 0 -> 1 -> 2, so the holonomy group is S3.
    """
    facets = [
        [0, 1, 2], [1, 2, 4], [1, 3, 4], [3, 4, 5], [3, 5, 6], [0, 3, 6], [0, 2, 6],
        [1, 2, 8], [1, 8, 9], [1, 7, 9], [7, 9, 10], [0, 7, 10], [0, 10, 11], [0, 2, 11],
    ]
    omega = (1, 0, 2, 3, 6, 5, 4, 7, 11, 10, 9, 8)
    return CatalogEntry("annulus-pair", from_facets(12, facets), omega, (0, 1, 2),
                        "two annuli sharing a triangle; holonomy S3")


def moebius_pair() -> CatalogEntry:
    """Two Möbius strips glued along [0, 1, 2], swapped by the involution; holonomy Z2."""
    facets = [
        [0, 1, 2], [0, 2, 3], [1, 4, 5], [1, 2, 5], [0, 3, 4], [0, 4, 5],
        [1, 2, 6], [0, 7, 8], [0, 2, 8], [1, 6, 7], [1, 7, 8],
    ]
    omega = (1, 0, 2, 6, 7, 8, 3, 4, 5)
    return CatalogEntry("moebius-pair", from_facets(9, facets), omega, (0, 1, 2),
                        "two Möbius strips sharing a triangle; holonomy Z2")


TREE_LIKE: Dict[str, List[List[int]]] = {
    "sigma": [[0, 1, 2], [0, 1, 3]],
    "fan": [[0, 1, 2], [0, 2, 3], [0, 3, 4]],
    "strip": [[0, 1, 2], [1, 2, 3], [2, 3, 4], [3, 4, 5]],
    "branch": [[0, 1, 2], [0, 1, 3], [0, 2, 4], [1, 2, 5]],
    "long-branch": [[0, 1, 2], [0, 1, 3], [0, 2, 4], [1, 2, 5], [1, 5, 6]],
}


def tree_like(name: str) -> SimplicialComplex:
    facets = TREE_LIKE[name]
    return from_facets(max(v for f in facets for v in f) + 1, facets)


_FAMILY = re.compile(r"^(simplex|cycle|complete|path|boundary[-_]simplex)-(\d+)$")


def named(name: str) -> CatalogEntry:
    """Look up a complex by name, e.g. ``cycle-5``, ``annulus-pair``, ``tree-fan``.

    Raises:
        ParseError: unknown name.
    """
    match = _FAMILY.match(name)
    if match:
        family, m = match.group(1), int(match.group(2))
        return CatalogEntry(name, standard(family, m))
    odd = re.match(r"^c(\d+)-reflection$", name)
    if odd and int(odd.group(1)) % 2 == 1 and int(odd.group(1)) >= 3:
        return odd_cycle_reflection(int(odd.group(1)) // 2)
    if name == "annulus-pair":
        return annulus_pair()
    if name == "moebius-pair":
        return moebius_pair()
    if name.startswith("tree-") and name[5:] in TREE_LIKE:
        return CatalogEntry(name, tree_like(name[5:]), description="tree-like 2-complex")
    raise ParseError(f"unknown complex name {name!r}")


def names() -> List[str]:
    """A representative list of catalog names."""
    return (["simplex-3", "cycle-5", "complete-4", "path-3", "boundary-simplex-4",
             "c5-reflection", "annulus-pair", "moebius-pair"]
            + [f"tree-{n}" for n in TREE_LIKE])
