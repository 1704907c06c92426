"""Finite abstract simplicial complexes, vertex maps and standard constructors.

Complexes are stored by their facets (inclusion-maximal simplices) over dense
integer vertex ids ``0..n-1``. A vertex lying in no facet still counts as a
0-simplex: ``maximal_simplices`` lists it as a singleton.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import DegenerateMapError, HypothesisFailure, ParseError

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


def simplex_mask(simplex: Iterable[int]) -> int:
    """Bitmask with bit ``v`` set for each vertex ``v``."""
    mask = 0
    for v in simplex:
        mask |= 1 << v
    return mask


def mask_vertices(mask: int) -> Simplex:
    """Sorted vertex tuple of a bitmask."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A finite abstract simplicial complex stored by facets.

    Use :func:`from_facets` rather than the constructor; it normalizes and
    validates the facet list.
    """

    n_vertices: int
    facets: Tuple[Simplex, ...]
    vertex_labels: Optional[Tuple[str, ...]] = field(default=None)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (self.n_vertices == other.n_vertices
                and self.maximal_simplices == other.maximal_simplices)

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.maximal_simplices))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n_vertices}, facets={list(map(list, self.facets))})"

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @cached_property
    def covered(self) -> FrozenSet[int]:
        """Vertices that occur in some facet."""
        return frozenset(v for f in self.facets for v in f)

    @cached_property
    def maximal_simplices(self) -> Tuple[Simplex, ...]:
        """Facets plus a singleton for every vertex in no facet."""
        extra = [(v,) for v in self.vertices if v not in self.covered]
        return tuple(sorted(list(self.facets) + extra))

    @cached_property
    def facet_masks(self) -> Tuple[int, ...]:
        return tuple(simplex_mask(f) for f in self.maximal_simplices)

    @cached_property
    def face_masks(self) -> FrozenSet[int]:
        """Every nonempty simplex as a bitmask. Exponential in facet size."""
        faces: Set[int] = set()
        for f in self.maximal_simplices:
            for r in range(1, len(f) + 1):
                for sub in combinations(f, r):
                    faces.add(simplex_mask(sub))
        return frozenset(faces)

    @property
    def dimension(self) -> int:
        if self.n_vertices == 0:
            return -1
        return max(len(f) for f in self.maximal_simplices) - 1

    @property
    def is_empty(self) -> bool:
        return self.n_vertices == 0

    def is_pure(self) -> bool:
        sizes = {len(f) for f in self.maximal_simplices}
        return len(sizes) <= 1

    def is_graph(self) -> bool:
        """True when the complex is at most 1-dimensional."""
        return self.dimension <= 1

    def label(self, v: int) -> str:
        if self.vertex_labels:
            return self.vertex_labels[v]
        return str(v)

    def contains(self, simplex: Iterable[int]) -> bool:
        """Membership test: is the vertex set a face of some facet?"""
        mask = simplex_mask(simplex)
        if mask == 0:
            return True
        return any(mask & ~fm == 0 for fm in self.facet_masks)

    def contains_mask(self, mask: int) -> bool:
        return any(mask & ~fm == 0 for fm in self.facet_masks)

    @cached_property
    def edges(self) -> Tuple[Simplex, ...]:
        return tuple(simplices_of_dim(self, 1))

    @cached_property
    def neighbors(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[Set[int]] = [set() for _ in self.vertices]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def facets_containing(self, v: int) -> List[Simplex]:
        return [f for f in self.maximal_simplices if v in f]

    def to_networkx(self) -> nx.Graph:
        """The vertex-edge graph as a networkx graph (all vertices present)."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def from_facets(n: int, facets: Iterable[Sequence[int]],
                labels: Optional[Sequence[str]] = None) -> SimplicialComplex:
    """Build a complex on ``n`` vertices from a facet list.

    Facets are sorted and deduplicated; non-maximal entries are dropped.

    Raises:
        ParseError: negative ``n``, vertex id out of range, repeated vertex in
            one facet, empty facet, or label count mismatch.
    """
    if n < 0:
        raise ParseError(f"vertex count must be non-negative, got {n}")
    normalized: Set[Simplex] = set()
    for raw in facets:
        simplex = tuple(sorted(int(v) for v in raw))
        if not simplex:
            raise ParseError("empty facet entry")
        if len(set(simplex)) != len(simplex):
            raise ParseError(f"repeated vertex in facet {list(raw)}")
        if simplex[0] < 0 or simplex[-1] >= n:
            raise ParseError(f"vertex id out of range [0, {n}) in facet {list(raw)}")
        normalized.add(simplex)

    # Longest first so that subset tests only look at already kept facets.
    kept: List[Tuple[Simplex, int]] = []
    for simplex in sorted(normalized, key=lambda s: (-len(s), s)):
        mask = simplex_mask(simplex)
        if any(mask & ~km == 0 for _, km in kept):
            continue
        kept.append((simplex, mask))

    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise ParseError(f"expected {n} labels, got {len(labels)}")
    return SimplicialComplex(n_vertices=n, facets=tuple(sorted(s for s, _ in kept)),
                             vertex_labels=labels)


def simplices_of_dim(K: SimplicialComplex, d: int) -> List[Simplex]:
    """All ``d``-simplices of ``K`` in lexicographic order."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    found: Set[Simplex] = set()
    for f in K.maximal_simplices:
        if len(f) > d:
            found.update(combinations(f, d + 1))
    return sorted(found)


def all_simplices(K: SimplicialComplex) -> List[Simplex]:
    """Every nonempty simplex, ordered by dimension then lexicographically."""
    out: List[Simplex] = []
    for d in range(K.dimension + 1):
        out.extend(simplices_of_dim(K, d))
    return out


# -- standard complexes -------------------------------------------------------

def simplex(m: int) -> SimplicialComplex:
    """The full simplex on ``m`` vertices, written Δ^{[m]}."""
    if m < 1:
        raise HypothesisFailure(f"simplex needs m >= 1, got {m}", code="parameter")
    return from_facets(m, [list(range(m))])


def cycle(n: int) -> SimplicialComplex:
    """The cycle graph C_n."""
    if n < 3:
        raise HypothesisFailure(f"cycle needs n >= 3, got {n}", code="parameter")
    return from_facets(n, [[i, (i + 1) % n] for i in range(n)])


def complete(n: int) -> SimplicialComplex:
    """The complete graph K_n as a 1-dimensional complex."""
    if n < 1:
        raise HypothesisFailure(f"complete graph needs n >= 1, got {n}", code="parameter")
    if n == 1:
        return from_facets(1, [[0]])
    return from_facets(n, list(combinations(range(n), 2)))


def path(m: int) -> SimplicialComplex:
    """The path graph L_m with ``m`` vertices."""
    if m < 1:
        raise HypothesisFailure(f"path needs m >= 1, got {m}", code="parameter")
    if m == 1:
        return from_facets(1, [[0]])
    return from_facets(m, [[i, i + 1] for i in range(m - 1)])


def boundary_simplex(m: int) -> SimplicialComplex:
    """The boundary of Δ^{[m]}: all (m-2)-faces of the simplex on ``m`` vertices."""
    if m < 2:
        raise HypothesisFailure(f"boundary_simplex needs m >= 2, got {m}", code="parameter")
    return from_facets(m, list(combinations(range(m), m - 1)))


_STANDARD = {
    "simplex": simplex,
    "cycle": cycle,
    "complete": complete,
    "path": path,
    "boundary_simplex": boundary_simplex,
}


def standard(name: str, m: int) -> SimplicialComplex:
    """Construct a standard complex by family name and parameter."""
    try:
        builder = _STANDARD[name.replace("-", "_")]
    except KeyError:
        raise ParseError(f"unknown standard complex {name!r}; "
                         f"choose from {', '.join(sorted(_STANDARD))}") from None
    return builder(m)


def clique_complex(G: SimplicialComplex) -> SimplicialComplex:
    """The flag complex whose simplices are the cliques of a graph."""
    if not G.is_graph():
        raise HypothesisFailure(f"clique_complex needs a graph, got dimension {G.dimension}",
                                code="not_graph")
    cliques = [sorted(c) for c in nx.find_cliques(G.to_networkx())]
    return from_facets(G.n_vertices, cliques, G.vertex_labels)


def vertex_edge_graph(K: SimplicialComplex) -> SimplicialComplex:
    """The 1-skeleton G_K as a 1-dimensional complex."""
    edges = [list(e) for e in K.edges]
    with_edge = {v for e in K.edges for v in e}
    singles = [[v] for v in sorted(K.covered) if v not in with_edge]
    return from_facets(K.n_vertices, edges + singles, K.vertex_labels)


def deletion(K: SimplicialComplex, v: int) -> Tuple[SimplicialComplex, List[int]]:
    """Remove vertex ``v`` and every simplex containing it.

    Returns:
        (K', new_to_old) where vertex ``i`` of ``K'`` is vertex ``new_to_old[i]``
        of ``K``; ids are kept dense.
    """
    new_to_old = [w for w in K.vertices if w != v]
    old_to_new = {w: i for i, w in enumerate(new_to_old)}
    faces: Set[Simplex] = set()
    for f in K.maximal_simplices:
        rest = tuple(old_to_new[w] for w in f if w != v)
        if rest:
            faces.add(rest)
    labels = None
    if K.vertex_labels:
        labels = [K.vertex_labels[w] for w in new_to_old]
    return from_facets(len(new_to_old), faces, labels), new_to_old


# -- vertex maps ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VertexMap:
    """A simplicial map given by its action on vertices.

    Raises:
        HypothesisFailure: the image list has the wrong length, maps outside the
            target, or some facet image is not a simplex of the target.
    """

    source: SimplicialComplex
    target: SimplicialComplex
    image: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if len(self.image) != self.source.n_vertices:
            raise HypothesisFailure(
                f"vertex map has {len(self.image)} entries for {self.source.n_vertices} vertices",
                code="not_simplicial")
        for x in self.image:
            if not 0 <= x < self.target.n_vertices:
                raise HypothesisFailure(f"image vertex {x} out of range", code="not_simplicial")
        for f in self.source.maximal_simplices:
            if not self.target.contains(self.image[v] for v in f):
                raise HypothesisFailure(
                    f"facet {list(f)} maps to {sorted(set(self.image[v] for v in f))}, "
                    f"not a simplex of the target", code="not_simplicial")

    def __call__(self, v: int) -> int:
        return self.image[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexMap):
            return NotImplemented
        return (self.image == other.image and self.source == other.source
                and self.target == other.target)

    def __hash__(self) -> int:
        return hash(self.image)

    def apply(self, simplex: Iterable[int]) -> Simplex:
        return tuple(sorted({self.image[v] for v in simplex}))

    @cached_property
    def nondegenerate(self) -> bool:
        return all(len({self.image[v] for v in f}) == len(f)
                   for f in self.source.maximal_simplices)

    @cached_property
    def preimages(self) -> Tuple[Tuple[int, ...], ...]:
        """For each target vertex, the sorted source vertices mapping to it."""
        pre: List[List[int]] = [[] for _ in self.target.vertices]
        for w, v in enumerate(self.image):
            pre[v].append(w)
        return tuple(tuple(p) for p in pre)

    def then(self, other: "VertexMap") -> "VertexMap":
        """Composite: apply ``self`` first, then ``other``."""
        if other.source != self.target:
            raise HypothesisFailure("composable maps need matching complexes", code="mismatch")
        return VertexMap(self.source, other.target, tuple(other.image[x] for x in self.image))

    def require_nondegenerate(self) -> "VertexMap":
        if not self.nondegenerate:
            bad = next(f for f in self.source.maximal_simplices
                       if len({self.image[v] for v in f}) != len(f))
            raise DegenerateMapError(f"map is not injective on simplex {list(bad)}")
        return self


def identity_map(K: SimplicialComplex) -> VertexMap:
    return VertexMap(K, K, tuple(K.vertices))


def simplex_inclusion(K: SimplicialComplex, sigma: Sequence[int]) -> VertexMap:
    """Inclusion of Δ^{[k+1]} onto the simplex ``sigma`` of ``K`` (vertex i -> sigma[i])."""
    sigma = tuple(sorted(sigma))
    if not K.contains(sigma):
        raise HypothesisFailure(f"{list(sigma)} is not a simplex of K", code="not_simplex")
    return VertexMap(simplex(len(sigma)), K, sigma)


def is_nondegenerate(f: VertexMap) -> bool:
    """True iff ``f`` is injective on every facet (hence on every simplex)."""
    return f.nondegenerate
