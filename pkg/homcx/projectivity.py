"""Perspectivities, projectivities, holonomy groups and parallel transport.

Composition follows the left-to-right convention: ``p.then(q)`` first applies
``p`` and then ``q``, so ``x (p * q) = q(p(x))``. sympy's ``Permutation``
product uses the same order, which keeps group computations consistent with
stored paths.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
from sympy.combinatorics import Permutation, PermutationGroup

from .errors import HypothesisFailure, InvariantViolation, NotAdjacentError
from .hom_complex import (DEFAULT_CELL_CAP, CellularMap, HomComplex, JoinRule, build_hom,
                          induced_precompose)
from .simplicial import Simplex, SimplicialComplex, VertexMap, simplex, simplices_of_dim

logger = logging.getLogger(__name__)


def _as_simplex(s: Sequence[int]) -> Simplex:
    out = tuple(sorted(int(v) for v in s))
    if len(set(out)) != len(out):
        raise HypothesisFailure(f"repeated vertex in {list(s)}", code="not_simplex")
    return out


@dataclass(frozen=True)
class Projectivity:
    """A vertex bijection ``source -> target`` with the dual path realizing it."""

    source: Simplex
    target: Simplex
    bijection: Tuple[Tuple[int, int], ...]  # sorted (x, image) pairs
    path: Tuple[Simplex, ...] = field(default=(), compare=False)

    @property
    def mapping(self) -> Dict[int, int]:
        return dict(self.bijection)

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in self.bijection)

    def then(self, other: "Projectivity") -> "Projectivity":
        """``self * other``: follow self, then other."""
        return compose(self, other)

    def inverse(self) -> "Projectivity":
        return Projectivity(self.target, self.source,
                            tuple(sorted((y, x) for x, y in self.bijection)),
                            tuple(reversed(self.path)))

    def positions(self) -> List[int]:
        """Array form on positions: source vertex ``i`` goes to target position ``result[i]``."""
        m = self.mapping
        where = {v: i for i, v in enumerate(self.target)}
        return [where[m[x]] for x in self.source]

    def to_permutation(self) -> Permutation:
        if not self.is_loop:
            raise HypothesisFailure("only loops are permutations", code="not_loop")
        return Permutation(self.positions())

    def to_dict(self) -> Dict[str, object]:
        return {
            "source": list(self.source),
            "target": list(self.target),
            "perm": {str(x): y for x, y in self.bijection},
            "path": [list(s) for s in self.path],
        }


def identity(sigma: Sequence[int]) -> Projectivity:
    sigma = _as_simplex(sigma)
    return Projectivity(sigma, sigma, tuple((x, x) for x in sigma), (sigma,))


def perspectivity(sigma0: Sequence[int], sigma1: Sequence[int]) -> Projectivity:
    """The bijection fixing the common face and swapping the two free vertices.

    Raises:
        NotAdjacentError: the simplices differ and do not share a codimension-one face.
    """
    s0, s1 = _as_simplex(sigma0), _as_simplex(sigma1)
    if s0 == s1:
        return identity(s0)
    common = set(s0) & set(s1)
    if len(s0) != len(s1) or len(common) != len(s0) - 1:
        raise NotAdjacentError(f"{list(s0)} and {list(s1)} are not adjacent")
    (a,) = set(s0) - common
    (b,) = set(s1) - common
    pairs = tuple(sorted((x, b if x == a else x) for x in s0))
    return Projectivity(s0, s1, pairs, (s0, s1))


def compose(p: Projectivity, q: Projectivity) -> Projectivity:
    """``p * q``: ``x -> q(p(x))``, paths concatenated."""
    if p.target != q.source:
        raise HypothesisFailure(f"cannot compose: {list(p.target)} != {list(q.source)}",
                                code="mismatch")
    qm = q.mapping
    pairs = tuple(sorted((x, qm[y]) for x, y in p.bijection))
    path = p.path + q.path[1:] if p.path and q.path else ()
    return Projectivity(p.source, q.target, pairs, path)


def along(path: Sequence[Sequence[int]]) -> Projectivity:
    """Composite of the perspectivities of consecutive simplices in ``path``."""
    if not path:
        raise HypothesisFailure("empty path", code="empty_path")
    result = identity(path[0])
    for a, b in zip(path, path[1:]):
        result = compose(result, perspectivity(a, b))
    return result


@dataclass
class DualGraph:
    """k-simplices of K, adjacent when they share a (k-1)-face.

    Edges of ``graph`` carry the common face as attribute ``face``.
    """

    k: int
    nodes: List[Simplex]
    graph: nx.Graph

    def index(self, sigma: Simplex) -> int:
        return self.nodes.index(sigma)

    def neighbors(self, sigma: Simplex) -> List[Simplex]:
        return sorted(self.graph.neighbors(sigma))


def dual_graph(K: SimplicialComplex, k: int) -> DualGraph:
    nodes = simplices_of_dim(K, k)
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    by_ridge: Dict[Simplex, List[Simplex]] = {}
    for s in nodes:
        for j in range(len(s)):
            by_ridge.setdefault(s[:j] + s[j + 1:], []).append(s)
    for ridge, group in by_ridge.items():
        for a, b in combinations(group, 2):
            graph.add_edge(a, b, face=ridge)
    return DualGraph(k, nodes, graph)


_LABELS_ABELIAN = {1: "trivial", 2: "Z2", 3: "Z3", 5: "Z5", 7: "Z7"}


def group_label(group: PermutationGroup) -> str:
    """Isomorphism type of a small permutation group, else "order N"."""
    order = int(group.order())
    if order in _LABELS_ABELIAN:
        return _LABELS_ABELIAN[order]
    orders = sorted(int(g.order()) for g in group.elements)
    top = orders[-1]
    if group.is_abelian:
        if top == order:
            return f"Z{order}"
        if order == 4:
            return "Z2xZ2"
        if order == 8 and top == 4:
            return "Z4xZ2"
        if order == 8 and top == 2:
            return "Z2xZ2xZ2"
        return f"order {order}"
    if order == 6:
        return "S3"
    if order == 8:
        return "D4" if orders.count(2) == 5 else "Q8"
    if order == 12:
        return "A4" if 6 not in orders else "D6"
    if order == 24 and top == 4 and group.degree == 4:
        return "S4"
    return f"order {order}"


@dataclass
class HolonomyGroup:
    """The group of projectivities from a base simplex to itself."""

    base: Simplex
    generators: List[Projectivity]
    order: int
    label: str
    elements: Dict[Tuple[int, ...], Projectivity] = field(repr=False, default_factory=dict)
    component_size: int = 0
    total_size: int = 0

    def __contains__(self, p) -> bool:
        key = tuple(p.positions()) if isinstance(p, Projectivity) else tuple(p)
        return key in self.elements

    def realize(self, p) -> Optional[Projectivity]:
        """A stored projectivity (with its closed path) equal to ``p``."""
        key = tuple(p.positions()) if isinstance(p, Projectivity) else tuple(p)
        return self.elements.get(key)

    @property
    def permutation_group(self) -> PermutationGroup:
        degree = len(self.base)
        gens = [g.to_permutation() for g in self.generators] or [Permutation(list(range(degree)))]
        return PermutationGroup(gens)

    def to_dict(self) -> Dict[str, object]:
        return {
            "base": list(self.base),
            "order": self.order,
            "label": self.label,
            "generators": [{"perm": {str(x): y for x, y in g.bijection},
                            "path": [list(s) for s in g.path]} for g in self.generators],
        }


def holonomy_group(K: SimplicialComplex, sigma: Sequence[int]) -> HolonomyGroup:
    """Generators from the fundamental cycles of a BFS tree, then closure.

    Raises:
        HypothesisFailure: ``sigma`` is not a simplex of K.
    """
    base = _as_simplex(sigma)
    if not base or not K.contains(base):
        raise HypothesisFailure(f"{list(base)} is not a simplex of K", code="not_simplex")
    dual = dual_graph(K, len(base) - 1)
    component = nx.node_connected_component(dual.graph, base)
    if len(component) < len(dual.nodes):
        logger.warning("Dual graph of %d-simplices is disconnected; holonomy sees %d of %d simplices",
                       dual.k, len(component), len(dual.nodes))

    tree = nx.bfs_tree(dual.graph, base, sort_neighbors=sorted)
    to_node: Dict[Simplex, Projectivity] = {base: identity(base)}
    for parent, child in nx.bfs_edges(dual.graph, base, sort_neighbors=sorted):
        to_node[child] = compose(to_node[parent], perspectivity(parent, child))

    generators: List[Projectivity] = []
    seen: Set[Tuple[int, ...]] = set()
    for a, b in sorted(tuple(sorted(e)) for e in dual.graph.subgraph(component).edges()):
        if tree.has_edge(a, b) or tree.has_edge(b, a):
            continue
        loop = compose(compose(to_node[a], perspectivity(a, b)), to_node[b].inverse())
        key = tuple(loop.positions())
        if loop.is_identity or key in seen:
            continue
        seen.add(key)
        generators.append(loop)

    elements = _closure(base, generators)
    group = PermutationGroup([g.to_permutation() for g in generators]
                             or [Permutation(list(range(len(base))))])
    if int(group.order()) != len(elements):
        raise InvariantViolation(f"closure found {len(elements)} elements, "
                                 f"sympy reports order {group.order()}")
    hg = HolonomyGroup(base, generators, len(elements), group_label(group), elements,
                       component_size=len(component), total_size=len(dual.nodes))
    logger.info("Holonomy at %s: order %d (%s), %d generators",
                list(base), hg.order, hg.label, len(generators))
    return hg


def _closure(base: Simplex, generators: List[Projectivity]) -> Dict[Tuple[int, ...], Projectivity]:
    """Every element with a realizing closed path, found breadth first."""
    start = identity(base)
    elements = {tuple(start.positions()): start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for g in generators:
            nxt = compose(current, g)
            key = tuple(nxt.positions())
            if key not in elements:
                elements[key] = nxt
                queue.append(nxt)
    return elements


def loop_projectivities(K: SimplicialComplex, sigma: Sequence[int],
                        max_len: int = 6) -> Set[Tuple[int, ...]]:
    """Position permutations of all closed dual walks of length <= max_len.

    Exhaustive and exponential; an independent check on ``holonomy_group``.
    """
    base = _as_simplex(sigma)
    dual = dual_graph(K, len(base) - 1)
    found: Set[Tuple[int, ...]] = set()

    def walk(current: Projectivity, node: Simplex, length: int) -> None:
        if node == base:
            found.add(tuple(current.positions()))
        if length == max_len:
            return
        for nb in dual.neighbors(node):
            walk(compose(current, perspectivity(node, nb)), nb, length + 1)

    walk(identity(base), base, 0)
    return found


# -- parallel transport ----------------------------------------------------------

class FibreCache:
    """Fibre complexes Hom(Δ^{[n]}, L) keyed by the number of vertices."""

    def __init__(self, L: SimplicialComplex, cap: Optional[int] = DEFAULT_CELL_CAP,
                 rule: JoinRule = JoinRule.TRANSVERSAL):
        self.L = L
        self.cap = cap
        self.rule = rule
        self._fibres: Dict[int, HomComplex] = {}

    def __call__(self, size: int) -> HomComplex:
        if size not in self._fibres:
            self._fibres[size] = build_hom(simplex(size), self.L, cap=self.cap, rule=self.rule)
        return self._fibres[size]


def transport_map(L: SimplicialComplex, p: Projectivity,
                  fibres: Optional[FibreCache] = None) -> CellularMap:
    """Parallel transport Hom(p.target, L) -> Hom(p.source, L), eta -> eta o p.

    Both fibres are Hom(Δ^{[k+1]}, L) with vertex ``i`` standing for the
    ``i``-th vertex of the simplex, so the map is a precomposition by the
    position bijection of ``p``.
    """
    if fibres is None:
        fibres = FibreCache(L)
    elif fibres.L != L:
        raise HypothesisFailure("fibre cache belongs to another target", code="mismatch")
    size = len(p.source)
    fibre = fibres(size)
    delta = fibre.source
    f = VertexMap(delta, delta, tuple(p.positions()))
    return induced_precompose(fibre, f, codomain=fibre, species="transport")
