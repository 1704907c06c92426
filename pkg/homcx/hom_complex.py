"""Hom-complexes Hom(K, L) and the cellular maps induced by vertex maps.

A cell is an assignment ``eta`` giving every vertex of K a nonempty set of
vertices of L, stored as a tuple (indexed by the vertices of K) of sorted
tuples. The cell is the product of the simplices on those sets, so
``dim(eta) = sum(|eta(v)| - 1)``.

The cells are the assignments such that:

1. ``eta(u)`` and ``eta(v)`` are disjoint for every edge ``{u, v}`` of K.
2. For every facet ``s`` of K, the join of the 0-dimensional complexes
   ``eta(v)`` (``v`` in ``s``) is a subcomplex of L. Under
   ``JoinRule.TRANSVERSAL`` this means every choice of one vertex from each
   ``eta(v)`` spans a simplex of L. ``JoinRule.UNION`` asks for the stricter
   condition that the union of the sets spans a simplex.

Orientation: the vertices of K are taken in ascending order and each factor
simplex is oriented by its sorted vertex list.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations_with_replacement, product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import DegenerateMapError, HypothesisFailure, InvariantViolation, ResourceCapExceeded
from .simplicial import (SimplicialComplex, VertexMap, identity_map, mask_vertices, simplex,
                         simplex_mask)

logger = logging.getLogger(__name__)

MultiHom = Tuple[Tuple[int, ...], ...]

DEFAULT_CELL_CAP = 2_000_000
PROGRESS_EVERY = 10_000


class JoinRule(str, Enum):
    TRANSVERSAL = "transversal"
    UNION = "union"


def cell_dimension(eta: MultiHom) -> int:
    return sum(len(part) - 1 for part in eta)


def is_cell(K: SimplicialComplex, L: SimplicialComplex, eta: Sequence[Sequence[int]],
            rule: JoinRule = JoinRule.TRANSVERSAL) -> bool:
    """Check conditions (1) and (2) directly, without enumeration."""
    if len(eta) != K.n_vertices:
        return False
    for part in eta:
        if not part or len(set(part)) != len(part):
            return False
        if any(not 0 <= x < L.n_vertices for x in part):
            return False
    for u, v in K.edges:
        if set(eta[u]) & set(eta[v]):
            return False
    faces = L.face_masks
    for s in K.maximal_simplices:
        if rule is JoinRule.UNION:
            if simplex_mask(x for v in s for x in eta[v]) not in faces:
                return False
        else:
            for choice in product(*(eta[v] for v in s)):
                if simplex_mask(choice) not in faces:
                    return False
    return True


class _Enumerator:
    """Depth-first assignment over V(K) with bitmask pruning."""

    def __init__(self, K: SimplicialComplex, L: SimplicialComplex, rule: JoinRule):
        self.K = K
        self.L = L
        self.rule = rule
        self.faces = L.face_masks
        self.full = (1 << L.n_vertices) - 1
        self.nbr_mask = [simplex_mask(L.neighbors[x]) for x in L.vertices]
        self.order = self._vertex_order()
        pos = {v: i for i, v in enumerate(self.order)}
        self.prev_neighbors = [
            [u for u in K.neighbors[v] if pos[u] < pos[v]] for v in K.vertices
        ]
        # Facet pieces that become checkable once v is assigned: the facet's
        # vertices placed before v.
        self.facet_checks: List[List[List[int]]] = [[] for _ in K.vertices]
        for s in K.maximal_simplices:
            for v in s:
                before = [u for u in s if pos[u] < pos[v]]
                if rule is JoinRule.UNION or len(before) >= 2:
                    self.facet_checks[v].append(before)
        self._verts_cache: Dict[int, Tuple[int, ...]] = {}

    def _vertex_order(self) -> List[int]:
        seen = set()
        order: List[int] = []
        for start in self.K.vertices:
            if start in seen:
                continue
            seen.add(start)
            queue = [start]
            while queue:
                v = queue.pop(0)
                order.append(v)
                for u in sorted(self.K.neighbors[v]):
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
        return order

    def verts(self, mask: int) -> Tuple[int, ...]:
        cached = self._verts_cache.get(mask)
        if cached is None:
            cached = mask_vertices(mask)
            self._verts_cache[mask] = cached
        return cached

    def allowed(self, v: int, masks: List[int]) -> int:
        allowed = self.full
        for u in self.prev_neighbors[v]:
            for y in self.verts(masks[u]):
                allowed &= self.nbr_mask[y]
        if self.rule is JoinRule.TRANSVERSAL and allowed:
            # Each transversal uses exactly one element of eta(v), so the
            # condition splits per element.
            for before in self.facet_checks[v]:
                pools = [self.verts(masks[u]) for u in before]
                for x in self.verts(allowed):
                    bit = 1 << x
                    for choice in product(*pools):
                        if simplex_mask(choice) | bit not in self.faces:
                            allowed &= ~bit
                            break
        return allowed

    def union_ok(self, v: int, sub: int, masks: List[int]) -> bool:
        for before in self.facet_checks[v]:
            m = sub
            for u in before:
                m |= masks[u]
            if m not in self.faces:
                return False
        return True

    def run(self, first: Optional[int] = None,
            cap: Optional[int] = None,
            progress_callback: Optional[Callable[[int, str], None]] = None,
            cancel_check: Optional[Callable[[], bool]] = None) -> List[List[int]]:
        """Enumerate all cells as mask lists; ``first`` pins the first vertex's set."""
        n = self.K.n_vertices
        masks = [0] * n
        found: List[List[int]] = []
        order = self.order
        union_rule = self.rule is JoinRule.UNION

        def visit(depth: int):
            if depth == n:
                found.append(list(masks))
                if cap is not None and len(found) > cap:
                    raise ResourceCapExceeded(
                        f"cell cap {cap} exceeded", reached=len(found), cap=cap)
                if len(found) % PROGRESS_EVERY == 0:
                    if cancel_check and cancel_check():
                        raise ResourceCapExceeded("enumeration cancelled", reached=len(found), cap=cap)
                    if progress_callback:
                        progress_callback(len(found), "cells")
                return
            v = order[depth]
            allowed = self.allowed(v, masks)
            sub = allowed
            if depth == 0 and first is not None:
                sub = first if first & ~allowed == 0 else 0
                allowed = sub
            while sub:
                if not union_rule or self.union_ok(v, sub, masks):
                    masks[v] = sub
                    visit(depth + 1)
                if depth == 0 and first is not None:
                    break
                sub = (sub - 1) & allowed
            masks[v] = 0

        visit(0)
        return found

    def first_choices(self) -> List[int]:
        v = self.order[0]
        allowed = self.allowed(v, [0] * self.K.n_vertices)
        out = []
        sub = allowed
        while sub:
            if self.rule is not JoinRule.UNION or self.union_ok(v, sub, [0] * self.K.n_vertices):
                out.append(sub)
            sub = (sub - 1) & allowed
        return out


def _run_branch(args) -> List[List[int]]:
    K, L, rule, first, cap = args
    return _Enumerator(K, L, rule).run(first=first, cap=cap)


@dataclass(eq=False)
class HomComplex:
    """The cell complex Hom(K, L), cells grouped by dimension."""

    source: SimplicialComplex
    target: SimplicialComplex
    cells: List[List[MultiHom]]
    rule: JoinRule = JoinRule.TRANSVERSAL
    index: Dict[MultiHom, Tuple[int, int]] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {}
        for d, group in enumerate(self.cells):
            for i, eta in enumerate(group):
                self.index[eta] = (d, i)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, eta) -> bool:
        return tuple(tuple(p) for p in eta) in self.index

    def __iter__(self) -> Iterator[MultiHom]:
        for group in self.cells:
            yield from group

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    @property
    def is_empty(self) -> bool:
        return not self.index

    def counts(self) -> List[int]:
        return [len(group) for group in self.cells]

    def ordinal(self, eta: MultiHom) -> int:
        return self.index[eta][1]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(group) for d, group in enumerate(self.cells))

    @cached_property
    def vertices_cells(self) -> List[MultiHom]:
        """The 0-cells, i.e. the non-degenerate simplicial maps K -> L."""
        return self.cells[0] if self.cells else []


def build_hom(K: SimplicialComplex, L: SimplicialComplex,
              cap: Optional[int] = DEFAULT_CELL_CAP,
              rule: JoinRule = JoinRule.TRANSVERSAL,
              progress_callback: Optional[Callable[[int, str], None]] = None,
              cancel_check: Optional[Callable[[], bool]] = None,
              workers: int = 1) -> HomComplex:
    """Enumerate every cell of Hom(K, L).

    Args:
        K: Source complex; must have at least one vertex.
        L: Target complex.
        cap: Maximum number of cells, ``None`` for no limit.
        rule: Reading of condition (2).
        progress_callback: Optional callback(cells_so_far, label), called every
            PROGRESS_EVERY cells in-process or once per finished branch with workers.
        cancel_check: Optional callback returning True to abort.
        workers: Processes used to split the search over the first vertex's
            candidate sets; 1 keeps everything in-process.

    Returns:
        The complex with cells sorted lexicographically within each dimension.

    Raises:
        ResourceCapExceeded: more than ``cap`` cells, or cancelled.
    """
    if K.n_vertices == 0:
        raise HypothesisFailure("Hom(K, L) needs K to have at least one vertex", code="empty_source")
    rule = JoinRule(rule)
    enumerator = _Enumerator(K, L, rule)

    if workers > 1:
        branches = enumerator.first_choices()
        raw: List[List[int]] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_branch, [(K, L, rule, b, cap) for b in branches]):
                raw.extend(part)
                if cap is not None and len(raw) > cap:
                    raise ResourceCapExceeded(f"cell cap {cap} exceeded", reached=len(raw), cap=cap)
                if cancel_check and cancel_check():
                    raise ResourceCapExceeded("enumeration cancelled", reached=len(raw), cap=cap)
                if progress_callback:
                    progress_callback(len(raw), "cells")
    else:
        raw = enumerator.run(cap=cap, progress_callback=progress_callback, cancel_check=cancel_check)

    grouped: Dict[int, List[MultiHom]] = {}
    for masks in raw:
        eta = tuple(enumerator.verts(m) for m in masks)
        grouped.setdefault(cell_dimension(eta), []).append(eta)
    top = max(grouped) if grouped else -1
    cells = [sorted(grouped.get(d, [])) for d in range(top + 1)]
    h = HomComplex(K, L, cells, rule)
    logger.info("Hom complex built: %d cells, counts per dimension %s", len(h), h.counts())
    return h


def deleted_product(L: SimplicialComplex, k: int, cap: Optional[int] = DEFAULT_CELL_CAP,
                    rule: JoinRule = JoinRule.TRANSVERSAL) -> HomComplex:
    """The deleted product L^k_Δ, built as Hom(Δ^{[k]}, L)."""
    if k < 1:
        raise HypothesisFailure(f"deleted product needs k >= 1, got {k}", code="parameter")
    return build_hom(simplex(k), L, cap=cap, rule=rule)


def cell_facets(h: HomComplex, eta: MultiHom) -> List[Tuple[MultiHom, int]]:
    """Codimension-one faces of a cell with their incidence signs.

    Deleting the ``j``-th element of ``eta(v)`` has sign ``(-1)**(offset + j)``
    where ``offset`` sums ``|eta(w)| - 1`` over ``w < v``.
    """
    eta = tuple(tuple(p) for p in eta)
    if eta not in h.index:
        raise HypothesisFailure(f"{eta} is not a cell of this complex", code="not_a_cell")
    if cell_dimension(eta) == 0:
        raise HypothesisFailure("a 0-cell has no facets", code="zero_cell")
    out: List[Tuple[MultiHom, int]] = []
    offset = 0
    for v, part in enumerate(eta):
        if len(part) >= 2:
            for j in range(len(part)):
                face = eta[:v] + (part[:j] + part[j + 1:],) + eta[v + 1:]
                out.append((face, -1 if (offset + j) % 2 else 1))
        offset += len(part) - 1
    return out


# -- induced cellular maps ----------------------------------------------------

def koszul_sign(dims: Sequence[int], keys: Sequence[int]) -> int:
    """Sign of reordering graded factors (degrees ``dims``) into ascending ``keys``."""
    sign = 1
    for i in range(len(dims)):
        if dims[i] % 2 == 0:
            continue
        for j in range(i + 1, len(dims)):
            if keys[i] > keys[j] and dims[j] % 2:
                sign = -sign
    return sign


def permutation_sign(values: Sequence[int]) -> int:
    """Sign of the permutation sorting ``values`` (distinct)."""
    sign = 1
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


def _diagonal_splits(part: Tuple[int, ...], pieces: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Iterated Alexander-Whitney diagonal of one oriented simplex."""
    n = len(part) - 1
    out = []
    for cuts in combinations_with_replacement(range(n + 1), pieces - 1):
        bounds = (0,) + cuts + (n,)
        out.append(tuple(part[bounds[t]:bounds[t + 1] + 1] for t in range(pieces)))
    return out


@dataclass(eq=False)
class CellularMap:
    """A map of Hom-complexes induced by a vertex map.

    ``species`` is ``"precompose"`` (and ``"transport"``, a precomposition by
    a bijection of simplices), mapping ``Hom(f.target, L) -> Hom(f.source, L)``,
    or ``"postcompose"``, mapping ``Hom(K, g.source) -> Hom(K, g.target)``.
    """

    domain: HomComplex
    codomain: HomComplex
    species: str
    vertex_map: VertexMap

    def cell_image(self, eta: MultiHom) -> MultiHom:
        """The image cell (possibly of different dimension)."""
        f = self.vertex_map
        if self.species == "postcompose":
            return tuple(tuple(sorted({f.image[x] for x in part})) for part in eta)
        return tuple(eta[f.image[w]] for w in f.source.vertices)

    def dimension_preserved(self, eta: MultiHom) -> bool:
        return cell_dimension(self.cell_image(eta)) == cell_dimension(eta)

    def chain_image(self, eta: MultiHom) -> Dict[MultiHom, int]:
        """Image of the oriented cell as an integer combination of cells."""
        if self.species == "postcompose":
            return self._postcompose_chain(eta)
        return self._precompose_chain(eta)

    def _postcompose_chain(self, eta: MultiHom) -> Dict[MultiHom, int]:
        g = self.vertex_map.image
        sign = 1
        parts = []
        for part in eta:
            images = [g[x] for x in part]
            if len(set(images)) != len(images):
                return {}
            sign *= permutation_sign(images)
            parts.append(tuple(sorted(images)))
        return {tuple(parts): sign}

    def _precompose_chain(self, eta: MultiHom) -> Dict[MultiHom, int]:
        f = self.vertex_map
        partial: List[Tuple[Tuple[Tuple[int, Tuple[int, ...]], ...], int]] = [((), 1)]
        for v, part in enumerate(eta):
            pre = f.preimages[v]
            if not pre:
                # augmentation on an unused factor
                if len(part) != 1:
                    return {}
                continue
            if len(pre) == 1:
                options = [((pre[0], part),)]
            else:
                options = [tuple(zip(pre, split)) for split in _diagonal_splits(part, len(pre))]
            partial = [(acc + opt, c) for acc, c in partial for opt in options]

        result: Dict[MultiHom, int] = {}
        for pieces, coeff in partial:
            dims = [len(face) - 1 for _, face in pieces]
            keys = [w for w, _ in pieces]
            sign = koszul_sign(dims, keys)
            cell = tuple(face for _, face in sorted(pieces))
            result[cell] = result.get(cell, 0) + coeff * sign
        return {c: x for c, x in result.items() if x}

    @cached_property
    def table(self) -> Dict[MultiHom, MultiHom]:
        """Cell-level images of every domain cell."""
        return {eta: self.cell_image(eta) for eta in self.domain}

    def check_images(self) -> None:
        """Every chain-level image term must be a cell of the codomain."""
        for eta in self.domain:
            for cell in self.chain_image(eta):
                if cell not in self.codomain.index:
                    raise InvariantViolation(
                        f"{self.species} image {cell} of {eta} is not a cell of the codomain")


def induced_precompose(h: HomComplex, f: VertexMap,
                       codomain: Optional[HomComplex] = None,
                       cap: Optional[int] = DEFAULT_CELL_CAP,
                       species: str = "precompose") -> CellularMap:
    """The map Hom(K', L) -> Hom(K, L), eta -> eta o f, for f: K -> K'.

    Raises:
        DegenerateMapError: ``f`` is not injective on some simplex.
    """
    f.require_nondegenerate()
    if f.target != h.source:
        raise HypothesisFailure("f must map into the source of the Hom complex", code="mismatch")
    if codomain is None:
        codomain = build_hom(f.source, h.target, cap=cap, rule=h.rule)
    m = CellularMap(h, codomain, species, f)
    m.check_images()
    return m


def induced_postcompose(h: HomComplex, g: VertexMap,
                        codomain: Optional[HomComplex] = None,
                        cap: Optional[int] = DEFAULT_CELL_CAP) -> CellularMap:
    """The map Hom(K, L) -> Hom(K, L'), eta -> g o eta, for g: L -> L'.

    Raises:
        DegenerateMapError: ``g`` is not injective on some simplex.
        InvariantViolation: an image violates condition (1) or (2).
    """
    if not g.nondegenerate:
        raise DegenerateMapError("postcomposition needs a non-degenerate map")
    if g.source != h.target:
        raise HypothesisFailure("g must start at the target of the Hom complex", code="mismatch")
    if codomain is None:
        codomain = build_hom(h.source, g.target, cap=cap, rule=h.rule)
    m = CellularMap(h, codomain, "postcompose", g)
    for eta in h:
        image = m.cell_image(eta)
        if image not in codomain.index:
            raise InvariantViolation(f"image {image} of {eta} violates the cell conditions; "
                                     f"the map is degenerate on some simplex")
    return m


def identity_cellular(h: HomComplex) -> CellularMap:
    return CellularMap(h, h, "precompose", identity_map(h.source))
