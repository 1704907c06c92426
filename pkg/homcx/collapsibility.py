"""Shellings, tree-like (vertex-collapsible) complexes, folds and collapse checks.

A tree-like complex is a pure d-complex that can be peeled down to a single
facet, each step removing a facet ``F`` whose intersection with the rest is
one (d-1)-face ``tau``. The free vertex ``v = F - tau`` disappears with ``F``,
so every step is also a fold of ``v`` onto the vertex ``u`` completing
``tau`` to a facet of the rest.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .chains import chain_map_of, chains_of, homology_of, identity_chain_map, same_on_homology
from .errors import FoldError, HypothesisFailure, InvariantViolation, NotPureError
from .hom_complex import (DEFAULT_CELL_CAP, HomComplex, JoinRule, MultiHom, build_hom,
                          deleted_product, induced_precompose)
from .models import CollapseReport, DimensionHomology, SearchResult, SearchStatus
from .simplicial import Simplex, SimplicialComplex, VertexMap, deletion

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000


@dataclass
class ShellingOrder:
    """Facets in shelling order with restriction faces R_j and types r_j = dim R_j."""

    order: List[Simplex]
    restrictions: List[Simplex]
    types: List[int]

    def to_dict(self) -> Dict[str, object]:
        return {
            "order": [list(f) for f in self.order],
            "restrictions": [list(r) for r in self.restrictions],
            "types": list(self.types),
        }


@dataclass(frozen=True)
class CollapseStep:
    """Removal of facet ``sigma`` meeting the rest in ``sigma_prime``.

    ``v`` is the vertex removed with ``sigma``; ``witness = sigma_prime + u``
    shows that ``sigma_prime`` is not maximal in what remains.
    """

    sigma: Simplex
    sigma_prime: Simplex
    witness: Simplex
    u: int
    v: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "sigma": list(self.sigma),
            "sigma_prime": list(self.sigma_prime),
            "witness": list(self.witness),
            "u": self.u,
            "v": self.v,
        }


@dataclass
class CollapseSequence:
    steps: List[CollapseStep]
    final: Simplex

    def as_shelling(self) -> ShellingOrder:
        """The peel read backwards; every restriction is the single removed vertex."""
        order = [self.final] + [s.sigma for s in reversed(self.steps)]
        restrictions = [()] + [(s.v,) for s in reversed(self.steps)]
        types = [-1] + [0] * len(self.steps)
        return ShellingOrder(order, restrictions, types)

    def to_dict(self) -> Dict[str, object]:
        return {"steps": [s.to_dict() for s in self.steps], "final": list(self.final)}


def _require_pure(K: SimplicialComplex) -> None:
    if not K.is_pure():
        raise NotPureError(f"complex with facet sizes {sorted({len(f) for f in K.maximal_simplices})} "
                           f"is not pure")


# -- shelling ------------------------------------------------------------------

def _restriction(F: Simplex, placed: Sequence[Simplex]) -> Optional[Simplex]:
    """R_j for F after ``placed``; None if the intersection is not pure of codimension one."""
    if not placed:
        return ()
    if len(F) == 1:
        return ()
    fs = set(F)
    R = tuple(v for v in F if any(len(fs & set(G)) == len(F) - 1 and v not in G for G in placed))
    if not R:
        return None
    for G in placed:
        if not (fs - set(G)) & set(R):
            return None
    return R


def find_shelling(K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Backtracking search for a shelling order.

    Whether a facet may come next depends only on the set already placed, so
    dead sets are memoized.

    Raises:
        NotPureError: K is not pure.
    """
    _require_pure(K)
    facets = list(K.maximal_simplices)
    dead: Set[FrozenSet[Simplex]] = set()
    order: List[Simplex] = []
    restrictions: List[Simplex] = []
    nodes = 0

    class _Budget(Exception):
        pass

    def search(placed: FrozenSet[Simplex]) -> bool:
        nonlocal nodes
        if len(placed) == len(facets):
            return True
        if placed in dead:
            return False
        nodes += 1
        if nodes > budget:
            raise _Budget()
        for F in facets:
            if F in placed:
                continue
            R = _restriction(F, order)
            if R is None:
                continue
            order.append(F)
            restrictions.append(R)
            if search(placed | {F}):
                return True
            order.pop()
            restrictions.pop()
        dead.add(placed)
        return False

    try:
        ok = search(frozenset())
    except _Budget:
        logger.warning("Shelling search gave up after %d nodes", nodes)
        return SearchResult(SearchStatus.BUDGET, None, nodes)
    if not ok:
        return SearchResult(SearchStatus.EXHAUSTED, None, nodes)
    types = [len(R) - 1 for R in restrictions]
    return SearchResult(SearchStatus.FOUND, ShellingOrder(list(order), list(restrictions), types), nodes)


def replay_shelling(K: SimplicialComplex, shelling: ShellingOrder) -> None:
    """Raise InvariantViolation unless ``shelling`` is a valid shelling of K."""
    if sorted(shelling.order) != sorted(K.maximal_simplices):
        raise InvariantViolation("shelling does not list the facets of K exactly once")
    for j, F in enumerate(shelling.order):
        R = _restriction(F, shelling.order[:j])
        if R is None:
            raise InvariantViolation(f"facet {list(F)} at position {j} meets its predecessors "
                                     f"in a non-pure or wrong-dimensional complex")
        if j and (tuple(R) != tuple(shelling.restrictions[j]) or len(R) - 1 != shelling.types[j]):
            raise InvariantViolation(f"stored restriction of {list(F)} is wrong")


# -- tree-like peel ----------------------------------------------------------------

def _peel(F: Simplex, rest: Sequence[Simplex]) -> Optional[CollapseStep]:
    fs = set(F)
    tau: Optional[FrozenSet[int]] = None
    partner: Optional[Simplex] = None
    for G in rest:
        common = fs & set(G)
        if len(common) == len(F) - 1:
            if tau is None:
                tau, partner = frozenset(common), G
            elif tau != common:
                return None
    if tau is None:
        return None
    for G in rest:
        if not fs & set(G) <= tau:
            return None
    (v,) = fs - tau
    (u,) = set(partner) - tau
    return CollapseStep(F, tuple(sorted(tau)), partner, u, v)


def peel_step(K: SimplicialComplex, sigma: Sequence[int]) -> CollapseStep:
    """The elementary vertex collapse removing facet ``sigma``.

    Raises:
        HypothesisFailure: ``sigma`` is not a facet or meets the rest in anything
            other than a single codimension-one face.
    """
    sigma = tuple(sorted(sigma))
    if sigma not in K.maximal_simplices:
        raise HypothesisFailure(f"{list(sigma)} is not a facet", code="sigma_not_facet")
    rest = [G for G in K.maximal_simplices if G != sigma]
    step = _peel(sigma, rest)
    if step is None:
        raise HypothesisFailure(f"{list(sigma)} does not meet the rest in a single facet of itself",
                                code="not_collapsible")
    return step


def is_tree_like(K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Search for a peel down to one facet by elementary vertex collapses.

    Facets are tried in lexicographic order; dead remainders are memoized.

    Raises:
        NotPureError: K is not pure.
    """
    _require_pure(K)
    facets = tuple(K.maximal_simplices)
    if len(facets) <= 1:
        final = facets[0] if facets else ()
        return SearchResult(SearchStatus.FOUND, CollapseSequence([], final), 0)
    dead: Set[FrozenSet[Simplex]] = set()
    steps: List[CollapseStep] = []
    nodes = 0

    class _Budget(Exception):
        pass

    def search(remaining: Tuple[Simplex, ...]) -> bool:
        nonlocal nodes
        if len(remaining) == 1:
            return True
        key = frozenset(remaining)
        if key in dead:
            return False
        nodes += 1
        if nodes > budget:
            raise _Budget()
        for F in remaining:
            rest = tuple(G for G in remaining if G != F)
            step = _peel(F, rest)
            if step is None:
                continue
            steps.append(step)
            if search(rest):
                return True
            steps.pop()
        dead.add(key)
        return False

    try:
        ok = search(facets)
    except _Budget:
        logger.warning("Tree-like search gave up after %d nodes", nodes)
        return SearchResult(SearchStatus.BUDGET, None, nodes)
    if not ok:
        return SearchResult(SearchStatus.EXHAUSTED, None, nodes)
    removed = {s.sigma for s in steps}
    (final,) = [F for F in facets if F not in removed]
    return SearchResult(SearchStatus.FOUND, CollapseSequence(list(steps), final), nodes)


def replay_collapse(K: SimplicialComplex, sequence: CollapseSequence) -> None:
    """Raise InvariantViolation unless every step is a valid elementary vertex collapse."""
    remaining = list(K.maximal_simplices)
    for i, step in enumerate(sequence.steps):
        if step.sigma not in remaining:
            raise InvariantViolation(f"step {i}: {list(step.sigma)} is not a remaining facet")
        remaining.remove(step.sigma)
        expected = _peel(step.sigma, remaining)
        if expected is None or expected.sigma_prime != step.sigma_prime or expected.v != step.v:
            raise InvariantViolation(f"step {i}: {list(step.sigma)} is not glued along "
                                     f"{list(step.sigma_prime)}")
        if not any(set(step.witness) <= set(G) for G in remaining) \
                or set(step.witness) != set(step.sigma_prime) | {step.u}:
            raise InvariantViolation(f"step {i}: witness {list(step.witness)} does not show "
                                     f"{list(step.sigma_prime)} is non-maximal")
    if remaining != [sequence.final]:
        raise InvariantViolation(f"peel ends with {len(remaining)} facets, expected one")
    shelling = sequence.as_shelling()
    for j in range(1, len(shelling.order)):
        if _restriction(shelling.order[j], shelling.order[:j]) != shelling.restrictions[j]:
            raise InvariantViolation("reverse peel does not replay as a shelling of type 0")


# -- folds -----------------------------------------------------------------------

@dataclass
class ElementaryCollapse:
    """K' = K - v with the inclusion gamma: K' -> K and the fold rho: K -> K'."""

    source: SimplicialComplex
    result: SimplicialComplex
    gamma: VertexMap
    rho: VertexMap
    v: int
    u: int


def _check_fold(K: SimplicialComplex, v: int, u: int) -> None:
    if not (0 <= v < K.n_vertices and 0 <= u < K.n_vertices):
        raise FoldError(f"fold {v} -> {u}: vertex out of range")
    if u == v:
        raise FoldError("fold needs two distinct vertices")
    for f in K.facets_containing(v):
        if u in f:
            raise FoldError(f"fold {v} -> {u} is degenerate on {list(f)}")
        image = [w for w in f if w != v] + [u]
        if not K.contains(image):
            raise FoldError(f"fold {v} -> {u} sends {list(f)} to {sorted(image)}, not a simplex")


def elementary_collapse(K: SimplicialComplex, v: int, u: int) -> ElementaryCollapse:
    """Delete ``v`` and fold it onto ``u``; ids of K' are dense.

    Raises:
        FoldError: the fold condition fails.
    """
    _check_fold(K, v, u)
    result, new_to_old = deletion(K, v)
    old_to_new = {w: i for i, w in enumerate(new_to_old)}
    gamma = VertexMap(result, K, tuple(new_to_old))
    rho = VertexMap(K, result, tuple(old_to_new[u if w == v else w] for w in K.vertices))
    rho.require_nondegenerate()
    return ElementaryCollapse(K, result, gamma, rho, v, u)


def fold_map(K: SimplicialComplex, v: int, u: int) -> VertexMap:
    """The retraction rho: K -> K - v with rho(v) = u."""
    return elementary_collapse(K, v, u).rho


def _dims(hg) -> List[DimensionHomology]:
    return [DimensionHomology(d, hg.betti[d], list(hg.torsion[d])) for d in range(hg.top + 1)]


def verify_collapse_equivalence(K: SimplicialComplex,
                                step: Union[CollapseStep, Tuple[int, int], None],
                                L: SimplicialComplex,
                                cap: Optional[int] = DEFAULT_CELL_CAP,
                                rule: JoinRule = JoinRule.TRANSVERSAL) -> CollapseReport:
    """Check that a vertex collapse induces a homotopy equivalence of Hom complexes.

    ``step`` is a CollapseStep, a ``(v, u)`` fold, or None for the identity.
    Verifies on chains that precomposing with the fold and then the inclusion
    is the identity of Hom(K', L), and that the other composite is the
    identity on homology.

    Raises:
        InvariantViolation: any check fails.
    """
    if step is None:
        h = build_hom(K, L, cap=cap, rule=rule)
        hg = homology_of(chains_of(h))
        return CollapseReport(-1, -1, _dims(hg), _dims(hg), True, True)
    v, u = (step.v, step.u) if isinstance(step, CollapseStep) else step
    ec = elementary_collapse(K, v, u)
    h = build_hom(K, L, cap=cap, rule=rule)
    h_prime = build_hom(ec.result, L, cap=cap, rule=rule)
    gamma_hat = chain_map_of(induced_precompose(h, ec.gamma, codomain=h_prime))
    rho_hat = chain_map_of(induced_precompose(h_prime, ec.rho, codomain=h))

    failures: List[str] = []
    identity_exact = rho_hat.then(gamma_hat).is_identity()
    if not identity_exact:
        failures.append("precomposing with the fold and then the inclusion is not the identity")
    hs = homology_of(gamma_hat.source)
    ht = homology_of(gamma_hat.target)
    for d in range(max(hs.top, ht.top) + 1):
        if hs.group_string(d) != ht.group_string(d):
            failures.append(f"dimension {d}: {hs.group_string(d)} vs {ht.group_string(d)}")
    inverse = same_on_homology(gamma_hat.then(rho_hat), identity_chain_map(gamma_hat.source))
    if not inverse:
        failures.append("the composite on Hom(K, L) is not the identity on homology")
    report = CollapseReport(v, u, _dims(hs), _dims(ht), identity_exact, inverse, failures)
    if failures:
        raise InvariantViolation("collapse verification failed: " + "; ".join(failures))
    logger.info("Collapse %d -> %d verified: %s", v, u, hs.summary())
    return report


def omega_map(h: HomComplex, v: int, u: int) -> Dict[MultiHom, MultiHom]:
    """The closure map eta -> eta with eta(v) replaced by eta(u) | eta(v).

    It dominates both the identity and the composite of fold and inclusion,
    cellwise.

    Raises:
        InvariantViolation: some image is not a cell of ``h``.
    """
    _check_fold(h.source, v, u)
    out: Dict[MultiHom, MultiHom] = {}
    for eta in h:
        merged = tuple(sorted(set(eta[u]) | set(eta[v])))
        image = eta[:v] + (merged,) + eta[v + 1:]
        if image not in h.index:
            raise InvariantViolation(f"closure image {image} of {eta} is not a cell")
        out[eta] = image
    return out


def deleted_product_comparison(T: SimplicialComplex, L: SimplicialComplex,
                               cap: Optional[int] = DEFAULT_CELL_CAP,
                               rule: JoinRule = JoinRule.TRANSVERSAL):
    """Homology of Hom(T, L) against the deleted product L^{d+1}, d = dim T.

    Returns:
        (homology of Hom(T, L), homology of the deleted product, equal?)
    """
    _require_pure(T)
    hom = homology_of(chains_of(build_hom(T, L, cap=cap, rule=rule)))
    dp = homology_of(chains_of(deleted_product(L, T.dimension + 1, cap=cap, rule=rule)))
    top = max(hom.top, dp.top)
    equal = hom.empty == dp.empty and all(
        hom.group_string(d) == dp.group_string(d) for d in range(top + 1))
    return hom, dp, equal
