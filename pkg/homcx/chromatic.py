"""Chromatic numbers of complexes, Phi_d certificates and Lovász-type bounds.

chi(K) is the least m with a non-degenerate simplicial map K -> Δ^{[m]}, which
is the chromatic number of the vertex-edge graph. Two independent routes are
provided: graph colouring (greedy DSATUR bound, clique bound, exact
backtracking) and a direct search for non-degenerate maps.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .chains import (ChainMap, chain_map_of, chains_of, connectivity_estimate, homology_of,
                     induced_maps, induced_on_homology, same_on_homology)
from .errors import (HypothesisFailure, InvariantViolation, NotPureError, PhiCertificationError,
                     ResourceCapExceeded)
from .hom_complex import (DEFAULT_CELL_CAP, CellularMap, HomComplex, MultiHom,
                          build_hom, induced_precompose)
from .models import BoundReport, CertificateLevel, TheoremApplied, TransportSquareReport, TwoIotaVerdict
from .projectivity import (FibreCache, HolonomyGroup, Projectivity, along, holonomy_group,
                           perspectivity, transport_map)
from .simplicial import (Simplex, SimplicialComplex, VertexMap, complete, cycle, simplex,
                         simplex_inclusion, simplex_mask)

logger = logging.getLogger(__name__)

DEFAULT_COLORING_BUDGET = 5_000_000


@dataclass
class Coloring:
    """Colour of each vertex, in ``range(m)``."""

    colors: Tuple[int, ...]

    @property
    def m(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def is_proper(self, K: SimplicialComplex) -> bool:
        return len(self.colors) == K.n_vertices and all(
            self.colors[u] != self.colors[v] for u, v in K.edges)

    def as_map(self, K: SimplicialComplex, m: Optional[int] = None) -> VertexMap:
        """The colouring as a simplicial map K -> Δ^{[m]}."""
        return VertexMap(K, simplex(m or max(self.m, 1)), self.colors)


def _exact_coloring(adj: List[List[int]], best: List[int], best_k: int, lower: int,
                    budget: int) -> Tuple[int, List[int]]:
    """DSATUR branch and bound below an initial colouring ``best`` with ``best_k`` colours."""
    n = len(adj)
    colors = [-1] * n
    neighbor_colors: List[Dict[int, int]] = [dict() for _ in range(n)]
    nodes = 0

    def choose() -> Optional[int]:
        uncolored = [v for v in range(n) if colors[v] == -1]
        if not uncolored:
            return None
        return max(uncolored, key=lambda v: (len(neighbor_colors[v]), len(adj[v]), -v))

    def backtrack(current_k: int) -> bool:
        nonlocal best, best_k, nodes
        nodes += 1
        if nodes > budget:
            raise ResourceCapExceeded(f"colouring search exceeded {budget} nodes", reached=nodes,
                                      cap=budget)
        v = choose()
        if v is None:
            best, best_k = list(colors), current_k
            return best_k <= lower
        for c in range(current_k + 1):
            if c in neighbor_colors[v]:
                continue
            new_k = max(current_k, c + 1)
            if new_k >= best_k:
                continue
            colors[v] = c
            for u in adj[v]:
                neighbor_colors[u][c] = neighbor_colors[u].get(c, 0) + 1
            done = backtrack(new_k)
            for u in adj[v]:
                neighbor_colors[u][c] -= 1
                if not neighbor_colors[u][c]:
                    del neighbor_colors[u][c]
            colors[v] = -1
            if done:
                return True
        return False

    backtrack(0)
    logger.debug("Exact colouring: %d nodes, %d colours", nodes, best_k)
    return best_k, best


def chromatic_number(K: SimplicialComplex,
                     budget: int = DEFAULT_COLORING_BUDGET) -> Tuple[int, Coloring]:
    """Exact chromatic number with a witness colouring.

    Raises:
        ResourceCapExceeded: the exact search needed more than ``budget`` nodes.
    """
    if K.n_vertices == 0:
        return 0, Coloring(())
    G = K.to_networkx()
    greedy = nx.greedy_color(G, strategy="DSATUR")
    best = [greedy[v] for v in K.vertices]
    upper = max(best) + 1
    lower = max((len(c) for c in nx.find_cliques(G)), default=1)
    if lower < upper:
        adj = [sorted(K.neighbors[v]) for v in K.vertices]
        upper, best = _exact_coloring(adj, best, upper, lower, budget)
    coloring = Coloring(tuple(best))
    if not coloring.is_proper(K) or coloring.m != upper:
        raise InvariantViolation("colouring witness is not proper")
    return upper, coloring


def nondegenerate_maps(K: SimplicialComplex, T: SimplicialComplex) -> Iterator[VertexMap]:
    """Every non-degenerate simplicial map K -> T, by backtracking over vertices."""
    n = K.n_vertices
    if n == 0:
        yield VertexMap(K, T, ())
        return
    order = sorted(K.vertices, key=lambda v: (-len(K.neighbors[v]), v))
    facets_of = [K.facets_containing(v) for v in K.vertices]
    image = [-1] * n

    def ok(v: int) -> bool:
        for f in facets_of[v]:
            placed = [image[w] for w in f if image[w] >= 0]
            if len(set(placed)) != len(placed):
                return False
            if not T.contains_mask(simplex_mask(placed)):
                return False
        return True

    def visit(depth: int) -> Iterator[Tuple[int, ...]]:
        if depth == n:
            yield tuple(image)
            return
        v = order[depth]
        for x in T.vertices:
            image[v] = x
            if ok(v):
                yield from visit(depth + 1)
        image[v] = -1

    for img in visit(0):
        yield VertexMap(K, T, img)


def exists_nondegenerate_map(K: SimplicialComplex, T: SimplicialComplex) -> Optional[VertexMap]:
    """A witness non-degenerate map, or None when none exists."""
    return next(nondegenerate_maps(K, T), None)


def chromatic_number_by_maps(K: SimplicialComplex) -> int:
    """chi(K) as the least m with a non-degenerate map into Δ^{[m]}."""
    if K.n_vertices == 0:
        return 0
    m = 1
    while exists_nondegenerate_map(K, simplex(m)) is None:
        m += 1
    return m


class GeneralizedChromatic(NamedTuple):
    value: float
    witnesses: List[Tuple[int, VertexMap]]


def generalized_chromatic(K: SimplicialComplex,
                          family: Sequence[Tuple[SimplicialComplex, float]]) -> GeneralizedChromatic:
    """Infimum of the weights of family members admitting a non-degenerate map from K."""
    value = math.inf
    witnesses: List[Tuple[int, VertexMap]] = []
    for i, (T, weight) in enumerate(family):
        f = exists_nondegenerate_map(K, T)
        if f is None:
            continue
        witnesses.append((i, f))
        value = min(value, weight)
    return GeneralizedChromatic(value, witnesses)


# -- Phi_d certificates ------------------------------------------------------------

@dataclass
class PhiCertificate:
    """Involution omega of a pure d-complex with an invariant d-simplex sigma.

    ``restriction`` is omega on sigma; ``membership`` is a stored projectivity
    with the same bijection and the closed dual path realizing it.
    """

    gamma: SimplicialComplex
    omega: VertexMap
    sigma: Simplex
    restriction: Projectivity
    membership: Projectivity
    holonomy: HolonomyGroup = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.sigma) - 1

    @property
    def membership_path(self) -> Tuple[Simplex, ...]:
        return self.membership.path

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "sigma": list(self.sigma),
            "involution": list(self.omega.image),
            "tau": {str(x): y for x, y in self.restriction.bijection},
            "membership_path": [list(s) for s in self.membership_path],
            "holonomy": self.holonomy.to_dict(),
        }


def phi_d_certify(gamma: SimplicialComplex, omega: Union[VertexMap, Sequence[int]],
                  sigma: Sequence[int]) -> PhiCertificate:
    """Certify that (gamma, omega, sigma) is a Phi_d complex.

    Raises:
        PhiCertificationError: with code ``not_pure``, ``not_simplicial``,
            ``not_involution``, ``sigma_not_facet``, ``sigma_not_invariant``,
            ``tau_trivial`` or ``tau_not_in_holonomy``.
    """
    if not gamma.is_pure() or gamma.n_vertices == 0:
        raise PhiCertificationError("complex is not pure", code="not_pure")
    if not isinstance(omega, VertexMap):
        try:
            omega = VertexMap(gamma, gamma, tuple(omega))
        except HypothesisFailure as e:
            raise PhiCertificationError(str(e), code="not_simplicial") from e
    if not omega.nondegenerate:
        raise PhiCertificationError("involution is degenerate", code="not_simplicial")
    if any(omega(omega(v)) != v for v in gamma.vertices):
        raise PhiCertificationError("map is not an involution", code="not_involution")
    sigma = tuple(sorted(sigma))
    if sigma not in gamma.maximal_simplices:
        raise PhiCertificationError(f"{list(sigma)} is not a facet", code="sigma_not_facet")
    if omega.apply(sigma) != sigma:
        raise PhiCertificationError(f"{list(sigma)} is not invariant", code="sigma_not_invariant")
    tau = Projectivity(sigma, sigma, tuple(sorted((x, omega(x)) for x in sigma)))
    if tau.is_identity:
        raise PhiCertificationError("involution fixes sigma pointwise", code="tau_trivial")
    group = holonomy_group(gamma, sigma)
    member = group.realize(tau)
    if member is None:
        raise PhiCertificationError(f"restriction is not in the holonomy group "
                                    f"({group.label})", code="tau_not_in_holonomy")
    if along(member.path).bijection != tau.bijection:
        raise InvariantViolation("stored membership path does not replay to the restriction")
    logger.info("Phi_%d certificate: tau %s in %s", len(sigma) - 1, dict(tau.bijection), group.label)
    return PhiCertificate(gamma, omega, sigma, tau, member, group)


@dataclass
class InvolutionCheck:
    """The involution of Hom(Gamma, K) induced by omega."""

    cellular: CellularMap
    is_involution: bool
    fixed_cells: List[MultiHom]

    @property
    def free(self) -> bool:
        return not self.fixed_cells


def induced_involution(cert: PhiCertificate, K: SimplicialComplex,
                       h: Optional[HomComplex] = None,
                       cap: Optional[int] = DEFAULT_CELL_CAP) -> InvolutionCheck:
    """Precomposition with omega on Hom(Gamma, K); free iff no cell is mapped to itself."""
    if h is None:
        h = build_hom(cert.gamma, K, cap=cap)
    m = induced_precompose(h, cert.omega, codomain=h)
    table = m.table
    involution = all(table[table[eta]] == eta for eta in h)
    fixed = [eta for eta in h if table[eta] == eta]
    return InvolutionCheck(m, involution, fixed)


# -- bounds ------------------------------------------------------------------------

def lovasz_bound_report(cert: PhiCertificate, K: SimplicialComplex,
                        cap: Optional[int] = DEFAULT_CELL_CAP,
                        attempt_pi1: bool = False,
                        odd_floor: bool = False,
                        assumed_coindex: Optional[int] = None,
                        passes: int = 50, max_word: int = 400,
                        coloring_budget: int = DEFAULT_COLORING_BUDGET) -> BoundReport:
    """Lower bound on chi(K) from the connectivity of Hom(Gamma, K).

    k odd gives chi(K) >= k + d + 3. For k even no bound is claimed unless
    ``odd_floor`` asks to fall back to k - 1. An ``assumed_coindex`` m (even)
    gives chi(K) >= m + d + 2 directly.

    Raises:
        NotPureError: K is not pure of the same dimension as Gamma.
        ResourceCapExceeded: Hom(Gamma, K) is too large.
        InvariantViolation: the bound exceeds the computed chromatic number.
    """
    d = cert.d
    if not K.is_pure() or K.dimension != d:
        raise NotPureError(f"K must be pure of dimension {d}")
    chi, _ = chromatic_number(K, budget=coloring_budget)
    h = build_hom(cert.gamma, K, cap=cap)
    notes: List[str] = []
    if h.is_empty:
        return BoundReport(d, None, None, "no bound derivable: Hom(Gamma, K) is empty",
                           None, None, chi, 0, notes)
    est = connectivity_estimate(homology_of(chains_of(h)), attempt_pi1=attempt_pi1,
                                passes=passes, max_word=max_word)
    level = CertificateLevel(est.certificate_level)
    if est.note:
        notes.append(est.note)
    if level is CertificateLevel.HOMOLOGY and est.k >= 1:
        notes.append("conditional on k-connectedness: vanishing homology is necessary, not sufficient")

    bound: Optional[int] = None
    theorem: Optional[TheoremApplied] = None
    if assumed_coindex is not None:
        if assumed_coindex % 2:
            parity = f"assumed coindex {assumed_coindex} is odd; the theorem is stated for m even"
        else:
            bound, theorem = assumed_coindex + d + 2, TheoremApplied.THM_MAIN
            parity = f"m = {assumed_coindex} even (assumed coindex)"
    elif est.k % 2:
        bound, theorem = est.k + d + 3, TheoremApplied.COR_LBK
        parity = f"k = {est.k} odd"
    elif odd_floor:
        k = est.k - 1
        bound, theorem = k + d + 3, TheoremApplied.COR_LBK
        parity = f"k = {est.k} even; using the odd connectivity k - 1 = {k}"
    else:
        parity = f"k = {est.k} even; the corollary is stated for k odd, no bound claimed"

    report = BoundReport(d, est.k, level, parity, bound, theorem, chi, len(h), notes)
    if not report.consistent:
        raise InvariantViolation(f"claimed bound {bound} exceeds chi(K) = {chi}")
    logger.info("Bound report: k=%d, bound=%s, chi=%d", est.k, bound, chi)
    return report


def _matrices(f: ChainMap) -> Dict[int, List[List[int]]]:
    return {m.dimension: [[int(x) for x in row] for row in m.free.tolist()]
            for m in induced_maps(f)}


def _square(sigma1: Simplex, sigma2: Simplex, left: ChainMap, right: ChainMap) -> TransportSquareReport:
    lm, rm = induced_maps(left), induced_maps(right)
    mismatched = [a.dimension for a, b in zip(lm, rm)
                  if not np.array_equal(a.free, b.free) or a.torsion_images != b.torsion_images
                  or a.free_torsion != b.free_torsion]
    return TransportSquareReport(list(sigma1), list(sigma2), _matrices(left), _matrices(right),
                                 mismatched)


def _restriction_map(h: HomComplex, sigma: Simplex, fibres: FibreCache) -> ChainMap:
    alpha = simplex_inclusion(h.source, sigma)
    return chain_map_of(induced_precompose(h, alpha, codomain=fibres(len(sigma))))


def transport_square_check(K: SimplicialComplex, L: SimplicialComplex,
                           sigma1: Sequence[int], sigma2: Sequence[int],
                           cap: Optional[int] = DEFAULT_CELL_CAP,
                           h: Optional[HomComplex] = None,
                           fibres: Optional[FibreCache] = None) -> TransportSquareReport:
    """Compare restriction to sigma1 with restriction to sigma2 followed by transport."""
    s1, s2 = tuple(sorted(sigma1)), tuple(sorted(sigma2))
    p = perspectivity(s1, s2)
    if h is None:
        h = build_hom(K, L, cap=cap)
    if fibres is None:
        fibres = FibreCache(L, cap=cap, rule=h.rule)
    a1 = _restriction_map(h, s1, fibres)
    a2 = _restriction_map(h, s2, fibres)
    transport = chain_map_of(transport_map(L, p, fibres))
    return _square(s1, s2, a1, a2.then(transport))


def holonomy_invariance_check(K: SimplicialComplex, L: SimplicialComplex, sigma: Sequence[int],
                              cap: Optional[int] = DEFAULT_CELL_CAP) -> List[TransportSquareReport]:
    """For each holonomy generator tau at sigma, compare restriction with restriction then tau."""
    s = tuple(sorted(sigma))
    group = holonomy_group(K, s)
    h = build_hom(K, L, cap=cap)
    fibres = FibreCache(L, cap=cap, rule=h.rule)
    alpha = _restriction_map(h, s, fibres)
    reports = []
    for g in group.generators:
        transport = chain_map_of(transport_map(L, g, fibres))
        reports.append(_square(s, s, alpha, alpha.then(transport)))
    return reports


def two_iota_star_check(r: int, n: int, cap: Optional[int] = DEFAULT_CELL_CAP) -> TwoIotaVerdict:
    """Homology check of the flip identity for the edge inclusion K_2 -> C_{2r+1}.

    Verifies that the flip of K_2 composed with restriction equals restriction
    on homology and, for n even, that restriction is zero on the free part of
    degree n - 2. The flip's degree on that group is reported.
    """
    if r < 1 or n < 2:
        raise HypothesisFailure(f"need r >= 1 and n >= 2, got r={r}, n={n}", code="parameter")
    C = cycle(2 * r + 1)
    Kn = complete(n)
    K2 = complete(2)
    parity = n % 2 == 0
    h_cycle = build_hom(C, Kn, cap=cap)
    h_edge = build_hom(K2, Kn, cap=cap)
    top = n - 2

    beta = chain_map_of(induced_precompose(h_edge, VertexMap(K2, K2, (1, 0)), codomain=h_edge))
    beta_map = induced_on_homology(beta, top)
    degree = int(beta_map.free[0, 0]) if beta_map.free.shape == (1, 1) else None

    if h_cycle.is_empty:
        return TwoIotaVerdict(r, n, 0, parity, True, True if parity else None, degree, {},
                              f"Hom(C_{2 * r + 1}, K_{n}) is empty; vacuous pass")
    iota = chain_map_of(induced_precompose(h_cycle, VertexMap(K2, C, (0, 1)), codomain=h_edge))
    commutes = same_on_homology(iota.then(beta), iota)
    hg = homology_of(iota.source)
    torsion = {d: list(hg.torsion[d]) for d in range(hg.top + 1) if hg.torsion[d]}
    iota_zero: Optional[bool] = None
    if parity:
        iota_zero = not induced_on_homology(iota, top).free.any()
        message = f"iota_* = 0 on H{top}: {'PASS' if iota_zero else 'FAIL'}"
    else:
        message = f"n = {n} odd: no vanishing claimed"
    if not commutes:
        message += "; flip composed with iota differs from iota on homology"
    verdict = TwoIotaVerdict(r, n, len(h_cycle), parity, commutes, iota_zero, degree, torsion, message)
    logger.info("two-iota check r=%d n=%d: %s", r, n, message)
    return verdict
