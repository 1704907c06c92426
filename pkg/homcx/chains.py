"""Integer cellular chains, homology with generators, and induced maps.

Homology is computed in two stages:

1. A sparse algebraic reduction removes pairs (a, b) with ``<da, b> = +-1``,
   keeping the projection onto the smaller complex and the inclusion back so
   cycles can be moved in both directions.
2. Smith normal forms of the small reduced boundary matrices give Betti
   numbers, torsion coefficients, generators and coordinates.
"""

import logging
import random
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import HypothesisFailure, InvariantViolation
from .hom_complex import CellularMap, HomComplex, cell_facets
from .simplicial import SimplicialComplex, all_simplices
from .smith import DEFAULT_GUARD, SmithForm, rank_mod_p, smith_normal_form

logger = logging.getLogger(__name__)

Chain = Dict[int, int]


def _add_into(target: Chain, source: Chain, factor: int = 1) -> None:
    for key, value in source.items():
        new = target.get(key, 0) + factor * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)


@dataclass(eq=False)
class ChainComplex:
    """Free chain complex over Z given by sparse boundary columns.

    ``boundaries[d][i]`` is the boundary of the ``i``-th ``d``-cell as a dict
    from ``(d-1)``-cell ordinals to coefficients; ``boundaries[0]`` holds
    empty dicts.
    """

    ranks: List[int]
    boundaries: List[List[Chain]]
    labels: Optional[List[List[Any]]] = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.ranks) - 1

    @property
    def is_empty(self) -> bool:
        return sum(self.ranks) == 0

    def rank(self, d: int) -> int:
        return self.ranks[d] if 0 <= d < len(self.ranks) else 0

    def boundary(self, d: int, chain: Chain) -> Chain:
        out: Chain = {}
        if d <= 0:
            return out
        for i, c in chain.items():
            _add_into(out, self.boundaries[d][i], c)
        return out

    def boundary_matrix(self, d: int) -> np.ndarray:
        """Dense matrix of the boundary from dimension d to d-1."""
        M = np.zeros((self.rank(d - 1), self.rank(d)), dtype=np.int64)
        if 1 <= d < len(self.ranks):
            for i, col in enumerate(self.boundaries[d]):
                for j, c in col.items():
                    M[j, i] = c
        return M

    def same_as(self, other: "ChainComplex") -> bool:
        """True if both complexes have the same ranks and boundary columns."""
        return other is self or (self.ranks == other.ranks and self.boundaries == other.boundaries)

    def check_dd(self) -> None:
        """Raise InvariantViolation unless the boundary squares to zero."""
        for d in range(2, len(self.ranks)):
            for i in range(self.ranks[d]):
                dd = self.boundary(d - 1, self.boundaries[d][i])
                if dd:
                    raise InvariantViolation(
                        f"boundary of boundary is nonzero on cell {i} of dimension {d}: {dd}")


_CHAINS_CACHE: "weakref.WeakKeyDictionary[HomComplex, ChainComplex]" = weakref.WeakKeyDictionary()


def chains_of(h: HomComplex) -> ChainComplex:
    """Cellular chain complex of a Hom complex; checks that dd = 0."""
    cached = _CHAINS_CACHE.get(h)
    if cached is not None:
        return cached
    ranks = h.counts()
    boundaries: List[List[Chain]] = [[{} for _ in range(ranks[0])]] if ranks else []
    for d in range(1, len(ranks)):
        column_list = []
        for eta in h.cells[d]:
            col: Chain = {}
            for face, sign in cell_facets(h, eta):
                col[h.ordinal(face)] = sign
            column_list.append(col)
        boundaries.append(column_list)
    cc = ChainComplex(ranks, boundaries, labels=[list(g) for g in h.cells])
    cc.check_dd()
    _CHAINS_CACHE[h] = cc
    return cc


def simplicial_chains(K: SimplicialComplex) -> ChainComplex:
    """Oriented simplicial chain complex of K (simplices oriented by sorted vertices)."""
    simplices = all_simplices(K)
    by_dim: List[List[Tuple[int, ...]]] = [[] for _ in range(K.dimension + 1)]
    for s in simplices:
        by_dim[len(s) - 1].append(s)
    index = [{s: i for i, s in enumerate(group)} for group in by_dim]
    boundaries: List[List[Chain]] = [[{} for _ in by_dim[0]]] if by_dim else []
    for d in range(1, len(by_dim)):
        cols = []
        for s in by_dim[d]:
            cols.append({index[d - 1][s[:j] + s[j + 1:]]: (-1) ** j for j in range(len(s))})
        boundaries.append(cols)
    cc = ChainComplex([len(g) for g in by_dim], boundaries, labels=by_dim)
    cc.check_dd()
    return cc


# -- chain maps ----------------------------------------------------------------

@dataclass(eq=False)
class ChainMap:
    """Degree-0 chain map; ``columns[d][i]`` is the image of source d-cell i."""

    source: ChainComplex
    target: ChainComplex
    columns: List[List[Chain]]

    def apply(self, d: int, chain: Chain) -> Chain:
        out: Chain = {}
        if d >= len(self.columns):
            return out
        for i, c in chain.items():
            _add_into(out, self.columns[d][i], c)
        return out

    def matrix(self, d: int) -> np.ndarray:
        M = np.zeros((self.target.rank(d), self.source.rank(d)), dtype=np.int64)
        if d < len(self.columns):
            for i, col in enumerate(self.columns[d]):
                for j, c in col.items():
                    M[j, i] = c
        return M

    def check(self) -> None:
        """Raise InvariantViolation unless the map commutes with the boundaries."""
        for d in range(1, len(self.columns)):
            for i in range(self.source.rank(d)):
                lhs = self.target.boundary(d, self.columns[d][i])
                rhs = self.apply(d - 1, self.source.boundaries[d][i])
                if lhs != rhs:
                    raise InvariantViolation(
                        f"chain map does not commute with the boundary on cell {i} of dimension {d}")

    def then(self, other: "ChainMap") -> "ChainMap":
        """Composite: ``self`` first, then ``other``."""
        if not self.target.same_as(other.source):
            raise HypothesisFailure("chain maps are not composable", code="mismatch")
        columns = [[other.apply(d, col) for col in group] for d, group in enumerate(self.columns)]
        return ChainMap(self.source, other.target, columns)

    def is_identity(self) -> bool:
        if self.source is not self.target:
            return False
        for d, group in enumerate(self.columns):
            for i, col in enumerate(group):
                if col != {i: 1}:
                    return False
        return all(len(self.columns[d]) == self.source.rank(d) for d in range(len(self.source.ranks)))


def identity_chain_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, [[{i: 1} for i in range(r)] for r in c.ranks])


def chain_map_of(m: CellularMap) -> ChainMap:
    """Chain-level version of a cellular map; commutation is verified."""
    src = chains_of(m.domain)
    tgt = chains_of(m.codomain)
    columns: List[List[Chain]] = []
    for d, group in enumerate(m.domain.cells):
        cols = []
        for eta in group:
            col: Chain = {}
            for cell, c in m.chain_image(eta).items():
                pos = m.codomain.index.get(cell)
                if pos is None or pos[0] != d:
                    raise InvariantViolation(f"chain image {cell} of {eta} is not a {d}-cell")
                col[pos[1]] = col.get(pos[1], 0) + c
            cols.append({k: v for k, v in col.items() if v})
        columns.append(cols)
    cmap = ChainMap(src, tgt, columns)
    cmap.check()
    return cmap


# -- reduction -------------------------------------------------------------------

class _Step(NamedTuple):
    d: int        # dimension of b; a has dimension d + 1
    a: int
    b: int
    w: int        # <da, b>, a unit
    da: Chain     # boundary of a at elimination time
    cob_b: Chain  # {c: <dc, b>} for the other (d+1)-cells c


class Reduction:
    """Sparse elimination of unit pivots with projection and inclusion maps."""

    def __init__(self, cc: ChainComplex):
        self.cc = cc
        top = len(cc.ranks)
        self.bd: List[List[Optional[Chain]]] = [[dict(col) for col in group] for group in cc.boundaries]
        self.cob: List[List[set]] = [[set() for _ in range(r)] for r in cc.ranks]
        for d in range(1, top):
            for i, col in enumerate(self.bd[d]):
                for j in col:
                    self.cob[d - 1][j].add(i)
        self.alive: List[set] = [set(range(r)) for r in cc.ranks]
        self.steps: List[_Step] = []
        self._run()
        self.order = [sorted(a) for a in self.alive]
        self.position = [{c: i for i, c in enumerate(o)} for o in self.order]

    def _eliminate(self, d: int, a: int, b: int):
        bd, cob = self.bd, self.cob
        da = bd[d + 1][a]
        w = da[b]
        cob_b = {c: bd[d + 1][c][b] for c in cob[d][b] if c != a}
        self.steps.append(_Step(d, a, b, w, dict(da), cob_b))
        for c, lam in cob_b.items():
            row = bd[d + 1][c]
            factor = lam * w
            for x, coef in da.items():
                new = row.get(x, 0) - factor * coef
                if new:
                    if x not in row:
                        cob[d][x].add(c)
                    row[x] = new
                elif x in row:
                    del row[x]
                    cob[d][x].discard(c)
        for x in da:
            cob[d][x].discard(a)
        if d + 2 < len(bd):
            for e in cob[d + 1][a]:
                bd[d + 2][e].pop(a, None)
        cob[d + 1][a] = set()
        if d >= 1:
            for x in bd[d][b]:
                cob[d - 1][x].discard(b)
        bd[d][b] = None
        bd[d + 1][a] = None
        cob[d][b] = set()
        self.alive[d + 1].discard(a)
        self.alive[d].discard(b)

    def _run(self):
        for dim in range(len(self.cc.ranks) - 1, 0, -1):
            progress = True
            while progress:
                progress = False
                for a in sorted(self.alive[dim]):
                    col = self.bd[dim][a]
                    if col is None:
                        continue
                    units = [b for b, c in col.items() if c in (1, -1)]
                    if not units:
                        continue
                    b = min(units, key=lambda x: (len(self.cob[dim - 1][x]), x))
                    self._eliminate(dim - 1, a, b)
                    progress = True
        logger.info("Reduced chain complex %s -> %s",
                    self.cc.ranks, [len(a) for a in self.alive])

    def project(self, d: int, chain: Chain) -> Chain:
        """Image of an original d-chain in the reduced complex (original ids)."""
        x = dict(chain)
        for s in self.steps:
            if s.d == d:
                coef = x.get(s.b)
                if coef:
                    _add_into(x, s.da, -coef * s.w)
            elif s.d + 1 == d:
                x.pop(s.a, None)
        return x

    def include(self, d: int, chain: Chain) -> Chain:
        """Image of a reduced d-chain (original ids) in the original complex."""
        y = dict(chain)
        for s in reversed(self.steps):
            if s.d + 1 == d:
                total = sum(y.get(c, 0) * lam for c, lam in s.cob_b.items())
                if total:
                    _add_into(y, {s.a: -total * s.w})
        return y

    def reduced_matrix(self, d: int) -> np.ndarray:
        rows = self.order[d - 1] if d >= 1 else []
        cols = self.order[d] if d < len(self.order) else []
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        if d >= 1 and d < len(self.order):
            pos = self.position[d - 1]
            for i, c in enumerate(cols):
                for j, coef in self.bd[d][c].items():
                    M[pos[j], i] = coef
        return M

    def to_vector(self, d: int, chain: Chain) -> np.ndarray:
        v = np.zeros(len(self.order[d]), dtype=object)
        for c, coef in chain.items():
            v[self.position[d][c]] = coef
        return v

    def from_vector(self, d: int, vec) -> Chain:
        return {self.order[d][i]: int(x) for i, x in enumerate(vec) if x}


# -- homology ------------------------------------------------------------------

@dataclass
class _DimBasis:
    kernel_smith: SmithForm   # of the reduced d-boundary (or augmentation)
    image_smith: SmithForm    # of the boundary image in kernel coordinates
    kernel_rank: int
    n_cells: int


@dataclass(eq=False)
class HomologyBasis:
    """Generators and coordinate maps for every dimension."""

    reduction: Reduction
    dims: List[_DimBasis]
    free_generators: List[List[Chain]]
    torsion_generators: List[List[Tuple[Chain, int]]]

    def coordinates(self, d: int, cycle: Chain) -> Tuple[List[int], List[int]]:
        """(free coordinates, torsion residues) of a d-cycle of the original complex."""
        info = self.dims[d]
        reduced = self.reduction.project(d, cycle)
        z = self.reduction.to_vector(d, reduced)
        r = info.kernel_smith.rank
        y = info.kernel_smith.Q_inv.astype(object).dot(z)
        if any(y[:r]):
            raise InvariantViolation(f"chain in dimension {d} is not a cycle")
        c = info.image_smith.P.astype(object).dot(y[r:]) if info.kernel_rank else np.zeros(0, dtype=object)
        diag = info.image_smith.diagonal
        t = len(diag)
        torsion = [int(c[i]) % diag[i] for i in range(t) if diag[i] > 1]
        free = [int(x) for x in c[t:]]
        return free, torsion


@dataclass(eq=False)
class HomologyGroups:
    """Betti numbers and torsion per dimension, optionally with a basis."""

    betti: List[int]
    torsion: List[List[int]]
    reduced: bool
    empty: bool = False
    basis: Optional[HomologyBasis] = field(default=None, repr=False)
    complex: Optional[ChainComplex] = field(default=None, repr=False)

    @property
    def top(self) -> int:
        return len(self.betti) - 1

    def is_zero(self, d: int) -> bool:
        if d < 0:
            return not (self.empty and self.reduced and d == -1)
        if d > self.top:
            return True
        return self.betti[d] == 0 and not self.torsion[d]

    def group_string(self, d: int) -> str:
        if d > self.top or d < 0:
            return "Z" if (d == -1 and self.empty and self.reduced) else "0"
        parts = []
        if self.betti[d] == 1:
            parts.append("Z")
        elif self.betti[d] > 1:
            parts.append(f"Z^{self.betti[d]}")
        parts.extend(f"Z/{t}" for t in self.torsion[d])
        return " + ".join(parts) if parts else "0"

    def summary(self) -> str:
        if self.empty:
            return "empty" + ("; dim-1: Z" if self.reduced else "")
        return "; ".join(f"dim{d}: {self.group_string(d)}" for d in range(self.top + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reduced": self.reduced,
            "empty": self.empty,
            "dimensions": [
                {"dim": d, "betti": self.betti[d], "torsion": list(self.torsion[d])}
                for d in range(self.top + 1)
            ],
        }


def _dimension_basis(red: Reduction, d: int, top: int, reduced: bool,
                     guard: Optional[int]) -> _DimBasis:
    n_d = len(red.order[d])
    if d == 0:
        D = np.ones((1 if reduced and n_d else 0, n_d), dtype=np.int64)
    else:
        D = red.reduced_matrix(d)
    ks = smith_normal_form(D, guard=guard)
    k = n_d - ks.rank
    if d + 1 <= top:
        D_up = red.reduced_matrix(d + 1)
        B = ks.Q_inv.astype(object).dot(D_up.astype(object))[ks.rank:, :]
    else:
        B = np.zeros((k, 0), dtype=object)
    img = smith_normal_form(np.asarray(B, dtype=object).astype(np.int64)
                            if _fits(B, guard) else np.asarray(B, dtype=object), guard=guard)
    return _DimBasis(ks, img, k, n_d)


def _fits(B: np.ndarray, guard: Optional[int]) -> bool:
    if guard is None or B.size == 0:
        return guard is not None
    return max(abs(int(x)) for x in B.flat) <= guard


def homology(c: ChainComplex, reduced: bool = False, with_basis: bool = True,
             workers: int = 1, guard: Optional[int] = DEFAULT_GUARD) -> HomologyGroups:
    """Integral homology of a chain complex.

    Args:
        c: The chain complex.
        reduced: Use the augmented complex (reduced homology).
        with_basis: Keep generators and coordinate data for induced maps.
        workers: Threads used for the per-dimension Smith forms.
        guard: int64 magnitude guard passed to the Smith form.
    """
    if c.is_empty:
        return HomologyGroups([], [], reduced, empty=True, complex=c)
    red = Reduction(c)
    top = c.dimension

    def one(d):
        return _dimension_basis(red, d, top, reduced, guard)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            dims = list(pool.map(one, range(top + 1)))
    else:
        dims = [one(d) for d in range(top + 1)]

    betti, torsion = [], []
    free_gens: List[List[Chain]] = []
    tors_gens: List[List[Tuple[Chain, int]]] = []
    for d, info in enumerate(dims):
        diag = info.image_smith.diagonal
        t = len(diag)
        betti.append(info.kernel_rank - t)
        torsion.append([s for s in diag if s > 1])
        if not with_basis:
            continue
        r = info.kernel_smith.rank
        Z = info.kernel_smith.Q.astype(object)[:, r:]
        G = Z.dot(info.image_smith.P_inv.astype(object)) if info.kernel_rank else Z
        free_gens.append([red.include(d, red.from_vector(d, G[:, i])) for i in range(t, info.kernel_rank)])
        tors_gens.append([(red.include(d, red.from_vector(d, G[:, i])), diag[i])
                          for i in range(t) if diag[i] > 1])
    basis = HomologyBasis(red, dims, free_gens, tors_gens) if with_basis else None
    hg = HomologyGroups(betti, torsion, reduced, basis=basis, complex=c)
    logger.info("Homology: %s", hg.summary())
    return hg


_HOMOLOGY_CACHE: "weakref.WeakKeyDictionary[ChainComplex, Dict[bool, HomologyGroups]]" = \
    weakref.WeakKeyDictionary()


def homology_of(c: ChainComplex, reduced: bool = True) -> HomologyGroups:
    """Cached homology with basis data."""
    per = _HOMOLOGY_CACHE.setdefault(c, {})
    if reduced not in per:
        per[reduced] = homology(c, reduced=reduced)
    return per[reduced]


def dense_homology(c: ChainComplex, reduced: bool = False,
                   rng: Optional[random.Random] = None) -> Tuple[List[int], List[List[int]]]:
    """Betti numbers and torsion straight from dense boundary matrices.

    Skips the reduction; with ``rng`` the rows and columns are shuffled first.
    Meant as an independent check on small complexes.
    """
    top = c.dimension
    ranks, torsions = [], []
    for d in range(top + 2):
        if d == 0:
            M = np.ones((1 if reduced and c.rank(0) else 0, c.rank(0)), dtype=np.int64)
        else:
            M = c.boundary_matrix(d) if d <= top else np.zeros((c.rank(top), 0), dtype=np.int64)
        if rng is not None and M.size:
            rows = list(range(M.shape[0]))
            cols = list(range(M.shape[1]))
            rng.shuffle(rows)
            rng.shuffle(cols)
            M = M[rows, :][:, cols]
        snf = smith_normal_form(M)
        ranks.append(snf.rank)
        torsions.append(snf.torsion)
    betti = [c.rank(d) - ranks[d] - ranks[d + 1] for d in range(top + 1)]
    return betti, [torsions[d + 1] for d in range(top + 1)]


def betti_mod_p(c: ChainComplex, p: int) -> List[int]:
    """Betti numbers over Z/p (unreduced)."""
    ranks = [0] + [rank_mod_p(c.boundary_matrix(d), p) if c.rank(d) and c.rank(d - 1) else 0
                   for d in range(1, c.dimension + 1)] + [0]
    return [c.rank(d) - ranks[d] - ranks[d + 1] for d in range(c.dimension + 1)]


# -- induced maps --------------------------------------------------------------

@dataclass
class InducedMap:
    """A chain map on homology in one dimension.

    ``free`` has one column per free generator of the source and one row per
    free generator of the target. ``torsion_images`` lists, for each torsion
    generator of the source, its torsion residues in the target; the torsion
    part of free generators' images is kept in ``free_torsion``.
    """

    dimension: int
    free: np.ndarray
    torsion_images: List[List[int]]
    free_torsion: List[List[int]]

    def is_zero(self) -> bool:
        return (not np.any(self.free)
                and all(not any(t) for t in self.torsion_images)
                and all(not any(t) for t in self.free_torsion))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dimension,
            "free": [[int(x) for x in row] for row in self.free.tolist()],
            "torsion_images": self.torsion_images,
            "free_torsion": self.free_torsion,
        }


def induced_on_homology(f: ChainMap, d: int, reduced: bool = True) -> InducedMap:
    """Matrix of the induced map in dimension ``d`` in the Smith-form bases."""
    hs = homology_of(f.source, reduced)
    ht = homology_of(f.target, reduced)
    if d < 0 or d > max(f.source.dimension, f.target.dimension):
        raise HypothesisFailure(f"dimension {d} absent", code="dimension")
    src_free = hs.basis.free_generators[d] if (hs.basis and d <= hs.top) else []
    src_tors = hs.basis.torsion_generators[d] if (hs.basis and d <= hs.top) else []
    n_target_free = ht.betti[d] if d <= ht.top else 0
    M = np.zeros((n_target_free, len(src_free)), dtype=object)
    free_torsion: List[List[int]] = []
    for j, gen in enumerate(src_free):
        free, tors = _target_coordinates(ht, d, f.apply(d, gen))
        for i, x in enumerate(free):
            M[i, j] = x
        free_torsion.append(tors)
    torsion_images: List[List[int]] = []
    for gen, order in src_tors:
        free, tors = _target_coordinates(ht, d, f.apply(d, gen))
        if any(free):
            raise InvariantViolation(f"a torsion class of order {order} maps to a free class")
        torsion_images.append(tors)
    return InducedMap(d, M, torsion_images, free_torsion)


def _target_coordinates(ht: HomologyGroups, d: int, chain: Chain) -> Tuple[List[int], List[int]]:
    if ht.empty or d > ht.top:
        if chain:
            raise InvariantViolation("nonzero image in a zero chain group")
        return [], []
    return ht.basis.coordinates(d, chain)


def induced_maps(f: ChainMap, reduced: bool = True) -> List[InducedMap]:
    """Induced maps in every dimension of the source."""
    top = max(len(f.source.ranks), len(f.target.ranks)) - 1
    return [induced_on_homology(f, d, reduced) for d in range(top + 1)]


def same_on_homology(f: ChainMap, g: ChainMap, reduced: bool = True) -> bool:
    """True if two chain maps with the same ends agree on homology."""
    for a, b in zip(induced_maps(f, reduced), induced_maps(g, reduced)):
        if not np.array_equal(a.free, b.free) or a.torsion_images != b.torsion_images \
                or a.free_torsion != b.free_torsion:
            return False
    return True


# -- connectivity ----------------------------------------------------------------

class ConnectivityEstimate(NamedTuple):
    k: int
    certificate_level: str   # "homology" or "homology+pi1"
    note: str


def connectivity_estimate(hg: HomologyGroups, attempt_pi1: bool = False,
                          passes: int = 50, max_word: int = 400) -> ConnectivityEstimate:
    """Largest k with vanishing reduced homology through degree k.

    With ``attempt_pi1`` and ``k >= 1`` the edge-path group of the 2-skeleton
    is simplified; the certificate is upgraded only if it becomes trivial.
    """
    if not hg.reduced:
        raise HypothesisFailure("connectivity needs reduced homology", code="not_reduced")
    if hg.empty:
        return ConnectivityEstimate(-2, "homology", "empty complex")
    k = -1
    while k + 1 <= hg.top and hg.is_zero(k + 1):
        k += 1
    note = ""
    if k == hg.top:
        note = "reduced homology vanishes in every degree"
    if k <= 0:
        return ConnectivityEstimate(k, "homology", note or "exact in degrees <= 0")
    if attempt_pi1 and hg.complex is not None:
        from .presentations import edge_path_presentation

        presentation = edge_path_presentation(hg.complex)
        if presentation.simplify(passes=passes, max_word=max_word):
            return ConnectivityEstimate(k, "homology+pi1", note or "edge-path group trivial")
        note = note or f"edge-path group not trivialized ({len(presentation.generators)} generators left)"
    return ConnectivityEstimate(k, "homology", note or "conditional on pi_1 = 1")
