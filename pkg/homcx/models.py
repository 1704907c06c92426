"""Report data models for homcx."""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class CertificateLevel(str, Enum):
    HOMOLOGY = "homology"
    HOMOLOGY_PI1 = "homology+pi1"


class TheoremApplied(str, Enum):
    THM_MAIN = "thm_main"  # coindex assumed, m even: chi >= m + d + 2
    COR_LBK = "cor_LBK"    # k-connected, k odd: chi >= k + d + 3


class SearchStatus(str, Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"  # proven: no solution exists
    BUDGET = "budget"        # gave up; nothing proven


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class SearchResult:
    """Outcome of a bounded backtracking search."""

    status: SearchStatus
    value: Any = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def to_dict(self) -> Dict[str, Any]:
        value = self.value.to_dict() if hasattr(self.value, "to_dict") else self.value
        return {"status": self.status.value, "nodes": self.nodes, "value": _plain(value)}


@dataclass
class DimensionHomology:
    dim: int
    betti: int
    torsion: List[int] = field(default_factory=list)

    @property
    def group(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass
class HomologyReport:
    """Homology of one complex, with the connectivity estimate."""

    counts: List[int]
    euler_characteristic: int
    reduced: bool
    dimensions: List[DimensionHomology]
    connectivity: int
    certificate_level: CertificateLevel
    note: str = ""

    @property
    def summary(self) -> str:
        if not self.dimensions:
            return "empty"
        return "; ".join(f"dim{d.dim}: {d.group}" for d in self.dimensions)

    def to_dict(self) -> Dict[str, Any]:
        return _plain(asdict(self))


@dataclass
class BoundReport:
    """A Lovász-type chromatic lower bound and the facts it rests on."""

    d: int
    connectivity_k: Optional[int]
    certificate_level: Optional[CertificateLevel]
    parity_note: str
    claimed_bound: Optional[int]
    theorem_applied: Optional[TheoremApplied]
    chromatic_number: int
    hom_cells: int
    notes: List[str] = field(default_factory=list)

    @property
    def has_bound(self) -> bool:
        return self.claimed_bound is not None

    @property
    def consistent(self) -> bool:
        return self.claimed_bound is None or self.claimed_bound <= self.chromatic_number

    def to_dict(self) -> Dict[str, Any]:
        data = _plain(asdict(self))
        data["consistent"] = self.consistent
        return data


@dataclass
class CollapseReport:
    """Comparison of Hom(K, L) and Hom(K', L) across one vertex collapse."""

    removed_vertex: int
    retained_vertex: int
    source_homology: List[DimensionHomology]
    target_homology: List[DimensionHomology]
    identity_exact: bool
    inverse_isomorphisms: bool
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.identity_exact and self.inverse_isomorphisms and not self.failures

    def to_dict(self) -> Dict[str, Any]:
        data = _plain(asdict(self))
        data["passed"] = self.passed
        return data


@dataclass
class TransportSquareReport:
    """Induced matrices on both sides of a transport square, per degree."""

    sigma1: List[int]
    sigma2: List[int]
    left: Dict[int, List[List[int]]]
    right: Dict[int, List[List[int]]]
    mismatched: List[int] = field(default_factory=list)

    @property
    def commutes(self) -> bool:
        return not self.mismatched

    def to_dict(self) -> Dict[str, Any]:
        data = _plain(asdict(self))
        data["left"] = {str(k): v for k, v in self.left.items()}
        data["right"] = {str(k): v for k, v in self.right.items()}
        data["commutes"] = self.commutes
        return data


@dataclass
class TwoIotaVerdict:
    """Homology-level check of the flip/inclusion identities for Hom(C_{2r+1}, K_n)."""

    r: int
    n: int
    hom_cells: int
    parity_applies: bool
    commutes: Optional[bool] = None
    iota_zero: Optional[bool] = None
    beta_degree: Optional[int] = None
    torsion: Dict[int, List[int]] = field(default_factory=dict)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.commutes is not False and self.iota_zero is not False

    def to_dict(self) -> Dict[str, Any]:
        data = _plain(asdict(self))
        data["torsion"] = {str(k): v for k, v in self.torsion.items()}
        data["passed"] = self.passed
        return data
