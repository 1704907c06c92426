"""Command line interface for homcx.

Exit codes: 0 success, 1 parse error, 2 hypothesis failure, 3 resource cap,
4 internal invariant violation.
"""

import argparse
import json
import logging
import random
import sys
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .catalog import named
from .chains import (betti_mod_p, chain_map_of, chains_of, connectivity_estimate, dense_homology,
                     homology, induced_maps, simplicial_chains)
from .chromatic import (chromatic_number, induced_involution, lovasz_bound_report, phi_d_certify,
                        two_iota_star_check)
from .collapsibility import (elementary_collapse, find_shelling, is_tree_like,
                             verify_collapse_equivalence)
from .config import get_limit, load_config
from .errors import HomcxError, HypothesisFailure, InvariantViolation, ParseError
from .hom_complex import HomComplex, JoinRule, build_hom
from .interchange import (complex_from_dict, complex_to_dict, hom_from_dict, hom_to_dict, is_pair,
                          load_document, parse_permutation, parse_simplex, save_document)
from .models import CertificateLevel, DimensionHomology, HomologyReport
from .paths import resolve_document
from .projectivity import along, holonomy_group, loop_projectivities, transport_map
from .simplicial import SimplicialComplex

logger = logging.getLogger(__name__)


class _Loaded:
    """A parsed input document with its optional extras."""

    def __init__(self, doc: Dict[str, Any], complex_: Optional[SimplicialComplex] = None,
                 pair: Optional[Tuple[SimplicialComplex, SimplicialComplex]] = None,
                 hom: Optional[HomComplex] = None):
        self.doc = doc
        self.complex = complex_
        self.pair = pair
        self.hom = hom


def _load(spec: str) -> _Loaded:
    """Load a document by path or shipped name, falling back to the catalog."""
    try:
        resolve_document(spec)
    except FileNotFoundError:
        entry = named(spec)
        doc = complex_to_dict(entry.complex)
        if entry.involution is not None:
            doc["involution"] = list(entry.involution)
            doc["sigma"] = list(entry.sigma)
        return _Loaded(doc, complex_=entry.complex)
    doc = load_document(spec)
    if "cells" in doc:
        return _Loaded(doc, hom=hom_from_dict(doc))
    if is_pair(doc):
        return _Loaded(doc, pair=(complex_from_dict(doc["source"]), complex_from_dict(doc["target"])))
    return _Loaded(doc, complex_=complex_from_dict(doc))


def _require_complex(loaded: _Loaded, what: str) -> SimplicialComplex:
    if loaded.complex is None:
        raise ParseError(f"{what} must be a simplicial complex document")
    return loaded.complex


def _hom_from_args(args, cfg) -> HomComplex:
    first = _load(args.document)
    if args.target:
        K = _require_complex(first, "source")
        L = _require_complex(_load(args.target), "target")
    elif first.hom is not None:
        return first.hom
    elif first.pair is not None:
        K, L = first.pair
    else:
        raise ParseError("need a pair document or SOURCE and TARGET")
    return build_hom(K, L, cap=args.cap or get_limit("cell_cap", cfg), rule=JoinRule(args.join))


def _emit(args, data: Dict[str, Any], text: str, cfg) -> None:
    if args.json:
        print(json.dumps(data, indent=cfg["output"]["json_indent"], sort_keys=True))
    else:
        print(text)


# -- verbs ---------------------------------------------------------------------

def cmd_build_hom(args, cfg) -> int:
    h = _hom_from_args(args, cfg)
    if args.out:
        save_document(args.out, hom_to_dict(h), indent=cfg["output"]["json_indent"])
    data = {"counts": h.counts(), "cells": len(h), "euler_characteristic": h.euler_characteristic(),
            "rule": h.rule.value}
    text = (f"{len(h)} cells; counts per dimension {h.counts()}; "
            f"Euler characteristic {h.euler_characteristic()}")
    _emit(args, data, text, cfg)
    return 0


def _cross_check(cc, hg, seed: int) -> None:
    rng = random.Random(seed)
    betti, torsion = dense_homology(cc, reduced=hg.reduced, rng=rng)
    if betti != hg.betti or torsion != hg.torsion:
        raise InvariantViolation(f"dense homology {betti} {torsion} disagrees with {hg.betti} {hg.torsion}")
    if hg.reduced:
        return
    for p in (2, 3):
        expected = [hg.betti[d] + sum(1 for t in hg.torsion[d] if t % p == 0)
                    + (sum(1 for t in hg.torsion[d - 1] if t % p == 0) if d else 0)
                    for d in range(hg.top + 1)]
        if betti_mod_p(cc, p) != expected:
            raise InvariantViolation(f"Betti numbers mod {p} disagree with integral homology")
    logger.info("Cross-check passed (seed %d)", seed)


def cmd_homology(args, cfg) -> int:
    first = _load(args.document)
    if first.complex is not None and not args.target:
        cc = simplicial_chains(first.complex)
        counts = list(cc.ranks)
    else:
        h = _hom_from_args(args, cfg)
        cc = chains_of(h)
        counts = h.counts()
    workers = cfg["homology"]["workers"]
    guard = cfg["homology"]["int64_guard"]
    hg = homology(cc, reduced=args.reduced, workers=workers, guard=guard)
    red = hg if args.reduced else homology(cc, reduced=True, with_basis=False, workers=workers, guard=guard)
    est = connectivity_estimate(red, attempt_pi1=args.pi1, passes=get_limit("pi1_passes", cfg),
                                max_word=get_limit("pi1_max_word", cfg))
    if args.cross_check:
        _cross_check(cc, hg, args.seed)
    report = HomologyReport(
        counts=counts,
        euler_characteristic=sum((-1) ** d * c for d, c in enumerate(counts)),
        reduced=args.reduced,
        dimensions=[DimensionHomology(d, hg.betti[d], list(hg.torsion[d])) for d in range(hg.top + 1)],
        connectivity=est.k,
        certificate_level=CertificateLevel(est.certificate_level),
        note=est.note,
    )
    _emit(args, report.to_dict(), report.summary, cfg)
    return 0


def cmd_holonomy(args, cfg) -> int:
    K = _require_complex(_load(args.document), "holonomy input")
    sigma = parse_simplex(args.sigma)
    group = holonomy_group(K, sigma)
    data = group.to_dict()
    if args.oracle:
        loops = loop_projectivities(K, sigma, max_len=args.oracle)
        data["oracle_elements"] = len(loops)
        if not loops <= set(group.elements):
            raise InvariantViolation("a closed walk produced a permutation outside the group")
    text = f"order {group.order}, label {group.label}"
    for g in group.generators:
        text += f"\n  {dict(g.bijection)} via {[list(s) for s in g.path]}"
    _emit(args, data, text, cfg)
    return 0


def _parse_path(text: str) -> List[Tuple[int, ...]]:
    return [parse_simplex(part) for part in text.split(";") if part.strip()]


def cmd_transport(args, cfg) -> int:
    K = _require_complex(_load(args.document), "complex")
    L = _require_complex(_load(args.target), "target")
    path = _parse_path(args.path)
    for s in path:
        if not K.contains(s):
            raise HypothesisFailure(f"{list(s)} is not a simplex of K", code="not_simplex")
    p = along(path)
    m = transport_map(L, p)
    table = m.table
    bijective = len(set(table.values())) == len(table)
    preserved = all(m.dimension_preserved(eta) for eta in table)
    maps = induced_maps(chain_map_of(m))
    data = {
        "projectivity": p.to_dict(),
        "cells": len(table),
        "bijective": bijective,
        "dimension_preserving": preserved,
        "homology": [im.to_dict() for im in maps],
    }
    lines = [f"projectivity {dict(p.bijection)}; {len(table)} cells; "
             f"bijective={bijective}; dimension preserving={preserved}"]
    for im in maps:
        if im.free.size:
            lines.append(f"  H{im.dimension}: {im.free.tolist()}")
    _emit(args, data, "\n".join(lines), cfg)
    return 0


def cmd_collapse(args, cfg) -> int:
    K = _require_complex(_load(args.document), "complex")
    budget = args.budget or get_limit("search_budget", cfg)
    if args.shelling:
        result = find_shelling(K, budget=budget)
        _emit(args, result.to_dict(), f"shelling: {result.status.value}" + (
            f" {[list(f) for f in result.value.order]}" if result.found else ""), cfg)
        return 0
    result = is_tree_like(K, budget=budget)
    data = result.to_dict()
    lines = [f"tree-like: {result.status.value}"]
    if result.found:
        for step in result.value.steps:
            lines.append(f"  remove {list(step.sigma)} along {list(step.sigma_prime)} "
                         f"(fold {step.v} -> {step.u})")
        lines.append(f"  final {list(result.value.final)}")
    if args.check and result.found:
        L = _require_complex(_load(args.check), "check target")
        reports = []
        for step, report in zip(result.value.steps, _check_steps(K, result.value.steps, L, args, cfg)):
            reports.append(report.to_dict())
            lines.append(f"  {list(step.sigma)}: " + "; ".join(
                f"dim{a.dim} {a.group} | {b.group}"
                for a, b in zip(report.source_homology, report.target_homology)) + " OK")
        data["checks"] = reports
    _emit(args, data, "\n".join(lines), cfg)
    return 0


def _check_steps(K: SimplicialComplex, steps, L: SimplicialComplex, args, cfg):
    """Verify each collapse on Hom(-, L), following the shrinking complex."""
    current = K
    ids = list(K.vertices)   # original id -> id in ``current``
    for step in steps:
        v, u = ids[step.v], ids[step.u]
        report = verify_collapse_equivalence(current, (v, u), L,
                                             cap=args.cap or get_limit("cell_cap", cfg),
                                             rule=JoinRule(args.join))
        yield report
        ec = elementary_collapse(current, v, u)
        old_to_new = {old: new for new, old in enumerate(ec.gamma.image)}
        ids = [old_to_new.get(c, -1) for c in ids]
        current = ec.result


def cmd_chromatic(args, cfg) -> int:
    K = _require_complex(_load(args.document), "complex")
    chi, coloring = chromatic_number(K, budget=args.budget or get_limit("coloring_budget", cfg))
    data = {"chromatic_number": chi, "coloring": list(coloring.colors)}
    _emit(args, data, f"chi = {chi}; coloring {list(coloring.colors)}", cfg)
    return 0


def _certificate(args, loaded: _Loaded):
    gamma = _require_complex(loaded, "Gamma")
    involution = args.involution if args.involution is not None else loaded.doc.get("involution")
    sigma = args.sigma if args.sigma is not None else loaded.doc.get("sigma")
    if involution is None or sigma is None:
        raise ParseError("need --involution and --sigma (or document keys)")
    omega = parse_permutation(involution, gamma.n_vertices)
    return phi_d_certify(gamma, omega, parse_simplex(sigma))


def cmd_phi_check(args, cfg) -> int:
    cert = _certificate(args, _load(args.document))
    data = cert.to_dict()
    text = (f"Phi_{cert.d} certificate: tau = {dict(cert.restriction.bijection)} in "
            f"{cert.holonomy.label}; path {[list(s) for s in cert.membership_path]}")
    if args.target:
        L = _require_complex(_load(args.target), "target")
        check = induced_involution(cert, L, cap=args.cap or get_limit("cell_cap", cfg))
        data["induced"] = {"involution": check.is_involution, "free": check.free,
                           "fixed_cells": len(check.fixed_cells)}
        text += f"\ninduced involution on Hom: involution={check.is_involution}, free={check.free}"
    _emit(args, data, text, cfg)
    return 0


def cmd_lovasz_bound(args, cfg) -> int:
    cert = _certificate(args, _load(args.document))
    K = _require_complex(_load(args.target), "K")
    report = lovasz_bound_report(
        cert, K,
        cap=args.cap or get_limit("cell_cap", cfg),
        attempt_pi1=args.pi1,
        odd_floor=args.odd_floor,
        assumed_coindex=args.assumed_coindex,
        passes=get_limit("pi1_passes", cfg),
        max_word=get_limit("pi1_max_word", cfg),
        coloring_budget=get_limit("coloring_budget", cfg),
    )
    if report.has_bound:
        text = (f"chi(K) >= {report.claimed_bound} ({report.theorem_applied.value}; "
                f"{report.parity_note}; certificate {report.certificate_level.value}); "
                f"computed chi(K) = {report.chromatic_number}")
    else:
        text = f"no bound: {report.parity_note}; computed chi(K) = {report.chromatic_number}"
    _emit(args, report.to_dict(), text, cfg)
    return 0


def cmd_two_iota(args, cfg) -> int:
    verdict = two_iota_star_check(args.r, args.n, cap=args.cap or get_limit("cell_cap", cfg))
    text = verdict.message
    if verdict.beta_degree is not None:
        text += f"; flip degree on H{args.n - 2}: {verdict.beta_degree}"
    _emit(args, verdict.to_dict(), text, cfg)
    return 0 if verdict.passed else 4


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="maximum number of Hom cells")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--pi1", action="store_true", help="attempt fundamental group simplification")
    common.add_argument("--budget", type=int, default=None, help="search node budget")
    common.add_argument("--join", choices=[r.value for r in JoinRule], default=JoinRule.TRANSVERSAL.value,
                        help="reading of the join condition")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="homcx", description="Hom complexes, holonomy and chromatic bounds")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build-hom", parents=[common], help="enumerate Hom(K, L)")
    p.add_argument("document")
    p.add_argument("target", nargs="?")
    p.add_argument("--out", help="write the Hom complex document here")
    p.set_defaults(func=cmd_build_hom)

    p = sub.add_parser("homology", parents=[common], help="integral homology")
    p.add_argument("document")
    p.add_argument("target", nargs="?")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--cross-check", action="store_true", help="recompute densely from shuffled matrices")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("holonomy", parents=[common], help="group of projectivities at a simplex")
    p.add_argument("document")
    p.add_argument("--sigma", required=True)
    p.add_argument("--oracle", type=int, default=0, help="also enumerate closed walks up to this length")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("transport", parents=[common], help="parallel transport along a path")
    p.add_argument("document")
    p.add_argument("target")
    p.add_argument("--path", required=True, help='simplices separated by ";", e.g. "0,1;1,2"')
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("collapse", parents=[common], help="tree-like / shelling search")
    p.add_argument("document")
    p.add_argument("--check", metavar="L", help="verify each collapse on Hom(-, L)")
    p.add_argument("--shelling", action="store_true", help="search for a shelling instead")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("chromatic", parents=[common], help="chromatic number")
    p.add_argument("document")
    p.set_defaults(func=cmd_chromatic)

    for verb, func, helptext in (("phi-check", cmd_phi_check, "certify a Phi_d complex"),
                                 ("lovasz-bound", cmd_lovasz_bound, "chromatic lower bound")):
        p = sub.add_parser(verb, parents=[common], help=helptext)
        p.add_argument("document")
        p.add_argument("target", nargs="?" if verb == "phi-check" else None)
        p.add_argument("--involution")
        p.add_argument("--sigma")
        if verb == "lovasz-bound":
            p.add_argument("--odd-floor", action="store_true")
            p.add_argument("--assumed-coindex", type=int, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("two-iota", parents=[common], help="flip/inclusion check on Hom(C_{2r+1}, K_n)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_two_iota)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for homcx."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    cfg = load_config()
    try:
        return args.func(args, cfg)
    except HomcxError as e:
        code = getattr(e, "code", None)
        tag = f" [{code}]" if code else ""
        print(f"error{tag}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
