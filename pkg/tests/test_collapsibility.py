"""Tests for shellings, tree-like peels, folds and collapse checks."""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.catalog import TREE_LIKE, tree_like
from homcx.collapsibility import (
    CollapseSequence,
    CollapseStep,
    ShellingOrder,
    deleted_product_comparison,
    elementary_collapse,
    find_shelling,
    fold_map,
    is_tree_like,
    omega_map,
    peel_step,
    replay_collapse,
    replay_shelling,
    verify_collapse_equivalence,
)
from homcx.errors import FoldError, HypothesisFailure, InvariantViolation, NotPureError
from homcx.hom_complex import build_hom
from homcx.models import SearchStatus
from homcx.simplicial import boundary_simplex, from_facets, simplex

# Two triangles sharing only a vertex.
BOWTIE = from_facets(5, [[0, 1, 2], [2, 3, 4]])


class TestShelling(unittest.TestCase):
    """Test the shelling search."""

    def test_sphere_is_shellable(self):
        """The boundary of a tetrahedron shells with types -1, 0, 1, 2."""
        result = find_shelling(boundary_simplex(4))
        self.assertTrue(result.found)
        shelling = result.value
        self.assertEqual(shelling.order, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
        self.assertEqual(shelling.types, [-1, 0, 1, 2])
        self.assertEqual(shelling.restrictions[2], (2, 3))
        replay_shelling(boundary_simplex(4), shelling)

    def test_bowtie_is_not_shellable(self):
        """Facets meeting in a vertex cannot be shelled."""
        result = find_shelling(BOWTIE)
        self.assertEqual(result.status, SearchStatus.EXHAUSTED)
        self.assertIsNone(result.value)

    def test_budget(self):
        """A tiny budget gives up without a verdict."""
        with self.assertLogs("homcx.collapsibility", level="WARNING"):
            result = find_shelling(boundary_simplex(5), budget=1)
        self.assertEqual(result.status, SearchStatus.BUDGET)
        self.assertEqual(result.to_dict()["status"], "budget")

    def test_not_pure(self):
        """Mixed facet sizes are refused."""
        K = from_facets(4, [[0, 1, 2], [2, 3]])
        with self.assertRaises(NotPureError) as ctx:
            find_shelling(K)
        self.assertEqual(ctx.exception.code, "not_pure")

    def test_replay_rejects_bad_order(self):
        """A shelling that skips a facet or lies about types is rejected."""
        K = boundary_simplex(4)
        with self.assertRaises(InvariantViolation):
            replay_shelling(K, ShellingOrder([(0, 1, 2)], [()], [-1]))
        bad = ShellingOrder([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
                            [(), (3,), (2, 3), (1, 2, 3)], [-1, 0, 0, 2])
        with self.assertRaises(InvariantViolation):
            replay_shelling(K, bad)


class TestTreeLike(unittest.TestCase):
    """Test peeling down to a single facet."""

    def test_catalog_samples(self):
        """Every catalog sample peels, and the peel replays."""
        for name in TREE_LIKE:
            K = tree_like(name)
            result = is_tree_like(K)
            self.assertTrue(result.found, name)
            self.assertEqual(len(result.value.steps), len(K.maximal_simplices) - 1)
            replay_collapse(K, result.value)
            replay_shelling(K, result.value.as_shelling())

    def test_peel_order(self):
        """Facets are tried in lexicographic order."""
        result = is_tree_like(tree_like("sigma"))
        (step,) = result.value.steps
        self.assertEqual(step, CollapseStep((0, 1, 2), (0, 1), (0, 1, 3), 3, 2))
        self.assertEqual(result.value.final, (0, 1, 3))
        self.assertEqual(result.value.as_shelling().types, [-1, 0])

    def test_single_facet(self):
        """A simplex is tree-like with no steps."""
        result = is_tree_like(simplex(3))
        self.assertTrue(result.found)
        self.assertEqual(result.value.steps, [])
        self.assertEqual(result.value.final, (0, 1, 2))

    def test_sphere_and_bowtie_are_not(self):
        """No facet of a sphere is free; a bowtie has no ridge to peel along."""
        self.assertEqual(is_tree_like(boundary_simplex(4)).status, SearchStatus.EXHAUSTED)
        self.assertEqual(is_tree_like(BOWTIE).status, SearchStatus.EXHAUSTED)

    def test_peel_step(self):
        """A single step names the free vertex and its partner."""
        step = peel_step(tree_like("sigma"), [0, 3, 1])
        self.assertEqual((step.sigma_prime, step.v, step.u), ((0, 1), 3, 2))
        self.assertEqual(step.witness, (0, 1, 2))
        self.assertEqual(step.to_dict()["sigma"], [0, 1, 3])

    def test_peel_step_errors(self):
        """Non-facets and glued facets are refused with distinct codes."""
        with self.assertRaises(HypothesisFailure) as ctx:
            peel_step(tree_like("sigma"), [0, 1])
        self.assertEqual(ctx.exception.code, "sigma_not_facet")
        with self.assertRaises(HypothesisFailure) as ctx:
            peel_step(boundary_simplex(4), [0, 1, 2])
        self.assertEqual(ctx.exception.code, "not_collapsible")

    def test_replay_rejects_forged_step(self):
        """A step claiming the wrong free vertex is caught."""
        K = tree_like("sigma")
        forged = CollapseSequence([CollapseStep((0, 1, 2), (1, 2), (1, 2, 3), 3, 0)], (0, 1, 3))
        with self.assertRaises(InvariantViolation):
            replay_collapse(K, forged)


class TestFolds(unittest.TestCase):
    """Test elementary collapses as vertex maps."""

    def test_elementary_collapse(self):
        """Folding 3 onto 2 leaves a triangle."""
        ec = elementary_collapse(tree_like("sigma"), 3, 2)
        self.assertEqual(ec.result.n_vertices, 3)
        self.assertEqual(ec.result.maximal_simplices, ((0, 1, 2),))
        self.assertEqual(ec.gamma.image, (0, 1, 2))
        self.assertEqual(ec.rho.image, (0, 1, 2, 2))
        self.assertEqual(fold_map(tree_like("sigma"), 3, 2).image, (0, 1, 2, 2))

    def test_fold_condition(self):
        """Degenerate and non-simplicial folds are refused."""
        K = tree_like("sigma")
        for v, u in [(3, 3), (3, 7), (0, 3), (3, 0)]:
            with self.assertRaises(FoldError):
                elementary_collapse(K, v, u)

    def test_collapse_equivalence(self):
        """The fold and the inclusion are inverse on Hom complexes."""
        K = tree_like("sigma")
        L = boundary_simplex(4)
        report = verify_collapse_equivalence(K, (3, 2), L)
        self.assertTrue(report.passed)
        self.assertEqual(report.removed_vertex, 3)
        step = is_tree_like(K).value.steps[0]
        self.assertTrue(verify_collapse_equivalence(K, step, L).passed)
        self.assertTrue(verify_collapse_equivalence(K, None, L).to_dict()["passed"])

    def test_omega_map(self):
        """The closure map enlarges the folded vertex and fixes the rest."""
        K = tree_like("sigma")
        h = build_hom(K, boundary_simplex(4))
        omega = omega_map(h, 3, 2)
        self.assertEqual(len(omega), len(h))
        for eta, image in omega.items():
            self.assertTrue(set(eta[3]) <= set(image[3]))
            # and dominates the cell after folding 3 onto 2
            self.assertTrue(set(eta[2]) <= set(image[3]))
            self.assertEqual(image[:3], eta[:3])
            self.assertEqual(omega[image], image)

    def test_deleted_product(self):
        """A tree-like complex has the homology of the deleted product."""
        _, _, equal = deleted_product_comparison(tree_like("fan"), boundary_simplex(4))
        self.assertTrue(equal)
        with self.assertRaises(NotPureError):
            deleted_product_comparison(from_facets(4, [[0, 1, 2], [2, 3]]), boundary_simplex(4))


if __name__ == "__main__":
    unittest.main()
