"""Tests for chain complexes, homology and induced maps."""

import os
import random
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.chains import (
    ChainComplex,
    ChainMap,
    Reduction,
    betti_mod_p,
    chain_map_of,
    chains_of,
    connectivity_estimate,
    dense_homology,
    homology,
    homology_of,
    identity_chain_map,
    induced_maps,
    induced_on_homology,
    same_on_homology,
    simplicial_chains,
)
from homcx.errors import HypothesisFailure, InvariantViolation
from homcx.hom_complex import build_hom, identity_cellular, induced_precompose
from homcx.simplicial import VertexMap, boundary_simplex, complete, from_facets, simplex

# Six-vertex projective plane.
RP2 = from_facets(6, [
    [0, 1, 3], [0, 1, 5], [0, 2, 4], [0, 2, 5], [0, 3, 4],
    [1, 2, 3], [1, 2, 4], [1, 4, 5], [2, 3, 5], [3, 4, 5],
])


def _flip_map(n):
    """Chain map of the swap of the two ends of K2 on Hom(K2, K_n)."""
    K2 = complete(2)
    h = build_hom(K2, complete(n))
    flip = VertexMap(K2, K2, (1, 0))
    return chain_map_of(induced_precompose(h, flip, codomain=h))


class TestChainComplex(unittest.TestCase):
    """Test chain complex construction."""

    def test_simplicial_chains_ranks(self):
        """Test ranks and boundary orientation of a simplicial complex."""
        cc = simplicial_chains(simplex(3))
        self.assertEqual(cc.ranks, [3, 3, 1])
        # edge [0, 1] has boundary 1 - 0
        self.assertEqual(cc.boundaries[1][0], {1: 1, 0: -1})

    def test_hom_chains_cached(self):
        """Test the chain complex of a Hom complex is built once."""
        h = build_hom(complete(2), complete(3))
        self.assertIs(chains_of(h), chains_of(h))
        self.assertEqual(chains_of(h).ranks, [6, 6])

    def test_check_dd_detects_errors(self):
        """Test a broken boundary is reported."""
        bad = ChainComplex([1, 2, 1], [[{}], [{0: 1}, {0: 1}], [{0: 1, 1: 1}]])
        with self.assertRaises(InvariantViolation):
            bad.check_dd()

    def test_boundary_matrix(self):
        """Test the dense boundary matrix."""
        cc = simplicial_chains(simplex(2))
        self.assertTrue(np.array_equal(cc.boundary_matrix(1), np.array([[-1], [1]])))


class TestHomology(unittest.TestCase):
    """Test integral homology."""

    def test_sphere(self):
        """Test the boundary of a tetrahedron."""
        hg = homology(simplicial_chains(boundary_simplex(4)))
        self.assertEqual(hg.betti, [1, 0, 1])
        self.assertEqual(hg.summary(), "dim0: Z; dim1: 0; dim2: Z")

    def test_hexagon(self):
        """Test Hom(K2, K3) is a circle."""
        cc = chains_of(build_hom(complete(2), complete(3)))
        self.assertEqual(homology(cc).summary(), "dim0: Z; dim1: Z")
        reduced = homology(cc, reduced=True)
        self.assertEqual(reduced.betti, [0, 1])
        self.assertEqual(reduced.group_string(0), "0")

    def test_projective_plane_torsion(self):
        """Test Z/2 in degree one."""
        hg = homology(simplicial_chains(RP2))
        self.assertEqual(hg.betti, [1, 0, 0])
        self.assertEqual(hg.torsion, [[], [2], []])
        self.assertEqual(hg.group_string(1), "Z/2")
        self.assertEqual(hg.to_dict()["dimensions"][1], {"dim": 1, "betti": 0, "torsion": [2]})

    def test_disjoint_union(self):
        """Test H0 of two points."""
        hg = homology(simplicial_chains(from_facets(2, [[0], [1]])))
        self.assertEqual(hg.group_string(0), "Z^2")
        self.assertEqual(homology(simplicial_chains(from_facets(2, [[0], [1]])), reduced=True).betti, [1])

    def test_empty_complex(self):
        """Test the empty chain complex."""
        hg = homology(chains_of(build_hom(simplex(3), complete(2))))
        self.assertTrue(hg.empty)
        self.assertEqual(hg.summary(), "empty")
        reduced = homology(chains_of(build_hom(simplex(3), complete(2))), reduced=True)
        self.assertFalse(reduced.is_zero(-1))
        self.assertEqual(reduced.group_string(-1), "Z")

    def test_workers_agree(self):
        """Test threaded Smith forms give the same answer."""
        cc = simplicial_chains(RP2)
        self.assertEqual(homology(cc, workers=2).torsion, homology(cc).torsion)

    def test_exact_arithmetic_agrees(self):
        """Test the arbitrary-precision path."""
        cc = simplicial_chains(RP2)
        hg = homology(cc, guard=None)
        self.assertEqual(hg.torsion, [[], [2], []])

    def test_dense_cross_check(self):
        """Test the dense shuffled computation agrees."""
        cc = simplicial_chains(RP2)
        betti, torsion = dense_homology(cc, rng=random.Random(7))
        self.assertEqual(betti, [1, 0, 0])
        self.assertEqual(torsion, [[], [2], []])
        cc = chains_of(build_hom(complete(2), complete(4)))
        self.assertEqual(dense_homology(cc, reduced=True, rng=random.Random(1))[0], [0, 0, 1])

    def test_betti_mod_p(self):
        """Test universal coefficients against Z/2 and Z/3."""
        cc = simplicial_chains(RP2)
        self.assertEqual(betti_mod_p(cc, 2), [1, 1, 1])
        self.assertEqual(betti_mod_p(cc, 3), [1, 0, 0])

    def test_homology_of_cached(self):
        """Test cached homology keeps a basis."""
        cc = simplicial_chains(boundary_simplex(4))
        hg = homology_of(cc)
        self.assertIs(homology_of(cc), hg)
        self.assertIsNotNone(hg.basis)
        self.assertTrue(hg.reduced)


class TestReductionAndBasis(unittest.TestCase):
    """Test reduction maps and generator coordinates."""

    def test_contractible_reduces_to_a_point(self):
        """Test a triangle reduces to one vertex."""
        red = Reduction(simplicial_chains(simplex(3)))
        self.assertEqual([len(o) for o in red.order], [1, 0, 0])

    def test_generator_coordinates(self):
        """Test a generator has coordinate one and boundaries vanish."""
        cc = simplicial_chains(boundary_simplex(4))
        hg = homology(cc)
        gen = hg.basis.free_generators[2][0]
        self.assertEqual(hg.basis.coordinates(2, gen), ([1], []))
        doubled = {k: 2 * v for k, v in gen.items()}
        self.assertEqual(hg.basis.coordinates(2, doubled), ([2], []))
        # the boundary of a triangle is zero in H1
        self.assertEqual(hg.basis.coordinates(1, cc.boundaries[2][0]), ([], []))


class TestChainMaps(unittest.TestCase):
    """Test chain maps and induced maps on homology."""

    def test_identity(self):
        """Test the identity cellular map gives the identity chain map."""
        h = build_hom(complete(2), complete(3))
        f = chain_map_of(identity_cellular(h))
        self.assertTrue(f.is_identity())
        self.assertTrue(identity_chain_map(chains_of(h)).is_identity())

    def test_composition_matches_middle_complex(self):
        """Test then() accepts equal complexes built separately and refuses others."""
        a = identity_chain_map(simplicial_chains(simplex(2)))
        b = identity_chain_map(simplicial_chains(simplex(2)))
        self.assertEqual(a.then(b).matrix(0).tolist(), [[1, 0], [0, 1]])
        c = identity_chain_map(simplicial_chains(simplex(3)))
        with self.assertRaises(HypothesisFailure):
            a.then(c)

    def test_induced_rejects_missing_dimension(self):
        """Test induced_on_homology refuses dimensions above both complexes."""
        f = _flip_map(3)
        self.assertEqual(induced_on_homology(f, 1).dimension, 1)
        for d in (-1, 2, 5):
            with self.assertRaises(HypothesisFailure) as ctx:
                induced_on_homology(f, d)
            self.assertEqual(ctx.exception.code, "dimension")

    def test_check_detects_non_chain_map(self):
        """Test a map that ignores the boundary is rejected."""
        cc = simplicial_chains(simplex(2))
        broken = ChainMap(cc, cc, [[{0: 1}, {0: 1}], [{0: 1}]])
        with self.assertRaises(InvariantViolation):
            broken.check()

    def test_flip_degree_on_circle(self):
        """Test the swap on Hom(K2, K3) preserves orientation."""
        f = _flip_map(3)
        self.assertEqual(induced_on_homology(f, 1).free.tolist(), [[1]])
        self.assertTrue(same_on_homology(f, identity_chain_map(f.source)))

    def test_flip_degree_on_sphere(self):
        """Test the swap on Hom(K2, K4) reverses orientation."""
        f = _flip_map(4)
        self.assertEqual(induced_on_homology(f, 2).free.tolist(), [[-1]])
        self.assertFalse(same_on_homology(f, identity_chain_map(f.source)))
        self.assertTrue(f.then(f).is_identity())

    def test_induced_maps_every_dimension(self):
        """Test induced_maps covers each dimension and serializes."""
        maps = induced_maps(_flip_map(3))
        self.assertEqual([m.dimension for m in maps], [0, 1])
        self.assertTrue(maps[0].is_zero())
        self.assertEqual(maps[1].to_dict()["free"], [[1]])


class TestConnectivity(unittest.TestCase):
    """Test connectivity estimates."""

    def test_circle(self):
        """Test a circle is 0-connected."""
        hg = homology(chains_of(build_hom(complete(2), complete(3))), reduced=True)
        est = connectivity_estimate(hg)
        self.assertEqual(est.k, 0)
        self.assertEqual(est.certificate_level, "homology")

    def test_sphere_with_pi1(self):
        """Test the 2-sphere is 1-connected with a trivial edge-path group."""
        hg = homology(simplicial_chains(boundary_simplex(4)), reduced=True)
        self.assertEqual(connectivity_estimate(hg).certificate_level, "homology")
        est = connectivity_estimate(hg, attempt_pi1=True)
        self.assertEqual(est.k, 1)
        self.assertEqual(est.certificate_level, "homology+pi1")

    def test_empty_and_acyclic(self):
        """Test the empty complex and a contractible one."""
        empty = homology(chains_of(build_hom(simplex(3), complete(2))), reduced=True)
        self.assertEqual(connectivity_estimate(empty).k, -2)
        point = homology(simplicial_chains(simplex(3)), reduced=True)
        est = connectivity_estimate(point)
        self.assertEqual(est.k, 2)
        self.assertIn("every degree", est.note)

    def test_needs_reduced_homology(self):
        """Test unreduced input is refused."""
        with self.assertRaises(HypothesisFailure):
            connectivity_estimate(homology(simplicial_chains(simplex(2))))


if __name__ == "__main__":
    unittest.main()
