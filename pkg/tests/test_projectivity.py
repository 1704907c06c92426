"""Tests for projectivities, holonomy groups and parallel transport."""

import os
import sys
import unittest

from sympy.combinatorics import Permutation, PermutationGroup

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.catalog import annulus_pair, moebius_pair
from homcx.chains import chain_map_of, induced_on_homology, same_on_homology
from homcx.errors import HypothesisFailure, NotAdjacentError
from homcx.projectivity import (
    FibreCache,
    along,
    compose,
    dual_graph,
    group_label,
    holonomy_group,
    identity,
    loop_projectivities,
    perspectivity,
    transport_map,
)
from homcx.simplicial import boundary_simplex, complete, cycle, from_facets


class TestProjectivity(unittest.TestCase):
    """Test perspectivities and their composites."""

    def test_perspectivity(self):
        """The common face is fixed and the free vertices swap."""
        p = perspectivity((0, 1, 2), (1, 2, 3))
        self.assertEqual(p.mapping, {0: 3, 1: 1, 2: 2})
        self.assertEqual(p.path, ((0, 1, 2), (1, 2, 3)))
        self.assertEqual(perspectivity((0, 1), (0, 1)), identity((0, 1)))

    def test_not_adjacent(self):
        """Simplices sharing less than a ridge are refused."""
        with self.assertRaises(NotAdjacentError) as ctx:
            perspectivity((0, 1, 2), (0, 3, 4))
        self.assertEqual(ctx.exception.code, "not_adjacent")

    def test_composition_order(self):
        """p.then(q) applies p first."""
        p = perspectivity((0, 1, 2), (0, 1, 3))
        q = perspectivity((0, 1, 3), (0, 2, 3))
        r = p.then(q)
        self.assertEqual(r.mapping, {0: 0, 1: 2, 2: 3})
        self.assertEqual(r.path, ((0, 1, 2), (0, 1, 3), (0, 2, 3)))
        with self.assertRaises(HypothesisFailure):
            compose(q, p.inverse().inverse())

    def test_inverse_and_positions(self):
        """Inverse undoes; positions index into the target."""
        p = along([(0, 1), (1, 2)])
        self.assertEqual(p.positions(), [1, 0])
        self.assertTrue(p.then(p.inverse()).is_identity)
        self.assertFalse(p.is_loop)
        with self.assertRaises(HypothesisFailure):
            p.to_permutation()

    def test_along_loop(self):
        """Going once around an odd cycle swaps the ends of an edge."""
        loop = along([(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 1)])
        self.assertTrue(loop.is_loop)
        self.assertEqual(loop.mapping, {0: 1, 1: 0})
        self.assertEqual(loop.to_permutation(), Permutation([1, 0]))
        with self.assertRaises(HypothesisFailure):
            along([])

    def test_to_dict(self):
        """Serialized projectivities keep their path."""
        data = perspectivity((0, 1), (1, 2)).to_dict()
        self.assertEqual(data["perm"], {"0": 2, "1": 1})
        self.assertEqual(data["path"], [[0, 1], [1, 2]])


class TestDualGraph(unittest.TestCase):
    """Test adjacency of simplices."""

    def test_tetrahedron_boundary(self):
        """Four triangles, pairwise adjacent."""
        dual = dual_graph(boundary_simplex(4), 2)
        self.assertEqual(len(dual.nodes), 4)
        self.assertEqual(dual.graph.number_of_edges(), 6)
        self.assertEqual(dual.graph.edges[(0, 1, 2), (0, 1, 3)]["face"], (0, 1))


class TestHolonomy(unittest.TestCase):
    """Test holonomy groups."""

    def test_odd_cycle(self):
        """An odd cycle has Z2 holonomy at an edge."""
        hg = holonomy_group(cycle(5), (0, 1))
        self.assertEqual(hg.order, 2)
        self.assertEqual(hg.label, "Z2")
        self.assertIn((1, 0), hg)

    def test_even_cycle(self):
        """An even cycle is balanced; holonomy is trivial."""
        hg = holonomy_group(cycle(6), (0, 1))
        self.assertEqual(hg.order, 1)
        self.assertEqual(hg.label, "trivial")
        self.assertEqual(hg.generators, [])

    def test_tetrahedron_boundary(self):
        """The boundary of a tetrahedron realizes every permutation of a triangle."""
        hg = holonomy_group(boundary_simplex(4), (0, 1, 2))
        self.assertEqual(hg.order, 6)
        self.assertEqual(hg.label, "S3")
        self.assertEqual(hg.permutation_group.order(), 6)

    def test_annulus_pair(self):
        """Two annuli glued along a triangle give S3."""
        entry = annulus_pair()
        hg = holonomy_group(entry.complex, entry.sigma)
        self.assertEqual(hg.label, "S3")

    def test_moebius_pair(self):
        """Two Moebius strips glued along a triangle give Z2."""
        entry = moebius_pair()
        hg = holonomy_group(entry.complex, entry.sigma)
        self.assertEqual(hg.label, "Z2")
        self.assertIn((1, 0, 2), hg)
        self.assertNotIn((0, 2, 1), hg)

    def test_realized_paths_are_closed(self):
        """Every element comes with a closed dual path that reproduces it."""
        hg = holonomy_group(boundary_simplex(4), (0, 1, 2))
        for key, p in hg.elements.items():
            self.assertEqual(p.path[0], (0, 1, 2))
            self.assertEqual(p.path[-1], (0, 1, 2))
            self.assertEqual(tuple(along(p.path).positions()), key)
        self.assertIsNotNone(hg.realize((0, 2, 1)))

    def test_oracle_agrees(self):
        """Closed walks never leave the group, and short ones reach all of it."""
        K = boundary_simplex(4)
        hg = holonomy_group(K, (0, 1, 2))
        loops = loop_projectivities(K, (0, 1, 2), max_len=4)
        self.assertTrue(loops <= set(hg.elements))
        self.assertEqual(len(loops), 6)

    def test_disconnected_dual_graph_warns(self):
        """Simplices out of reach are reported."""
        K = from_facets(4, [[0, 1], [2, 3]])
        with self.assertLogs("homcx.projectivity", level="WARNING"):
            hg = holonomy_group(K, (0, 1))
        self.assertEqual(hg.component_size, 1)
        self.assertEqual(hg.total_size, 2)

    def test_not_a_simplex(self):
        """The base must be a simplex of K."""
        with self.assertRaises(HypothesisFailure):
            holonomy_group(cycle(5), (0, 2))

    def test_to_dict(self):
        """Serialized groups list generators with their paths."""
        data = holonomy_group(cycle(5), (0, 1)).to_dict()
        self.assertEqual(data["order"], 2)
        self.assertEqual(data["generators"][0]["perm"], {"0": 1, "1": 0})


class TestGroupLabel(unittest.TestCase):
    """Test isomorphism-type labels."""

    def test_labels(self):
        """Small groups on four points."""
        cases = [
            ([[1, 2, 3, 0]], "Z4"),
            ([[1, 0, 3, 2], [2, 3, 0, 1]], "Z2xZ2"),
            ([[1, 2, 3, 0], [3, 2, 1, 0]], "D4"),
            ([[1, 2, 0, 3], [0, 2, 3, 1]], "A4"),
            ([[1, 0, 2, 3], [1, 2, 3, 0]], "S4"),
        ]
        for gens, label in cases:
            group = PermutationGroup([Permutation(g) for g in gens])
            self.assertEqual(group_label(group), label)


class TestTransport(unittest.TestCase):
    """Test parallel transport of fibres."""

    def test_loop_transport_on_hexagon(self):
        """Transport around C5 swaps the factors of Hom(K2, K3)."""
        loop = along([(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 1)])
        m = transport_map(complete(3), loop)
        self.assertEqual(m.species, "transport")
        table = m.table
        self.assertEqual(len(set(table.values())), len(table))
        self.assertEqual(table[((0,), (1,))], ((1,), (0,)))
        self.assertTrue(all(m.dimension_preserved(eta) for eta in table))
        self.assertEqual(induced_on_homology(chain_map_of(m), 1).free.tolist(), [[1]])

    def test_different_paths_same_bijection(self):
        """Two routes around C6 with equal bijections transport identically."""
        one_way = along([(0, 1), (1, 2), (2, 3), (3, 4)])
        other_way = along([(0, 1), (0, 5), (4, 5), (3, 4)])
        self.assertNotEqual(one_way.path, other_way.path)
        self.assertEqual(one_way.positions(), [1, 0])
        self.assertEqual(other_way.positions(), one_way.positions())
        fibres = FibreCache(complete(4))
        a = chain_map_of(transport_map(complete(4), one_way, fibres))
        b = chain_map_of(transport_map(complete(4), other_way, fibres))
        self.assertTrue(same_on_homology(a, b))
        self.assertEqual(induced_on_homology(a, 2).free.tolist(), [[-1]])
        self.assertEqual(induced_on_homology(b, 2).free.tolist(), [[-1]])

    def test_trivial_loop_does_not_change_transport(self):
        """Circling a vertex of the tetrahedron boundary twice before a step changes nothing."""
        around = [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
        direct = along([(0, 1, 2), (1, 2, 3)])
        detour = along(around + around + [(0, 1, 2), (1, 2, 3)])
        self.assertEqual(along(around + [(0, 1, 2)]).positions(), [0, 2, 1])
        self.assertEqual(detour.positions(), direct.positions())
        fibres = FibreCache(boundary_simplex(5))
        a = transport_map(boundary_simplex(5), direct, fibres)
        b = transport_map(boundary_simplex(5), detour, fibres)
        self.assertEqual(a.table, b.table)
        self.assertTrue(same_on_homology(chain_map_of(a), chain_map_of(b)))

    def test_fibre_cache(self):
        """Fibres are built once per size and belong to one target."""
        fibres = FibreCache(complete(3))
        self.assertIs(fibres(2), fibres(2))
        self.assertEqual(fibres(2).counts(), [6, 6])
        with self.assertRaises(HypothesisFailure):
            transport_map(complete(4), identity((0, 1)), fibres)


if __name__ == "__main__":
    unittest.main()
