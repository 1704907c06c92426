"""Tests for simplicial complexes and vertex maps."""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.errors import DegenerateMapError, HypothesisFailure, ParseError
from homcx.simplicial import (
    VertexMap,
    all_simplices,
    boundary_simplex,
    clique_complex,
    complete,
    cycle,
    deletion,
    from_facets,
    identity_map,
    is_nondegenerate,
    mask_vertices,
    path,
    simplex,
    simplex_inclusion,
    simplex_mask,
    simplices_of_dim,
    standard,
    vertex_edge_graph,
)


class TestFromFacets(unittest.TestCase):
    """Test facet normalization and validation."""

    def test_drops_non_maximal_entries(self):
        """Faces of other facets are not kept as facets."""
        K = from_facets(4, [[0, 1, 2], [1, 2], [2, 1, 0], [3]])
        self.assertEqual(K.facets, ((0, 1, 2), (3,)))

    def test_isolated_vertex_is_a_singleton_simplex(self):
        """A vertex in no facet shows up among the maximal simplices."""
        K = from_facets(3, [[0, 1]])
        self.assertEqual(K.maximal_simplices, ((0, 1), (2,)))
        self.assertTrue(K.contains([2]))
        self.assertFalse(K.contains([1, 2]))

    def test_rejects_bad_input(self):
        """Out-of-range ids, repeats and empty facets are parse errors."""
        with self.assertRaises(ParseError):
            from_facets(2, [[0, 2]])
        with self.assertRaises(ParseError):
            from_facets(3, [[1, 1]])
        with self.assertRaises(ParseError):
            from_facets(3, [[]])
        with self.assertRaises(ParseError):
            from_facets(2, [[0, 1]], labels=["a"])

    def test_equality_ignores_labels(self):
        """Two complexes with the same facets compare equal."""
        a = from_facets(2, [[0, 1]], labels=["x", "y"])
        b = from_facets(2, [[1, 0]])
        self.assertEqual(a, b)
        self.assertEqual(hash(a), hash(b))

    def test_masks(self):
        """Bitmasks round trip through vertex tuples."""
        self.assertEqual(simplex_mask((0, 2, 3)), 0b1101)
        self.assertEqual(mask_vertices(0b1101), (0, 2, 3))


class TestStandardComplexes(unittest.TestCase):
    """Test the standard families."""

    def test_dimensions(self):
        """Each family has the expected dimension."""
        self.assertEqual(simplex(4).dimension, 3)
        self.assertEqual(cycle(5).dimension, 1)
        self.assertEqual(complete(1).dimension, 0)
        self.assertEqual(path(3).dimension, 1)
        self.assertEqual(boundary_simplex(4).dimension, 2)

    def test_counts(self):
        """Simplex counts per dimension."""
        self.assertEqual(len(simplices_of_dim(complete(5), 1)), 10)
        self.assertEqual(len(simplices_of_dim(boundary_simplex(4), 2)), 4)
        self.assertEqual(len(all_simplices(simplex(3))), 7)

    def test_standard_lookup(self):
        """Family names accept hyphens."""
        self.assertEqual(standard("boundary-simplex", 3), cycle(3))
        with self.assertRaises(ParseError):
            standard("torus", 3)

    def test_parameter_checks(self):
        """Degenerate parameters raise."""
        with self.assertRaises(HypothesisFailure):
            cycle(2)
        with self.assertRaises(HypothesisFailure):
            simplex(0)

    def test_purity(self):
        """Mixed facet sizes are not pure."""
        self.assertTrue(boundary_simplex(4).is_pure())
        self.assertFalse(from_facets(4, [[0, 1, 2], [2, 3]]).is_pure())


class TestConstructions(unittest.TestCase):
    """Test derived complexes."""

    def test_clique_complex_of_k4(self):
        """The flag complex of K_4 is the full 3-simplex."""
        self.assertEqual(clique_complex(complete(4)), simplex(4))

    def test_clique_complex_needs_graph(self):
        """A 2-dimensional complex is rejected."""
        with self.assertRaises(HypothesisFailure):
            clique_complex(simplex(3))

    def test_vertex_edge_graph(self):
        """The 1-skeleton of the boundary of a tetrahedron is K_4."""
        self.assertEqual(vertex_edge_graph(boundary_simplex(4)), complete(4))

    def test_deletion_keeps_ids_dense(self):
        """Deleting a vertex relabels the survivors."""
        K = from_facets(4, [[0, 1, 2], [1, 2, 3]])
        K2, new_to_old = deletion(K, 0)
        self.assertEqual(new_to_old, [1, 2, 3])
        self.assertEqual(K2.facets, ((0, 1, 2),))

    def test_networkx_graph(self):
        """All vertices appear, including isolated ones."""
        g = from_facets(3, [[0, 1]]).to_networkx()
        self.assertEqual(sorted(g.nodes), [0, 1, 2])
        self.assertEqual(list(g.edges), [(0, 1)])


class TestVertexMap(unittest.TestCase):
    """Test simplicial vertex maps."""

    def test_rejects_non_simplicial(self):
        """A facet sent to a non-simplex is refused."""
        with self.assertRaises(HypothesisFailure):
            VertexMap(path(3), path(3), (0, 2, 1))

    def test_degenerate_detection(self):
        """Collapsing an edge is simplicial but degenerate."""
        f = VertexMap(path(3), path(3), (0, 0, 1))
        self.assertFalse(f.nondegenerate)
        self.assertFalse(is_nondegenerate(f))
        self.assertTrue(is_nondegenerate(identity_map(path(3))))
        with self.assertRaises(DegenerateMapError):
            f.require_nondegenerate()

    def test_preimages_and_composition(self):
        """Preimages are sorted; composition applies left map first."""
        f = VertexMap(path(3), complete(2), (0, 1, 0))
        self.assertEqual(f.preimages, ((0, 2), (1,)))
        flip = VertexMap(complete(2), complete(2), (1, 0))
        self.assertEqual(f.then(flip).image, (1, 0, 1))
        self.assertEqual(identity_map(path(3)).then(f), f)

    def test_simplex_inclusion(self):
        """The i-th vertex of the standard simplex goes to sigma[i]."""
        inc = simplex_inclusion(boundary_simplex(4), (1, 3))
        self.assertEqual(inc.image, (1, 3))
        with self.assertRaises(HypothesisFailure):
            simplex_inclusion(boundary_simplex(4), (0, 1, 2, 3))


if __name__ == "__main__":
    unittest.main()
