"""Tests for named complexes."""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.catalog import annulus_pair, moebius_pair, named, names, odd_cycle_reflection
from homcx.chromatic import phi_d_certify
from homcx.errors import ParseError
from homcx.simplicial import VertexMap, boundary_simplex, cycle


class TestCatalog(unittest.TestCase):
    """Test catalog lookups."""

    def test_families(self):
        """Test standard family names."""
        self.assertEqual(named("cycle-5").complex, cycle(5))
        self.assertEqual(named("boundary-simplex-4").complex, boundary_simplex(4))
        self.assertEqual(named("boundary_simplex-4").complex, boundary_simplex(4))

    def test_every_listed_name_resolves(self):
        """Test names() only lists known entries."""
        for name in names():
            self.assertEqual(named(name).name, name)

    def test_unknown(self):
        """Test unknown and even reflections are refused."""
        for name in ["torus", "c4-reflection", "tree-nothing", "cycle-"]:
            with self.assertRaises(ParseError):
                named(name)

    def test_involutions_are_simplicial(self):
        """Test every shipped involution is a simplicial involution fixing sigma."""
        for entry in [odd_cycle_reflection(1), odd_cycle_reflection(3), annulus_pair(), moebius_pair()]:
            K = entry.complex
            omega = VertexMap(K, K, entry.involution)
            self.assertTrue(all(omega(omega(v)) == v for v in K.vertices), entry.name)
            self.assertEqual(omega.apply(entry.sigma), entry.sigma)

    def test_reflections_certify(self):
        """Test odd cycles with their reflection are Phi_1 complexes."""
        for r in (1, 2, 3):
            entry = odd_cycle_reflection(r)
            cert = phi_d_certify(entry.complex, entry.involution, entry.sigma)
            self.assertEqual(cert.d, 1)

    def test_moebius_pair_certifies(self):
        """Test the transposition of 0 and 1 is realized in the Moebius pair."""
        entry = moebius_pair()
        cert = phi_d_certify(entry.complex, entry.involution, entry.sigma)
        self.assertEqual(cert.holonomy.label, "Z2")


if __name__ == "__main__":
    unittest.main()
