"""Tests for the integer Smith normal form."""

import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from homcx.smith import rank_mod_p, smith_normal_form


def _diag(shape, diagonal):
    D = np.zeros(shape, dtype=object)
    for i, s in enumerate(diagonal):
        D[i, i] = s
    return D


class TestSmithNormalForm(unittest.TestCase):
    """Test diagonal form and transforms."""

    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]

    def assert_transforms(self, A, snf):
        A = np.asarray(A, dtype=object)
        P = snf.P.astype(object)
        Q = snf.Q.astype(object)
        self.assertTrue(np.array_equal(P.dot(A).dot(Q), _diag(A.shape, snf.diagonal)))
        self.assertTrue(np.array_equal(P.dot(snf.P_inv.astype(object)),
                                       np.identity(A.shape[0], dtype=int)))
        self.assertTrue(np.array_equal(snf.Q_inv.astype(object).dot(Q),
                                       np.identity(A.shape[1], dtype=int)))

    def test_known_example(self):
        """Test a textbook 3x3 example."""
        snf = smith_normal_form(self.A)
        self.assertEqual(snf.diagonal, [2, 6, 12])
        self.assertEqual(snf.torsion, [2, 6, 12])
        self.assertFalse(snf.exact)
        self.assert_transforms(self.A, snf)

    def test_arbitrary_precision_path(self):
        """Test the object-dtype path gives the same factors."""
        snf = smith_normal_form(self.A, guard=None)
        self.assertTrue(snf.exact)
        self.assertEqual(snf.diagonal, [2, 6, 12])
        self.assert_transforms(self.A, snf)

    def test_guard_escalation(self):
        """Test entries past the guard switch to Python integers."""
        big = 2 ** 40
        A = [[big, 0], [0, 2 * big]]
        with self.assertLogs("homcx.smith", level="WARNING"):
            snf = smith_normal_form(A)
        self.assertTrue(snf.exact)
        self.assertEqual(snf.diagonal, [big, 2 * big])

    def test_rank_deficient(self):
        """Test rank and unit factors of a singular matrix."""
        A = [[1, 1, 0], [0, 1, 1], [1, 2, 1]]
        snf = smith_normal_form(A)
        self.assertEqual(snf.rank, 2)
        self.assertEqual(snf.torsion, [])
        self.assert_transforms(A, snf)

    def test_boundary_of_projective_plane_style(self):
        """Test a torsion factor of two."""
        self.assertEqual(smith_normal_form([[2]]).diagonal, [2])
        self.assertEqual(smith_normal_form([[1, 1], [1, -1]]).diagonal, [1, 2])

    def test_empty_matrix(self):
        """Test matrices with a zero dimension."""
        snf = smith_normal_form(np.zeros((0, 3), dtype=np.int64))
        self.assertEqual(snf.rank, 0)
        self.assertEqual(snf.Q.shape, (3, 3))

    def test_rejects_vectors(self):
        """Test a 1-d input is refused."""
        with self.assertRaises(ValueError):
            smith_normal_form([1, 2, 3])


class TestRankModP(unittest.TestCase):
    """Test ranks over prime fields."""

    def test_rank_depends_on_prime(self):
        """Test torsion shows up as rank drop mod p."""
        A = [[2, 0], [0, 3]]
        self.assertEqual(rank_mod_p(A, 2), 1)
        self.assertEqual(rank_mod_p(A, 3), 1)
        self.assertEqual(rank_mod_p(A, 5), 2)

    def test_full_rank(self):
        """Test an invertible matrix mod 7."""
        self.assertEqual(rank_mod_p([[1, 2], [3, 4]], 7), 2)
        self.assertEqual(rank_mod_p([[1, 2], [2, 4]], 7), 1)


if __name__ == "__main__":
    unittest.main()
