"""Integer Smith normal form with unimodular transforms.

``smith_normal_form(A)`` returns ``P, Q`` (and their inverses) with
``P @ A @ Q == S`` diagonal, ``S[i, i]`` dividing ``S[i+1, i+1]``. Pivots are
chosen by smallest magnitude. Arithmetic starts in ``int64`` and restarts with
Python integers (``dtype=object``) as soon as an entry passes the guard.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 2 ** 31


class _Overflow(Exception):
    pass


@dataclass
class SmithForm:
    """Result of a Smith normal form computation."""

    diagonal: List[int]  # nonzero invariant factors, in divisibility order
    P: np.ndarray
    P_inv: np.ndarray
    Q: np.ndarray
    Q_inv: np.ndarray
    exact: bool  # True if arbitrary precision was needed

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> List[int]:
        return [s for s in self.diagonal if s > 1]


class _Elimination:
    def __init__(self, A: np.ndarray, dtype, guard: Optional[int]):
        m, n = A.shape
        self.S = A.astype(dtype, copy=True)
        self.P = np.identity(m, dtype=np.int64).astype(dtype)
        self.P_inv = self.P.copy()
        self.Q = np.identity(n, dtype=np.int64).astype(dtype)
        self.Q_inv = self.Q.copy()
        self.guard = guard

    def _check(self, *vectors):
        if self.guard is None:
            return
        for vec in vectors:
            if vec.size and int(np.abs(vec).max()) > self.guard:
                raise _Overflow()

    # row operations act on S and P; their inverses act on the columns of P_inv
    def swap_rows(self, i, j):
        if i == j:
            return
        for M in (self.S, self.P):
            M[[i, j], :] = M[[j, i], :]
        self.P_inv[:, [i, j]] = self.P_inv[:, [j, i]]

    def add_row(self, target, source, q):
        """row_target += q * row_source"""
        self.S[target, :] += q * self.S[source, :]
        self.P[target, :] += q * self.P[source, :]
        self.P_inv[:, source] -= q * self.P_inv[:, target]
        self._check(self.S[target, :], self.P[target, :], self.P_inv[:, source])

    def negate_row(self, i):
        self.S[i, :] *= -1
        self.P[i, :] *= -1
        self.P_inv[:, i] *= -1

    def swap_cols(self, i, j):
        if i == j:
            return
        for M in (self.S, self.Q):
            M[:, [i, j]] = M[:, [j, i]]
        self.Q_inv[[i, j], :] = self.Q_inv[[j, i], :]

    def add_col(self, target, source, q):
        """col_target += q * col_source"""
        self.S[:, target] += q * self.S[:, source]
        self.Q[:, target] += q * self.Q[:, source]
        self.Q_inv[source, :] -= q * self.Q_inv[target, :]
        self._check(self.S[:, target], self.Q[:, target], self.Q_inv[source, :])

    def run(self) -> List[int]:
        S = self.S
        m, n = S.shape
        diagonal: List[int] = []
        t = 0
        while t < min(m, n):
            block = S[t:, t:]
            nz = np.argwhere(block != 0)
            if nz.size == 0:
                break
            mags = np.abs(block[nz[:, 0], nz[:, 1]])
            i, j = nz[int(np.argmin(mags))]
            self.swap_rows(t, t + int(i))
            self.swap_cols(t, t + int(j))
            while True:
                pivot = S[t, t]
                clean = True
                for i in range(t + 1, m):
                    if S[i, t] != 0:
                        self.add_row(i, t, -(S[i, t] // pivot))
                        if S[i, t] != 0:
                            clean = False
                for j in range(t + 1, n):
                    if S[t, j] != 0:
                        self.add_col(j, t, -(S[t, j] // pivot))
                        if S[t, j] != 0:
                            clean = False
                if not clean:
                    self._move_smallest_to_pivot(t)
                    continue
                # divisibility of the remaining block by the pivot
                rest = S[t + 1:, t + 1:]
                bad = np.argwhere(rest % pivot != 0) if rest.size else np.empty((0, 2))
                if len(bad):
                    self.add_row(t, t + 1 + int(bad[0][0]), 1)
                    continue
                break
            if S[t, t] < 0:
                self.negate_row(t)
            diagonal.append(int(S[t, t]))
            t += 1
        return diagonal

    def _move_smallest_to_pivot(self, t):
        S = self.S
        best = (abs(S[t, t]), 'r', t)
        for i in range(t + 1, S.shape[0]):
            if S[i, t] != 0 and abs(S[i, t]) < best[0]:
                best = (abs(S[i, t]), 'r', i)
        for j in range(t + 1, S.shape[1]):
            if S[t, j] != 0 and abs(S[t, j]) < best[0]:
                best = (abs(S[t, j]), 'c', j)
        _, kind, idx = best
        if kind == 'r':
            self.swap_rows(t, idx)
        else:
            self.swap_cols(t, idx)


def smith_normal_form(A, guard: Optional[int] = DEFAULT_GUARD) -> SmithForm:
    """Smith normal form of an integer matrix with transforms.

    Args:
        A: 2-d integer array-like (may have a zero dimension).
        guard: Largest magnitude tolerated in int64 before switching to
            arbitrary precision; ``None`` forces arbitrary precision.

    Returns:
        SmithForm with ``P @ A @ Q`` equal to the diagonal matrix of
        ``diagonal`` padded with zeros.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if guard is not None and A.dtype != object:
        try:
            if A.size and int(np.abs(A).max()) > guard:
                raise _Overflow()
            elim = _Elimination(A, np.int64, guard)
            diagonal = elim.run()
            return SmithForm(diagonal, elim.P, elim.P_inv, elim.Q, elim.Q_inv, exact=False)
        except _Overflow:
            logger.warning("Smith form of a %dx%d matrix left int64 range; "
                           "switching to arbitrary precision", A.shape[0], A.shape[1])
    elim = _Elimination(A.astype(object), object, None)
    diagonal = elim.run()
    return SmithForm(diagonal, elim.P, elim.P_inv, elim.Q, elim.Q_inv, exact=True)


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix over the field with ``p`` elements."""
    M = np.asarray(A, dtype=object) % p
    M = M.copy()
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if M[r, c] % p:
                pivot = r
                break
        if pivot is None:
            continue
        M[[rank, pivot], :] = M[[pivot, rank], :]
        inv = pow(int(M[rank, c]), -1, p)
        M[rank, :] = (M[rank, :] * inv) % p
        for r in range(rows):
            if r != rank and M[r, c] % p:
                M[r, :] = (M[r, :] - M[r, c] * M[rank, :]) % p
        rank += 1
        if rank == rows:
            break
    return rank
