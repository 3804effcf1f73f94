"""Small linear programs over Weyl orbits.

The production path solves

    min sum(gamma)  subject to  sum_i gamma_i Y_i = x,  gamma >= 0

by enumerating every basic subset of ``rank`` orbit points. The optimum of
a feasible bounded LP is attained at a basic feasible solution, so scanning
all of them is exact. The same number is the gauge of conv(orbit) when the
orbit is symmetric, which is how hull membership is decided.

``simplex`` is an independent dense two-phase simplex with Bland's rule,
used only to cross-check the enumeration.
"""
from __future__ import annotations

import itertools

import numpy as np

from .config import tol
from .errors import Infeasible


class GaugeSolver:
    """Precomputed basic subsets of an orbit (rows of ``points``)."""

    def __init__(self, points):
        P = np.atleast_2d(np.asarray(points, dtype=float))
        self.points = P
        m, r = P.shape
        self.rank = r
        scale = max(1.0, float(np.max(np.abs(P))))
        subsets, invs = [], []
        for S in itertools.combinations(range(m), r):
            B = P[list(S)].T
            if abs(np.linalg.det(B)) > 1e-10 * scale ** r:
                subsets.append(S)
                invs.append(np.linalg.inv(B))
        if not subsets:
            raise Infeasible("orbit does not span the torus")
        self.subsets = np.array(subsets, dtype=int)
        self.invs = np.array(invs)

    def _solve(self, X):
        """gamma for every (point, subset): shape (n, S, r)."""
        return np.einsum("sij,nj->nsi", self.invs, X)

    def gauge(self, X):
        """Minimal sum(gamma) for each row of X (inf where infeasible)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        feas = tol().lp_feas
        out = np.empty(len(X))
        for lo in range(0, len(X), 512):
            G = self._solve(X[lo:lo + 512])
            ok = np.all(G >= -feas * np.abs(G).max(axis=2, keepdims=True), axis=2)
            s = np.where(ok, G.sum(axis=2), np.inf)
            out[lo:lo + 512] = s.min(axis=1)
        return out

    def solve(self, x):
        """(alpha, beta) with beta over all orbit points; ties prefer earlier points."""
        x = np.asarray(x, dtype=float)
        m = len(self.points)
        if np.max(np.abs(x)) <= tol().lp_feas:
            beta = np.zeros(m)
            beta[0] = 1.0
            return 0.0, beta
        G = self._solve(x[None])[0]
        feas = tol().lp_feas * float(np.max(np.abs(G)))
        ok = np.all(G >= -feas, axis=1)
        if not np.any(ok):
            raise Infeasible("target outside the cone of the orbit")
        sums = np.where(ok, G.sum(axis=1), np.inf)
        best = sums.min()
        cand = np.flatnonzero(sums <= best + 1e-12 * max(1.0, best))
        betas = []
        for c in cand:
            b = np.zeros(m)
            b[self.subsets[c]] = np.clip(G[c], 0.0, None)
            betas.append(b)
        # lexicographically largest beta puts weight on the earliest orbit points
        betas.sort(key=lambda b: tuple(-np.round(b / b.sum(), 12)))
        b = betas[0]
        return float(b.sum()), b / b.sum()


def simplex(c, A, b, max_iter=10_000):
    """min c.x s.t. A x = b, x >= 0. Returns x or raises Infeasible."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    eps = 1e-12

    # phase one tableau with artificials n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))

    def pivot(r, col):
        T[r] /= T[r, col]
        for i in range(T.shape[0]):
            if i != r and T[i, col] != 0.0:
                T[i] -= T[i, col] * T[r]
        basis[r] = col

    def run(cost_cols):
        for _ in range(max_iter):
            red = T[-1, :cost_cols]
            enter = next((j for j in range(cost_cols) if red[j] < -eps), None)
            if enter is None:
                return
            col = T[:m, enter]
            rows = [i for i in range(m) if col[i] > eps]
            if not rows:
                raise Infeasible("unbounded")
            ratios = [T[i, -1] / col[i] for i in rows]
            rmin = min(ratios)
            leave = min((i for i, q in zip(rows, ratios) if q <= rmin + eps), key=lambda i: basis[i])
            pivot(leave, enter)
        raise Infeasible("iteration limit")

    T[-1, :] = 0.0
    T[-1, n:n + m] = 1.0
    for i in range(m):
        T[-1] -= T[i]
    run(n + m)
    if T[-1, -1] < -1e-9 * max(1.0, np.abs(b).max()):
        raise Infeasible("phase one residual")
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if abs(T[i, j]) > 1e-9), None)
            if j is not None:
                pivot(i, j)
    T2 = np.zeros((m + 1, n + 1))
    T2[:m, :n] = T[:m, :n]
    T2[:m, -1] = T[:m, -1]
    T2[-1, :n] = c
    for i in range(m):
        if basis[i] < n:
            T2[-1] -= c[basis[i]] * T2[i]
    T = T2
    run(n)
    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    return x
