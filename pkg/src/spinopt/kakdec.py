"""KAK decomposition g = k1 a k2 with the torus factor folded into the closed cell.

Everything is computed in the work frame where K = SO(N). A torus element is
exp(i diag(theta)) with sum(theta) = 0. Its affine Weyl group acts on theta by
permutations and by shifts pi*n with integer n summing to zero; the shifted
exponential differs by the central-sign matrix d = diag((-1)^n).

The cell used here is the closed alcove

    theta_1 >= theta_2 >= ... >= theta_N,   theta_1 - theta_N <= pi,

which is a strict fundamental domain for that action. Every torus element
therefore has exactly one representative in it, up to the sign d.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import cartan
from .config import tol
from .errors import FactorizationFail, FoldFail, NotSymmetricUnitary, NotUnitary
from .matcore import as_matc, dagger, is_special_unitary, is_symmetric, is_unitary, sym_unitary_diag


@dataclass(frozen=True)
class CellSpec:
    pair_id: str
    roots: cartan.RootData

    @property
    def N(self):
        return self.roots.N

    @property
    def inequalities(self):
        """Rows (A, b) of A x <= b describing the closed cell in coordinates."""
        M = self.roots.theta_map
        A = [M[i + 1] - M[i] for i in range(self.N - 1)]
        A.append(M[0] - M[-1])
        b = [0.0] * (self.N - 1) + [np.pi]
        return np.array(A), np.array(b)

    @property
    def vertices(self):
        """Cell vertices: 0 and pi/N times the fundamental coweights."""
        out = [np.zeros(self.roots.rank)]
        N = self.N
        for j in range(1, N):
            th = np.array([(N - j) / N] * j + [-j / N] * (N - j)) * np.pi
            out.append(self.roots.coords_from_theta(th))
        return np.array(out)

    @property
    def d_group(self):
        """Central-sign matrices diag((-1)^n) with sum(n) = 0, in the work frame."""
        N = self.N
        out = []
        for signs in itertools.product((1.0, -1.0), repeat=N):
            if sum(s < 0 for s in signs) % 2 == 0:
                out.append(np.diag(np.array(signs, dtype=np.complex128)))
        return out

    def contains(self, x, atol=None):
        atol = tol().cell if atol is None else atol
        A, b = self.inequalities
        return bool(np.all(A @ np.asarray(x, dtype=float) <= b + atol))

    def to_json(self):
        A, b = self.inequalities
        return {"pair_id": self.pair_id,
                "vertices": [[float(v) for v in p] for p in self.vertices],
                "A": [[float(v) for v in r] for r in A], "b": [float(v) for v in b]}


def cell_for(name: str) -> CellSpec:
    return CellSpec(name, cartan.roots_for(name))


# ----------------------------------------------------------------- folding


@dataclass(frozen=True)
class FoldResult:
    x_folded: np.ndarray
    d: np.ndarray         # central sign, work frame
    n: np.ndarray         # Weyl element in SO(N), work frame
    perm: tuple           # theta_folded[i] = (theta + pi*shift)[perm[i]]
    shift: np.ndarray


def _fold_theta(th):
    """Fold a phase vector (sum a multiple of pi is allowed) into the alcove.

    Returns (theta_f, perm, shift) with theta_f = (th + pi*shift)[perm] and
    sum(theta_f) = 0.
    """
    th = np.asarray(th, dtype=float)
    N = len(th)
    t = np.mod(th, np.pi)
    t[t >= np.pi - 1e-15] = 0.0
    shift = np.rint((t - th) / np.pi)
    c = int(np.rint(t.sum() / np.pi))
    if c < 0 or c > N:
        raise FoldFail(f"phase sum {t.sum()} is not a multiple of pi")
    order = sorted(range(N), key=lambda i: (-t[i], i))
    for i in order[:c]:
        shift[i] -= 1.0
    perm = tuple(order[c:] + order[:c])
    th_f = (th + np.pi * shift)[list(perm)]
    if abs(th_f.sum()) > 1e-8:
        raise FoldFail("folded phases do not sum to zero")
    return th_f, perm, shift


def _perm_matrix(perm):
    """n in SO(N) with n diag(v[perm]) n^T = diag(v) for every vector v."""
    N = len(perm)
    P = np.zeros((N, N))
    for i, p in enumerate(perm):
        P[p, i] = 1.0
    if np.linalg.det(P) < 0:
        P[:, 0] *= -1.0
    return P


def fold_to_cell(x, cell: CellSpec) -> FoldResult:
    """Fold torus coordinates into the closed cell.

    Satisfies exp(h(x)) = n exp(h(x_folded)) n^T d in the work frame, with
    n a Weyl element of SO(N) and d a central sign. Points already in the
    cell come back unchanged with n = d = 1.
    """
    R = cell.roots
    x = np.asarray(x, dtype=float)
    N = cell.N
    if cell.contains(x):
        return FoldResult(_clamp(x, cell), np.eye(N, dtype=np.complex128), np.eye(N),
                          tuple(range(N)), np.zeros(N))
    th_f, perm, shift = _fold_theta(R.theta(x))
    xf = _clamp(R.coords_from_theta(th_f), cell)
    if not cell.contains(xf):
        raise FoldFail("folded point outside the cell")
    d = np.diag(np.exp(-1j * np.pi * shift))
    d = np.diag(np.rint(d.diagonal().real)).astype(np.complex128)
    return FoldResult(xf, d, _perm_matrix(perm), perm, shift)


def _clamp(x, cell):
    """Pull points lying within tolerance outside a face back onto it."""
    R = cell.roots
    th = R.theta(x)
    N = cell.N
    atol = tol().cell
    th = th.copy()
    for i in range(N - 1):
        if th[i + 1] > th[i] and th[i + 1] - th[i] <= atol:
            m = 0.5 * (th[i] + th[i + 1])
            th[i] = th[i + 1] = m
    spread = th[0] - th[-1]
    if np.pi < spread <= np.pi + atol:
        ex = 0.5 * (spread - np.pi)
        th[0] -= ex
        th[-1] += ex
    return R.coords_from_theta(th)


# --------------------------------------------------------------------- KAK


@dataclass(frozen=True)
class KakResult:
    k1: np.ndarray
    a: np.ndarray
    k2: np.ndarray
    x_log: np.ndarray

    def to_json(self):
        from .matcore import to_json
        return {"k1": to_json(self.k1), "a": to_json(self.a), "k2": to_json(self.k2),
                "x_log": [float(v) for v in self.x_log]}


def _check_su(g):
    g = as_matc(g)
    if not is_unitary(g, 1e-9):
        raise NotUnitary("input is not unitary")
    if not is_special_unitary(g, 1e-9):
        raise NotUnitary("input does not have determinant 1")
    return g


def _kak_work(gw, roots):
    """KAK in the work frame: returns (k1, theta_f, k2) with k1, k2 in SO(N)."""
    S2 = gw @ gw.T
    S2 = 0.5 * (S2 + S2.T)
    O, phi = sym_unitary_diag(S2)
    th_f, perm, _ = _fold_theta(0.5 * phi)
    k1 = O[:, list(perm)]
    if np.linalg.det(k1) < 0:
        k1 = k1.copy()
        k1[:, 0] *= -1.0
    a = np.exp(1j * th_f)
    k2c = (np.conj(a)[:, None] * k1.T) @ gw
    if np.max(np.abs(k2c.imag)) > 1e-6:
        raise FactorizationFail("right factor is not real")
    k2 = k2c.real
    if len(th_f) % 2 == 0 and np.trace(k1) < 0:
        k1, k2 = -k1, -k2
    return k1, th_f, k2


def kak(g, pair=None, roots=None) -> KakResult:
    """g = k1 a k2 with k1, k2 in K and a = exp(h(x_log)), x_log in the closed cell."""
    g = _check_su(g)
    roots = roots or cartan.roots_for("su2" if g.shape[0] == 2 else "su4")
    cell = CellSpec(roots.name, roots)
    gw = roots.to_work(g)
    k1w, th_f, k2w = _kak_work(gw, roots)
    x = _clamp(roots.coords_from_theta(th_f), cell)
    k1 = roots.from_work(k1w.astype(np.complex128))
    k2 = roots.from_work(k2w.astype(np.complex128))
    a = roots.from_work(np.diag(np.exp(1j * roots.theta(x))))
    res = KakResult(k1, a, k2, x)
    if np.linalg.norm(k1 @ a @ k2 - g) > 1e-8:
        raise FactorizationFail("reassembly residual too large")
    return res


def pi_A(g, pair=None, roots=None) -> np.ndarray:
    return kak(g, pair, roots).x_log


@dataclass(frozen=True)
class SplitResult:
    U1: np.ndarray        # computational frame
    k1: np.ndarray        # computational frame, in K
    U1_work: np.ndarray   # symmetric in the work frame


def split_sym(U_F, pair=None, roots=None) -> SplitResult:
    """U_F = U1 k1 with U1 symmetric (work frame) and k1 in K.

    For one spin the closed form tan t = Re b / Re a is used on
    U_F = [[a, b], [-conj(b), conj(a)]]; when Re a = Re b = 0 the input is
    already symmetric and t = 0. A final sign flip (legal since -1 lies in
    K) keeps Re tr U1 >= 0. Two spins go through the KAK factors.
    """
    U_F = _check_su(U_F)
    if U_F.shape[0] == 2:
        a, b = U_F[0, 0], U_F[0, 1]
        if abs(a.real) < 1e-10 and abs(b.real) < 1e-10:
            t = 0.0
        else:
            t = float(np.arctan2(b.real, a.real))
        c, s = np.cos(t), np.sin(t)
        k = np.array([[c, s], [-s, c]], dtype=np.complex128)
        U1 = U_F @ k.T
        if np.real(np.trace(U1)) < 0:
            U1, k = -U1, -k
        U1 = 0.5 * (U1 + U1.T)
        return SplitResult(U1, k, U1)
    roots = roots or cartan.roots_for("su4")
    r = kak(U_F, pair, roots)
    U1 = r.k1 @ r.a @ dagger(r.k1)
    kk = r.k1 @ r.k2
    return SplitResult(U1, kk, roots.to_work(U1))


def _alcove_lift(phases, atol=1e-9):
    """True if some lift of the phases (mod 2 pi) sums to 0 with spread <= pi."""
    p = np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    for bits in itertools.product((0.0, 1.0), repeat=len(p)):
        th = p - 2 * np.pi * np.array(bits)
        if abs(th.sum()) < 1e-7 and th.max() - th.min() <= np.pi + atol:
            return True
    return False


def theta_member(g, pair=None, roots=None) -> bool:
    """Membership in Theta = Ad_K exp(closed cell)."""
    g = as_matc(g)
    roots = roots or cartan.roots_for("su2" if g.shape[0] == 2 else "su4")
    gw = roots.to_work(g)
    if not (is_unitary(gw, 1e-9) and is_symmetric(gw, 1e-9)):
        return False
    try:
        _, ph = sym_unitary_diag(gw)
    except NotSymmetricUnitary:
        return False
    return _alcove_lift(ph)


def theta_member_su2(U) -> bool:
    """Single-spin test: U = [[e^{i phi} cos psi, i sin psi], ...] with phi, psi in [-pi/2, pi/2]."""
    U = as_matc(U)
    if not (is_unitary(U, 1e-9) and is_symmetric(U, 1e-9)):
        return False
    return bool(U[0, 0].real >= -1e-9)
