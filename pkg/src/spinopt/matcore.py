"""Dense complex matrix kernel for small sizes (2 to 16).

Matrices are plain ``numpy`` arrays of dtype complex128 with shape (n, n).
Most routines also accept a leading batch axis, which is how the samplers
push thousands of 2x2 or 4x4 problems through the same code path.

The Hermitian eigensolver is a cyclic Jacobi iteration with a fixed sweep
order, so results are reproducible bit for bit on a given platform.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import tol
from .errors import (BranchAmbiguity, DimensionCap, MalformedInput, NotAntiHermitian,
                     NotHermitian, NotSymmetricUnitary, NotUnitary)

MAX_DIM = 16
# irrational mixing weight used to split commuting pairs; any generic value works
_MIX = 0.6180339887498949


@dataclass(frozen=True)
class EigDecomp:
    values: np.ndarray
    vectors: np.ndarray


# ---------------------------------------------------------------- predicates

def _scale(M):
    return max(1.0, float(np.linalg.norm(M)))


def _dev(M, ref):
    return float(np.max(np.abs(M - ref))) if M.size else 0.0


def as_matc(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise MalformedInput(f"expected square matrix, got shape {M.shape}")
    if M.shape[-1] < 1 or M.shape[-1] > MAX_DIM:
        raise DimensionCap(f"dimension {M.shape[-1]} outside 1..{MAX_DIM}")
    return M


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def is_hermitian(M, atol=None) -> bool:
    atol = tol().hermitian if atol is None else atol
    return _dev(M, dagger(M)) <= atol * _scale(M)


def is_anti_hermitian(M, atol=None) -> bool:
    atol = tol().hermitian if atol is None else atol
    return _dev(M, -dagger(M)) <= atol * _scale(M)


def is_unitary(M, atol=None) -> bool:
    atol = tol().unitary if atol is None else atol
    n = M.shape[-1]
    return _dev(dagger(M) @ M, np.eye(n)) <= atol * n


def is_symmetric(M, atol=None) -> bool:
    atol = tol().symmetric if atol is None else atol
    return _dev(M, np.swapaxes(M, -1, -2)) <= atol * _scale(M)


def is_traceless(M, atol=None) -> bool:
    atol = tol().hermitian if atol is None else atol
    return bool(np.all(np.abs(np.trace(M, axis1=-2, axis2=-1)) <= atol * _scale(M)))


def is_special_unitary(M, atol=1e-9) -> bool:
    return is_unitary(M, atol) and abs(np.linalg.det(M) - 1.0) <= atol * M.shape[-1]


# ------------------------------------------------------------ inner products

def inner(A, B) -> float:
    """Real trace inner product Re tr(A^H B)."""
    return float(np.real(np.vdot(A, B)))


def fro(A) -> float:
    return float(np.linalg.norm(A))


# ----------------------------------------------------------------- JSON form

def to_json(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    flat = M.reshape(-1)
    return {"dim": int(M.shape[0]),
            "re": [float(x) for x in flat.real],
            "im": [float(x) for x in flat.imag]}


def from_json(obj) -> np.ndarray:
    try:
        n = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad MatC object: {exc}") from None
    if n < 1 or n > MAX_DIM:
        raise DimensionCap(f"dimension {n} outside 1..{MAX_DIM}")
    if re.shape != (n * n,) or im.shape != (n * n,):
        raise MalformedInput("entries.length must equal dim^2")
    return (re + 1j * im).reshape(n, n)


# ------------------------------------------------------------ Jacobi solver

def _jacobi(A):
    """Cyclic complex Jacobi on a stack of Hermitian matrices.

    Returns (values, vectors) with values unsorted. ``A`` is copied.
    """
    t = tol()
    A = np.array(A, dtype=np.complex128, copy=True)
    B, n, _ = A.shape
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), A.shape).copy()
    scale = np.maximum(np.linalg.norm(A, axis=(1, 2)), 1e-300)
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(t.jacobi_max_sweeps):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
        if np.all(off <= t.jacobi_off * scale):
            break
        for p, q in pairs:
            apq = A[:, p, q]
            mag = np.abs(apq)
            act = mag > 1e-300
            if not act.any():
                continue
            ph = np.where(act, apq / np.where(act, mag, 1.0), 1.0)
            app = A[:, p, p].real
            aqq = A[:, q, q].real
            tau = np.where(act, (aqq - app) / (2.0 * np.where(act, mag, 1.0)), 0.0)
            sgn = np.where(tau >= 0, 1.0, -1.0)
            tt = np.where(act, sgn / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + tt * tt)
            s = tt * c
            # J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p, q) plane
            jpp, jpq = c, s
            jqp, jqq = -s * np.conj(ph), c * np.conj(ph)
            cp = A[:, :, p].copy()
            cq = A[:, :, q]
            A[:, :, p] = cp * jpp[:, None] + cq * jqp[:, None]
            A[:, :, q] = cp * jpq[:, None] + cq * jqq[:, None]
            rp = A[:, p, :].copy()
            rq = A[:, q, :]
            A[:, p, :] = rp * np.conj(jpp)[:, None] + rq * np.conj(jqp)[:, None]
            A[:, q, :] = rp * np.conj(jpq)[:, None] + rq * np.conj(jqq)[:, None]
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            vp = V[:, :, p].copy()
            vq = V[:, :, q]
            V[:, :, p] = vp * jpp[:, None] + vq * jqp[:, None]
            V[:, :, q] = vp * jpq[:, None] + vq * jqq[:, None]
    vals = np.real(np.diagonal(A, axis1=1, axis2=2)).copy()
    return vals, V


def _gram_schmidt_clusters(vals, V, gap):
    """Re-orthonormalize eigenvector columns inside each degenerate cluster."""
    n = vals.shape[-1]
    if n < 2:
        return V
    close = np.diff(vals, axis=-1) < gap
    for b in np.nonzero(close.any(axis=-1))[0]:
        start = 0
        for i in range(1, n + 1):
            if i == n or not close[b, i - 1]:
                if i - start > 1:
                    cols = V[b, :, start:i]
                    out = np.empty_like(cols)
                    for j in range(cols.shape[1]):
                        v = cols[:, j].copy()
                        for k in range(j):
                            v -= np.vdot(out[:, k], v) * out[:, k]
                        out[:, j] = v / np.linalg.norm(v)
                    V[b, :, start:i] = out
                start = i
    return V


def _eigh_batch(H):
    vals, V = _jacobi(H)
    order = np.argsort(vals, axis=-1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=-1)
    V = np.take_along_axis(V, order[:, None, :], axis=-1)
    V = _gram_schmidt_clusters(vals, V, tol().degenerate_gap)
    return vals, V


def herm_eig(H) -> EigDecomp:
    """Eigen-decomposition of a Hermitian matrix (or stack), values ascending."""
    H = as_matc(H)
    if not is_hermitian(H):
        raise NotHermitian("matrix is not Hermitian at tolerance")
    H = 0.5 * (H + dagger(H))
    single = H.ndim == 2
    vals, V = _eigh_batch(H.reshape(-1, *H.shape[-2:]))
    if single:
        return EigDecomp(vals[0], V[0])
    return EigDecomp(vals.reshape(H.shape[:-1]), V.reshape(H.shape))


def _commuting_eig(P, Q):
    """Common eigenbasis of commuting Hermitian stacks P and Q.

    Diagonalizes P + c Q, then splits any near-degenerate cluster with the
    compressed Q (or P) so coincidences in the mixture do not matter.
    """
    vals, V = _eigh_batch(P + _MIX * Q)
    n = P.shape[-1]
    win = tol().cluster_refine * np.maximum(1.0, np.abs(vals).max(axis=-1))
    close = np.diff(vals, axis=-1) < win[:, None]
    for b in np.nonzero(close.any(axis=-1))[0]:
        start = 0
        for i in range(1, n + 1):
            if i == n or not close[b, i - 1]:
                if i - start > 1:
                    W = V[b, :, start:i]
                    for M in (Q[b], P[b]):
                        sub = dagger(W) @ M @ W
                        sub = 0.5 * (sub + dagger(sub))
                        _, R = _eigh_batch(sub[None])
                        W = W @ R[0]
                    V[b, :, start:i] = W
                start = i
    return V


# ------------------------------------------------------- exponential and log

def expm_ah(X) -> np.ndarray:
    """exp(X) for anti-Hermitian X through the spectrum of iX."""
    X = as_matc(X)
    if not is_anti_hermitian(X):
        raise NotAntiHermitian("matrix is not anti-Hermitian at tolerance")
    return _expm_ah(X)


def _expm_ah(X):
    H = 1j * X
    H = 0.5 * (H + dagger(H))
    shape = H.shape
    vals, V = _eigh_batch(H.reshape(-1, *shape[-2:]))
    E = (V * np.exp(-1j * vals)[:, None, :]) @ dagger(V)
    return E.reshape(shape)


def expm_ah_path(X, ts) -> np.ndarray:
    """exp(t X) for every t in ts from one spectral decomposition."""
    H = 1j * as_matc(X)
    H = 0.5 * (H + dagger(H))
    vals, V = _eigh_batch(H[None])
    ph = np.exp(-1j * np.outer(np.asarray(ts, dtype=float), vals[0]))
    return np.einsum("ij,tj,kj->tik", V[0], ph, np.conj(V[0]))


def _unitary_eig(U):
    """Eigenphases in (-pi, pi] and eigenvectors of a stack of unitaries."""
    P = 0.5 * (U + dagger(U))
    Q = -0.5j * (U - dagger(U))
    V = _commuting_eig(P, Q)
    d = np.einsum("bji,bjk,bki->bi", np.conj(V), U, V)
    return np.angle(d), V


def logu(U) -> np.ndarray:
    """Principal logarithm of a unitary; eigenphases in (-pi, pi]."""
    U = as_matc(U)
    if not is_unitary(U):
        raise NotUnitary("matrix is not unitary at tolerance")
    shape = U.shape
    ph, V = _unitary_eig(U.reshape(-1, *shape[-2:]))
    if np.any(np.pi - np.abs(ph) < tol().branch):
        raise BranchAmbiguity("eigenphase within branch tolerance of pi")
    L = (V * (1j * ph)[:, None, :]) @ dagger(V)
    L = 0.5 * (L - dagger(L))
    return L.reshape(shape)


def unitary_phases(U) -> np.ndarray:
    """Eigenphases of a unitary, sorted ascending."""
    U = as_matc(U)
    ph, _ = _unitary_eig(U.reshape(-1, *U.shape[-2:]))
    return np.sort(ph, axis=-1).reshape(U.shape[:-1])


# ------------------------------------------------ symmetric unitary matrices

def sym_unitary_diag(S):
    """Factor a symmetric unitary as O diag(e^{i phases}) O^T with O in SO(n)."""
    S = as_matc(S)
    if not (is_symmetric(S) and is_unitary(S, tol().symmetric)):
        raise NotSymmetricUnitary("matrix is not a symmetric unitary at tolerance")
    single = S.ndim == 2
    Sb = S.reshape(-1, *S.shape[-2:])
    Sb = 0.5 * (Sb + np.swapaxes(Sb, -1, -2))
    R = Sb.real.astype(np.complex128)
    I = Sb.imag.astype(np.complex128)
    O = np.real(_commuting_eig(R, I))
    # Jacobi on real input only produces +-1 phases; fix orientation
    neg = np.linalg.det(O) < 0
    O[neg, :, 0] *= -1.0
    d = np.einsum("bji,bjk,bki->bi", O, Sb, O)
    phases = np.angle(d)
    if single:
        return O[0], phases[0]
    return O.reshape(S.shape[:-2] + O.shape[-2:]), phases.reshape(S.shape[:-1])


def sym_sqrt(S):
    """Symmetric unitary square root of a symmetric unitary, det fixed to +1 when n even allows."""
    O, ph = sym_unitary_diag(S)
    half = 0.5 * ph
    r = O @ np.diag(np.exp(1j * half)) @ O.T
    if np.real(np.linalg.det(r)) < 0:
        half = half.copy()
        half[0] += np.pi
        r = O @ np.diag(np.exp(1j * half)) @ O.T
    return r


# -------------------------------------------------------------- misc helpers

def haar_unitary(n, rng, special=True) -> np.ndarray:
    """Haar-random unitary from the QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    if special:
        Q = Q / np.linalg.det(Q) ** (1.0 / n)
    return Q


def random_hermitian(n, rng) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (Z + Z.conj().T)


def random_su(n, rng, scale=1.0) -> np.ndarray:
    """Random traceless anti-Hermitian matrix."""
    H = random_hermitian(n, rng)
    H -= np.trace(H) / n * np.eye(n)
    return 1j * scale * H
