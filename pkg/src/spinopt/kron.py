"""Kronecker products and the tensor Pauli basis of su(2^n).

Single-spin factors use the convention

    Ix = [[0, 1], [-1, 0]],  Iy = [[0, i], [i, 0]],  Iz = [[i, 0], [0, -i]]

which are anti-Hermitian. In terms of the physics Pauli matrices
(sx, sy, sz) they read Ix = i*sy, Iy = i*sx, Iz = i*sz, so the triple is
i times the Pauli triple with x and y interchanged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimMismatch, DimensionCap, MalformedInput

ONE = np.eye(2, dtype=np.complex128)
IX = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
IY = np.array([[0, 1j], [1j, 0]], dtype=np.complex128)
IZ = np.array([[1j, 0], [0, -1j]], dtype=np.complex128)

FACTORS = {"1": ONE, "Ix": IX, "Iy": IY, "Iz": IZ}
LABELS = ("1", "Ix", "Iy", "Iz")


def kron(A, B) -> np.ndarray:
    """Kronecker product with entry (ij, kl) = A[i, k] * B[j, l]."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    n, m = A.shape[0], B.shape[0]
    return np.einsum("ik,jl->ijkl", A, B).reshape(n * m, n * m)


def kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for M in mats:
        out = kron(out, M)
    return out


def comm(A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimMismatch(f"{A.shape} vs {B.shape}")
    return A @ B - B @ A


@dataclass(frozen=True)
class TensorBasisElem:
    factors: tuple
    phase_exponent: int
    weight: int

    @property
    def matrix(self) -> np.ndarray:
        M = kron_all([FACTORS[f] for f in self.factors])
        return (1j ** self.phase_exponent) * M

    @property
    def label(self) -> str:
        body = "⊗".join(self.factors)
        return ("i·" + body) if self.phase_exponent else body

    def __str__(self):
        return self.label


def make_elem(factors) -> TensorBasisElem:
    factors = tuple(factors)
    for f in factors:
        if f not in FACTORS:
            raise MalformedInput(f"unknown factor {f!r}")
    w = sum(f != "1" for f in factors)
    return TensorBasisElem(factors, 1 if (w % 2 == 0) else 0, w)


def parse_elem(text: str) -> TensorBasisElem:
    """Parse labels such as ``i·1⊗Ix⊗Iy`` or ``Ix*Iy`` (ASCII forms allowed)."""
    s = text.strip().replace(" ", "")
    for pre in ("i·", "i*", "i."):
        if s.startswith(pre):
            s = s[len(pre):]
            break
    return make_elem(s.replace("⊗", "*").split("*"))


@lru_cache(maxsize=None)
def _basis(n):
    out = []
    for w in range(1, n + 1):
        for combo in itertools.product(LABELS, repeat=n):
            if sum(f != "1" for f in combo) == w:
                out.append(make_elem(combo))
    return tuple(out)


def pauli_basis(n: int):
    """The 4^n - 1 tensor basis elements, weight-major then lexicographic."""
    if n < 1 or n > 4:
        raise DimensionCap(f"n={n} outside 1..4")
    return list(_basis(n))


def pauli_matrices(n: int) -> np.ndarray:
    return np.array([e.matrix for e in pauli_basis(n)])


def single_spin(op: str, site: int, n: int) -> np.ndarray:
    """Embedded single-spin operator such as I_{1x} = Ix ⊗ 1."""
    facs = ["1"] * n
    facs[site] = op
    return kron_all([FACTORS[f] for f in facs])


def swap_operator(d: int) -> np.ndarray:
    """Involution P with A⊗B = P (B⊗A) P^{-1} for d x d factors."""
    P = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            P[i * d + j, j * d + i] = 1.0
    return P
