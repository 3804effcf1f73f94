"""Maximum-principle extremals on compact groups and the double integrator.

For A in Ad_K H_d and C in k the curves

    g(t) = exp(-C t) exp((C + A) t),   u(t) = exp(-C t) A exp(C t),   X(t) = C - u(t)

satisfy g' = u g and X' = [X, u], keep u on the orbit Ad_K H_d and make
kappa([X, u], Z) vanish for every Z in k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cartan
from .errors import MalformedInput
from .matcore import _expm_ah, as_matc, dagger


@dataclass(frozen=True)
class ExtremalParams:
    A: np.ndarray
    C: np.ndarray

    @staticmethod
    def make(A, C, pair: cartan.SymmetricPair, H_d=None):
        A = as_matc(A)
        C = as_matc(C)
        ck, cp = cartan.cartan_split(C, pair)
        if np.linalg.norm(cp) > 1e-10 * max(1.0, np.linalg.norm(C)):
            raise MalformedInput("C is not in k")
        ak, ap = cartan.cartan_split(A, pair)
        if np.linalg.norm(ak) > 1e-10 * max(1.0, np.linalg.norm(A)):
            raise MalformedInput("A is not in p")
        if H_d is not None:
            ev = np.sort(np.linalg.eigvalsh(1j * A))
            ed = np.sort(np.linalg.eigvalsh(1j * as_matc(H_d)))
            if np.max(np.abs(ev - ed)) > 1e-8:
                raise MalformedInput("A is not K-conjugate to the drift")
        return ExtremalParams(A, C)


def extremal_traj(p: ExtremalParams, t):
    """(g, X, u) at time t (scalar) or stacked over an array of times."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    eC = _expm_ah(-ts[:, None, None] * p.C)
    eCA = _expm_ah(ts[:, None, None] * (p.C + p.A))
    g = eC @ eCA
    u = eC @ p.A @ dagger(eC)
    X = p.C - u
    if np.ndim(t) == 0:
        return g[0], X[0], u[0]
    return g, X, u


def extremality_residual(X, u, pair: cartan.SymmetricPair) -> float:
    """max over k-basis Z of |kappa([X, u], Z)| / (|X| |u| |Z|) in the Killing norm."""
    X = np.asarray(X)
    u = np.asarray(u)
    nu = cartan.killing_norm(u)
    if nu == 0.0:
        return 0.0
    nX = max(cartan.killing_norm(X), 1e-300)
    Cm = X @ u - u @ X
    worst = 0.0
    for Z in pair.k_basis:
        v = abs(cartan.killing_su(Cm, Z)) / (nX * nu * cartan.killing_norm(Z))
        worst = max(worst, v)
    return float(worst)


def hamiltonian(X, u) -> float:
    return cartan.killing_su(X, u)


def ode_residuals(p: ExtremalParams, t, h=1e-4):
    """Central-difference residuals of g' = u g and X' = [X, u] at time t."""
    gm, Xm, _ = extremal_traj(p, t - h)
    gp, Xp, _ = extremal_traj(p, t + h)
    g, X, u = extremal_traj(p, t)
    rg = np.linalg.norm((gp - gm) / (2 * h) - u @ g)
    rX = np.linalg.norm((Xp - Xm) / (2 * h) - (X @ u - u @ X))
    return float(rg), float(rX)


# ---------------------------------------------------------- double integrator


@dataclass(frozen=True)
class DoubleIntState:
    x1: float
    x2: float


@dataclass(frozen=True)
class BangBang:
    t_F: float
    switch_times: tuple
    controls: tuple

    def to_json(self):
        return {"t_F": self.t_F, "switch_times": list(self.switch_times),
                "controls": list(self.controls)}


def double_int_optimal(x0: DoubleIntState) -> BangBang:
    """Time-optimal steering of x1' = x2, x2' = u, |u| <= 1 to the origin.

    The switching curve is x1 = -x2 |x2| / 2. Above it the control starts at
    -1, below it at +1, and it switches once on reaching the curve.
    """
    x1, x2 = float(x0.x1), float(x0.x2)
    if not (np.isfinite(x1) and np.isfinite(x2)):
        raise MalformedInput("state must be finite")
    if x1 == 0.0 and x2 == 0.0:
        return BangBang(0.0, (), ())
    sigma = x1 + 0.5 * x2 * abs(x2)
    if sigma == 0.0:
        u = -1.0 if x2 > 0 else 1.0
        return BangBang(abs(x2), (), (u,))
    u0 = -1.0 if sigma > 0 else 1.0
    # x1 - u0 x2^2 / 2 is conserved on the first arc; the curve is met at |x2| = v
    v = float(np.sqrt(-u0 * x1 + 0.5 * x2 * x2))
    ts = v - u0 * x2
    return BangBang(float(ts + v), (float(ts),), (u0, -u0))


def integrate_bang_bang(x0: DoubleIntState, plan: BangBang):
    """Exact piecewise-quadratic integration of a bang-bang plan."""
    x1, x2 = float(x0.x1), float(x0.x2)
    edges = (0.0,) + plan.switch_times + (plan.t_F,)
    for u, (a, b) in zip(plan.controls, zip(edges[:-1], edges[1:])):
        d = b - a
        x1, x2 = x1 + x2 * d + 0.5 * u * d * d, x2 + u * d
    return x1, x2
