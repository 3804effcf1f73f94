"""Minimal times and pulse-drift-pulse synthesis for the one- and two-spin systems.

A target U_F is split by KAK as U_F = k a k^-1 (k k2) with a = exp(h(x)) and
x in the closed cell. The minimal time is the smallest alpha with
x = alpha * sum_i beta_i Y_i, beta on the simplex, Y_i running over the Weyl
orbit of the drift. The optimal sequence is one hard pulse k k2 followed by
drifts along k Y_i k^-1 for the times alpha * beta_i; all these directions
commute, so their order is irrelevant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import cartan, kakdec
from . import kron as kr
from .errors import DimensionCap, MalformedInput, NonGenericSystem, NotReached, NotUnitary
from .matcore import _expm_ah, as_matc, dagger, expm_ah_path, from_json, is_unitary, to_json

# ------------------------------------------------------------------ systems


@dataclass
class SpinSystem:
    name: str
    pair: cartan.SymmetricPair
    roots: cartan.RootData
    cell: kakdec.CellSpec
    hd: np.ndarray
    H_d: np.ndarray
    H_js: tuple
    orbit: cartan.WeylOrbitData

    @property
    def N(self):
        return self.roots.N

    def in_K(self, k, atol=1e-9) -> bool:
        w = self.roots.to_work(np.asarray(k))
        return bool(np.max(np.abs(w.imag)) <= atol
                    and np.allclose(w.real @ w.real.T, np.eye(self.N), atol=atol)
                    and np.linalg.det(w.real) > 0)


DEFAULT_HD = {"su2": (1.0,), "su4": (1.0, 2.0, 4.0)}


def control_generators(name):
    if name == "su2":
        return (kr.IX.copy(),)
    return tuple(kr.single_spin(op, site, 2) for site in (0, 1) for op in ("Ix", "Iy"))


def make_system(name="su2", hd=None, check_controllable=True) -> SpinSystem:
    """Build a system from torus coordinates of the drift (defaults: Iz, or (1, 2, 4))."""
    if name not in DEFAULT_HD:
        raise DimensionCap(f"unknown system {name!r}")
    roots = cartan.roots_for(name)
    hd = np.asarray(DEFAULT_HD[name] if hd is None else hd, dtype=float)
    if hd.shape != (roots.rank,):
        raise MalformedInput(f"drift needs {roots.rank} coordinates, got {hd.shape}")
    if not cartan.is_generic(hd, roots):
        raise NonGenericSystem(f"drift {[float(v) for v in hd]} lies on a root hyperplane")
    H_d = roots.h_matrix(hd)
    H_js = control_generators(name)
    if check_controllable and not cartan.controllability_check(H_d, H_js):
        raise NonGenericSystem("drift and controls do not generate the algebra")
    return SpinSystem(name, cartan.pair_for(name), roots, kakdec.CellSpec(name, roots),
                      hd, H_d, H_js, cartan.WeylOrbitData(hd, roots))


def system_from_drift(name, H_d, **kw) -> SpinSystem:
    """Build a system from a drift matrix, which must lie in the torus algebra."""
    roots = cartan.roots_for(name)
    H_d = as_matc(H_d)
    x = cartan.gamma_project(H_d, roots)
    if np.linalg.norm(roots.h_matrix(x) - H_d) > 1e-9 * max(1.0, np.linalg.norm(H_d)):
        raise NonGenericSystem("drift is not in the torus algebra")
    return make_system(name, x, **kw)


# ------------------------------------------------------------ alpha star


@dataclass(frozen=True)
class AlphaStar:
    alpha: float
    betas: np.ndarray
    orbit: cartan.WeylOrbitData

    def to_json(self):
        return {"alpha": self.alpha, "betas": [float(b) for b in self.betas],
                "orbit": [[float(v) for v in p] for p in self.orbit.points]}


def alpha_star(x_target, orbit: cartan.WeylOrbitData) -> AlphaStar:
    """min sum(gamma) with sum gamma_i Y_i = x, gamma >= 0, by basic-subset enumeration."""
    a, beta = orbit.solver.solve(np.asarray(x_target, dtype=float))
    return AlphaStar(a, beta, orbit)


def alpha_su2_closed_form(U_F) -> float:
    """Minimal time for drift Iz from the parameters of the symmetric factor.

    With U1 = [[e^{i phi} cos psi, i sin psi], [i sin psi, e^{-i phi} cos psi]]
    the time is arg(c + i sqrt(1 - c^2)) where c = cos(psi) cos(phi).
    """
    U1 = kakdec.split_sym(U_F).U1
    psi = float(np.arcsin(np.clip(U1[0, 1].imag, -1.0, 1.0)))
    phi = float(np.angle(U1[0, 0]))
    c = np.cos(psi) * np.cos(phi)
    return float(np.angle(c + 1j * np.sqrt(max(0.0, 1.0 - c * c))))


# ------------------------------------------------------- pulse sequences


@dataclass(frozen=True)
class HardPulse:
    k: np.ndarray

    def to_json(self):
        return {"type": "pulse", "k": to_json(self.k)}


@dataclass(frozen=True)
class Drift:
    direction_index: int
    k: np.ndarray
    duration: float

    def to_json(self):
        return {"type": "drift", "direction_index": int(self.direction_index),
                "k": to_json(self.k), "duration": float(self.duration)}


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple = ()
    system: str = "su2"
    hd: tuple = field(default_factory=tuple)

    @property
    def total_time(self) -> float:
        return float(sum(s.duration for s in self.segments if isinstance(s, Drift)))

    def to_json(self):
        return {"system": self.system, "hd": [float(v) for v in self.hd],
                "segments": [s.to_json() for s in self.segments],
                "total_time": self.total_time}

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)

    @staticmethod
    def from_json(obj):
        try:
            segs = []
            for s in obj["segments"]:
                if s["type"] == "pulse":
                    segs.append(HardPulse(from_json(s["k"])))
                elif s["type"] == "drift":
                    d = float(s["duration"])
                    if d < 0:
                        raise MalformedInput("negative drift duration")
                    segs.append(Drift(int(s["direction_index"]), from_json(s["k"]), d))
                else:
                    raise MalformedInput(f"unknown segment type {s['type']!r}")
            return PulseSequence(tuple(segs), obj.get("system", "su2"), tuple(obj.get("hd", ())))
        except (KeyError, TypeError) as e:
            raise MalformedInput(f"bad sequence: {e}") from None


def drift_direction(seg: Drift, system: SpinSystem):
    Y = system.orbit.matrix(seg.direction_index)
    return seg.k @ Y @ dagger(seg.k)


def synthesize(U_F, system: SpinSystem) -> PulseSequence:
    """Time-optimal pulse-drift sequence reaching U_F (hard pulses take no time)."""
    r = kakdec.kak(U_F, roots=system.roots)
    ast = alpha_star(r.x_log, system.orbit)
    segs = []
    kk = r.k1 @ r.k2
    if np.linalg.norm(kk - np.eye(system.N)) > 1e-12:
        segs.append(HardPulse(kk))
    for j, b in enumerate(ast.betas):
        if b > 0.0 and ast.alpha > 0.0:
            segs.append(Drift(j, r.k1, ast.alpha * float(b)))
    return PulseSequence(tuple(segs), system.name, tuple(float(v) for v in system.hd))


def expand_unreduced(seq: PulseSequence, system: SpinSystem) -> PulseSequence:
    """Rewrite every drift along k Y_j k^-1 as conjugated evolution under H_d itself.

    Uses k Y_j k^-1 = (k n_j) H_d (k n_j)^-1, so each drift becomes
    pulse (k n_j)^-1, drift along H_d, pulse k n_j. Adjacent pulses are merged.
    """
    j0 = _hd_index(system)
    out = []
    for s in seq.segments:
        if isinstance(s, HardPulse):
            out.append(s)
            continue
        m = s.k @ system.orbit.weyl_element(s.direction_index)
        out += [HardPulse(dagger(m)), Drift(j0, np.eye(system.N, dtype=np.complex128), s.duration),
                HardPulse(m)]
    merged = []
    for s in out:
        if merged and isinstance(s, HardPulse) and isinstance(merged[-1], HardPulse):
            merged[-1] = HardPulse(s.k @ merged[-1].k)
        else:
            merged.append(s)
    merged = [s for s in merged
              if not (isinstance(s, HardPulse) and np.linalg.norm(s.k - np.eye(system.N)) < 1e-12)]
    return PulseSequence(tuple(merged), seq.system, seq.hd)


def _hd_index(system):
    d = np.max(np.abs(system.orbit.points - system.hd), axis=1)
    return int(np.argmin(d))


# -------------------------------------------------- finite-speed pulses


def _quat(U):
    """Coefficients (w, x, y, z) of U = w + x Ix + y Iy + z Iz in SU(2)."""
    w = 0.5 * np.trace(U).real
    return np.array([w] + [0.5 * np.real(np.trace(dagger(B) @ U)) for B in (kr.IX, kr.IY, kr.IZ)])


def euler_xyx(U):
    """Angles (a, b, c) with U = exp(a Ix) exp(b Iy) exp(c Ix) for U in SU(2)."""
    w, x, y, z = _quat(U)
    b = float(np.arctan2(np.hypot(y, z), np.hypot(w, x)))
    s = float(np.arctan2(x, w)) if np.hypot(w, x) > 1e-14 else 0.0
    d = float(np.arctan2(z, y)) if np.hypot(y, z) > 1e-14 else 0.0
    return 0.5 * (s + d), b, 0.5 * (s - d)


def kron_factor(k):
    """SU(2) factors (A, B) with A ⊗ B = k for k in SU(2)⊗SU(2)."""
    R = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(R)
    A = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    B = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    ph = np.sqrt(np.linalg.det(A))
    A, B = A / ph, B * ph
    return A, B


def pulse_schedule(k, system: SpinSystem, v_max: float):
    """Constant-control pieces (duration, v) realizing k at amplitude v_max when H_d is off."""
    if system.name == "su2":
        s = float(np.arctan2(k[0, 1].real, k[0, 0].real))
        if abs(s) < 1e-15:
            return []
        return [(abs(s) / v_max, np.array([np.sign(s) * v_max]))]
    A, B = kron_factor(k)
    ea, eb = euler_xyx(A), euler_xyx(B)
    out = []
    # exp(c) acts first, then exp(b) about y, then exp(a)
    for idx, comp in ((2, 0), (1, 1), (0, 0)):
        p, q = ea[idx], eb[idx]
        m = max(abs(p), abs(q))
        if m < 1e-15:
            continue
        tau = m / v_max
        v = np.zeros(4)
        v[comp], v[2 + comp] = p / tau, q / tau
        out.append((tau, v))
    return out


# ------------------------------------------------------------- simulate


@dataclass
class SimResult:
    endpoint: np.ndarray
    trajectory: list
    duration: float


def simulate(seq: PulseSequence, system: SpinSystem, step=None, v_max=None) -> SimResult:
    """Left-multiply the segments in order; sample the trajectory every ``step``.

    With ``v_max`` each hard pulse is replaced by finite-amplitude controls
    acting together with the drift, which costs clock time.
    """
    N = system.N
    pieces = []   # (duration, generator) or (0, unitary)
    for s in seq.segments:
        if isinstance(s, HardPulse):
            if v_max is None:
                pieces.append((0.0, s.k))
            else:
                for tau, v in pulse_schedule(s.k, system, v_max):
                    H = system.H_d + sum(vi * Hj for vi, Hj in zip(v, system.H_js))
                    pieces.append((tau, H))
        else:
            pieces.append((s.duration, drift_direction(s, system)))
    T = float(sum(p[0] for p in pieces if p[0] > 0))
    step = (T / 256 if T > 0 else 1.0) if step is None else step
    U = np.eye(N, dtype=np.complex128)
    traj = [(0.0, U.copy())]
    t = 0.0
    nxt = step
    for dur, M in pieces:
        if dur == 0.0:
            U = M @ U
            continue
        t1 = t + dur
        ts = []
        while nxt <= t1 + 1e-12 and nxt <= T + 1e-12:
            ts.append(nxt)
            nxt += step
        E = expm_ah_path(M, [tau - t for tau in ts] + [dur])
        traj += [(tau, E[i] @ U) for i, tau in enumerate(ts)]
        U = E[-1] @ U
        t = t1
    if traj[-1][0] >= T - 1e-12 and len(traj) > 1:
        traj[-1] = (T, U.copy())
    else:
        traj.append((T, U.copy()))
    return SimResult(U, traj, T)


# -------------------------------------------------------------- verify


@dataclass
class VerifyReport:
    error: float
    total_time: float
    alpha_star: float
    certificate: bool

    def to_json(self):
        return {"error": self.error, "total_time": self.total_time,
                "alpha_star": self.alpha_star, "certificate": self.certificate}


def verify(seq: PulseSequence, U_F, system: SpinSystem) -> VerifyReport:
    U_F = as_matc(U_F)
    end = simulate(seq, system).endpoint
    err = float(np.linalg.norm(end - U_F))
    a = alpha_star(kakdec.pi_A(U_F, roots=system.roots), system.orbit).alpha
    T = seq.total_time
    return VerifyReport(err, T, a, bool(T <= a + 1e-9))


# ------------------------------------------------------ brute-force oracle


def coset_distance_su2(A, B, a, b):
    """Frobenius distance from [[a, b], [-b*, a*]] to the coset U_F K, U_F = [[A, B], ...].

    K = exp(R Ix) is the real rotation group, and for R = Re(U_F^H U) the best
    rotation attains 2 sqrt(Re p^2 + Re q^2) in tr(k^T R).
    """
    p = np.conj(A) * a + B * np.conj(b)
    q = np.conj(A) * b - B * np.conj(a)
    m = np.sqrt(p.real ** 2 + q.real ** 2)
    return np.sqrt(np.maximum(0.0, 4.0 - 4.0 * m))


def t_min_adjoint_bruteforce(U_F, system: SpinSystem, n_dirs=64, dt=1e-3, eps=None,
                             duty_levels=256, t_max=None, seed=0) -> float:
    """First time a discretized adjoint-system control reaches the coset U_F K.

    Controls take values in n_dirs points of the circle Ad_K H_d. Every
    schedule holds one direction or chatters between two neighbouring ones
    with a fixed duty ratio (Bresenham pattern, random phase per branch).
    The smallest hit time over all branches is returned.
    """
    if system.name != "su2":
        raise DimensionCap("brute force search is only available for one spin")
    U_F = as_matc(U_F)
    if not is_unitary(U_F, 1e-9):
        raise NotUnitary("target is not unitary")
    eps = 2 * dt if eps is None else eps
    lam = float(abs(system.hd[0]))
    t_max = (np.pi / lam + 4 * dt) if t_max is None else t_max
    A, B = U_F[0, 0], U_F[0, 1]
    if coset_distance_su2(A, B, 1.0 + 0j, 0j) < eps:
        return 0.0
    s = np.pi * np.arange(n_dirs) / n_dirs
    dirs = []
    for sj in s:
        k = _expm_ah(sj * kr.IX)
        E = _expm_ah(dt * (k @ system.H_d @ dagger(k)))
        dirs.append((E[0, 0], E[0, 1]))
    Ea = np.array([d[0] for d in dirs])
    Eb = np.array([d[1] for d in dirs])
    rng = np.random.default_rng(seed)
    j = np.repeat(np.arange(n_dirs), duty_levels)
    f = np.tile(np.arange(duty_levels) / duty_levels, n_dirs)
    phase = rng.uniform(0.0, 1.0, size=j.size)
    jn = (j + 1) % n_dirs
    a = np.ones(j.size, dtype=np.complex128)
    b = np.zeros(j.size, dtype=np.complex128)
    n_steps = int(np.ceil(t_max / dt))
    acc = phase.copy()
    for m in range(1, n_steps + 1):
        acc_new = acc + f
        use_next = np.floor(acc_new) > np.floor(acc)
        acc = acc_new
        idx = np.where(use_next, jn, j)
        ea, eb = Ea[idx], Eb[idx]
        a, b = ea * a - eb * np.conj(b), ea * b + eb * np.conj(a)
        if np.any(coset_distance_su2(A, B, a, b) < eps):
            return m * dt
    raise NotReached(f"coset not reached within t={t_max}")
