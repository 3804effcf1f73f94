"""Monte Carlo reachable sets of the unreduced, adjoint and reduced systems.

unreduced   U' = (H_d + sum_j v_j H_j) U
adjoint     U' = X U with X taking values in Ad_K H_d
reduced     the coset U K, carried as S = U U^T in the work frame

All three are sampled with piecewise-constant controls on ``n_switches``
equal pieces. The default unreduced mode shares its random numbers with the
adjoint sampler: each change of adjoint direction becomes a finite-amplitude
pulse, so the gap between the clouds isolates the cost of finite v_max.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import cartan
from . import kron as kr
from .errors import DimensionCap, MalformedInput, NotReached
from .matcore import _expm_ah, as_matc, dagger, sym_sqrt, unitary_phases
from .timeopt import SpinSystem, coset_distance_su2, pulse_schedule


@dataclass(frozen=True)
class ReachConfig:
    n_samples: int = 1000
    n_switches: int = 8
    seed: int = 0
    v_max: float = 40.0
    mode: str = "emulate"          # or "uniform"
    axis_aligned: bool = True
    prefix_time: float | None = None
    conjugator: np.ndarray | None = field(default=None, compare=False)
    dt: float = 1e-3
    eps: float | None = None
    streams: int = 4

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass
class ReachCloud:
    system_id: str
    t_horizon: float
    points: np.ndarray
    cfg: ReachConfig

    def __len__(self):
        return len(self.points)


# --------------------------------------------------------- control draws


def _draw_ks(system: SpinSystem, cfg: ReachConfig):
    """Conjugators k (n_samples, n_switches, N, N) defining adjoint directions."""
    N, n, m = system.N, cfg.n_samples, cfg.n_switches
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    counts = [n // cfg.streams + (1 if i < n % cfg.streams else 0) for i in range(cfg.streams)]
    chunks = []
    for ss, c in zip(seqs, counts):
        rng = np.random.default_rng(ss)
        if system.name == "su2":
            s = rng.uniform(0.0, np.pi, size=(c, m))
            chunks.append(_expm_ah(s[..., None, None] * kr.IX))
        else:
            ks = cartan.random_k(system.pair, rng, size=c * m)
            chunks.append(ks.reshape(c, m, N, N))
    ks = np.concatenate(chunks, axis=0) if chunks else np.zeros((0, m, N, N), complex)
    if cfg.axis_aligned:
        fixed = _axis_ks(system)[: n]
        ks[: len(fixed)] = fixed[:, None]
    return ks


def _axis_ks(system):
    if system.name == "su2":
        s = np.pi * np.arange(4) / 4
        return _expm_ah(s[:, None, None] * kr.IX)
    return np.array([system.orbit.weyl_element(j) for j in range(len(system.orbit))])


def _piece_times(t, cfg):
    m = cfg.n_switches
    if cfg.prefix_time is None:
        return np.full(m, t / m)
    if cfg.prefix_time > t:
        raise MalformedInput("prefix_time exceeds the horizon")
    return np.full(m, cfg.prefix_time / m)


def _adjoint_points(system, t, cfg, ks):
    taus = _piece_times(t, cfg)
    if cfg.conjugator is not None:
        ks = cfg.conjugator @ ks
    X = ks @ system.H_d @ dagger(ks)                       # (n, m, N, N)
    E = _expm_ah(X * taus[None, :, None, None])
    U = np.broadcast_to(np.eye(system.N, dtype=np.complex128), (len(ks), system.N, system.N)).copy()
    for j in range(E.shape[1]):
        U = E[:, j] @ U
    return U


def _reduced_points(system, t, cfg, ks):
    """Evolve S = U U^T (work frame) and return its symmetric square root."""
    R = system.roots
    taus = _piece_times(t, cfg)
    if cfg.conjugator is not None:
        ks = cfg.conjugator @ ks
    X = ks @ system.H_d @ dagger(ks)
    E = R.frame @ _expm_ah(X * taus[None, :, None, None]) @ dagger(R.frame)
    n, N = len(ks), system.N
    S = np.broadcast_to(np.eye(N, dtype=np.complex128), (n, N, N)).copy()
    for j in range(E.shape[1]):
        S = E[:, j] @ S @ np.swapaxes(E[:, j], -1, -2)
    out = np.empty_like(S)
    for i in range(n):
        out[i] = R.from_work(sym_sqrt(0.5 * (S[i] + S[i].T)))
    return out


def _unreduced_emulate(system, t, cfg, ks):
    """Pulses at amplitude v_max between the drift pieces, cut off at time t."""
    taus = _piece_times(t, cfg)
    T_end = float(taus.sum())
    n, N = len(ks), system.N
    if cfg.conjugator is not None:
        ks = cfg.conjugator @ ks
    Hs = np.array(system.H_js)
    U = np.broadcast_to(np.eye(N, dtype=np.complex128), (n, N, N)).copy()
    clock = np.zeros(n)
    prev = np.broadcast_to(np.eye(N, dtype=np.complex128), (n, N, N))
    for j in range(ks.shape[1]):
        q = dagger(ks[:, j]) @ prev
        durs = np.zeros((n, 4))
        gens = np.broadcast_to(system.H_d, (n, 4, N, N)).copy()
        for i in range(n):
            qi = _short_rotation(q[i]) if system.name == "su2" else q[i]
            for s_, (tau, v) in enumerate(pulse_schedule(qi, system, cfg.v_max)):
                durs[i, s_] = tau
                gens[i, s_] = system.H_d + np.tensordot(v, Hs, axes=1)
        durs[:, 3] = taus[j]
        for s_ in range(4):
            d = np.clip(np.minimum(durs[:, s_], T_end - clock), 0.0, None)
            U = _expm_ah(d[:, None, None] * gens[:, s_]) @ U
            clock += d
        prev = ks[:, j]
    return U


def _short_rotation(q):
    """Pick the sign of q in SO(2) with the shorter rotation (both act alike on cosets)."""
    return q if q[0, 0].real >= 0 else -q


def _unreduced_uniform(system, t, cfg):
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(cfg.streams + 1)[-1])
    taus = _piece_times(t, cfg)
    n, m = cfg.n_samples, cfg.n_switches
    v = rng.uniform(-cfg.v_max, cfg.v_max, size=(n, m, len(system.H_js)))
    H = system.H_d + np.einsum("nmj,jab->nmab", v, np.array(system.H_js))
    E = _expm_ah(H * taus[None, :, None, None])
    U = np.broadcast_to(np.eye(system.N, dtype=np.complex128), (n, system.N, system.N)).copy()
    for j in range(m):
        U = E[:, j] @ U
    return U


def sample_reach(system_id: str, system: SpinSystem, t: float, cfg: ReachConfig = ReachConfig()) -> ReachCloud:
    if t < 0:
        raise MalformedInput("horizon must be non-negative")
    if system_id == "unreduced" and cfg.mode == "uniform":
        return ReachCloud(system_id, t, _unreduced_uniform(system, t, cfg), cfg)
    ks = _draw_ks(system, cfg)
    if system_id == "adjoint":
        pts = _adjoint_points(system, t, cfg, ks)
    elif system_id == "reduced":
        pts = _reduced_points(system, t, cfg, ks)
    elif system_id == "unreduced":
        pts = _unreduced_emulate(system, t, cfg, ks)
    else:
        raise MalformedInput(f"unknown system id {system_id!r}")
    return ReachCloud(system_id, t, pts, cfg)


# ------------------------------------------------------------ distances


def bi_invariant_distance(g, h=None) -> float:
    """Length of the shortest geodesic from h (default 1) to g: |log(h^-1 g)|_F."""
    g = as_matc(g)
    M = g if h is None else dagger(as_matc(h)) @ g
    ph = unitary_phases(M)
    return float(np.sqrt(np.sum(ph ** 2)))


def coset_distance(g, h, system: SpinSystem) -> float:
    """min over k in K of |g - h k|_F (right coset h K).

    In the work frame K = SO(N) and the minimizer is the rotation closest to
    Re(h^H g); the distance is then evaluated directly rather than through
    the trace identity, which keeps it accurate near zero.
    """
    R = system.roots
    W = R.to_work(dagger(as_matc(h)) @ as_matc(g))
    k = _procrustes(W.real)
    return float(np.sqrt(np.sum(W.imag ** 2) + np.sum((W.real - k) ** 2)))


def left_coset_distance(g, h, system: SpinSystem) -> float:
    """min over k in K of |g - k h|_F."""
    return coset_distance(dagger(as_matc(g)), dagger(as_matc(h)), system)


def _procrustes(M):
    """The k in SO(N) maximizing tr(k^T M) for real M."""
    u, _, vh = np.linalg.svd(M)
    if np.linalg.det(u @ vh) < 0:
        u = u.copy()
        u[:, -1] = -u[:, -1]
    return u @ vh


def _su2_real(U):
    """(Re u0, Im u0, Re u1, Im u1) of the first rows of a stack of SU(2) matrices."""
    return np.stack([U[:, 0, 0].real, U[:, 0, 0].imag, U[:, 0, 1].real, U[:, 0, 1].imag], axis=1)


def pairwise_left_coset_su2(Us, As):
    """D[i, j] = min_k |Us[i] - k As[j]|_F for SU(2) stacks."""
    u = _su2_real(Us)
    a = _su2_real(As)
    P = u @ a.T
    # Re q with q = -u0 a1 + u1 a0 (entry (0, 1) of u a^H)
    J = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    Q = u @ J @ a.T
    m = np.sqrt(P * P + Q * Q)
    return np.sqrt(np.maximum(0.0, 4.0 - 4.0 * m))


@dataclass
class GapReport:
    t: float
    ladder: list
    max_a: list
    mean_a: list
    max_b: list
    mean_b: list

    @property
    def max_gap(self):
        return [max(a, b) for a, b in zip(self.max_a, self.max_b)]

    def strictly_decreasing(self):
        g = self.max_gap
        return all(x > y for x, y in zip(g, g[1:]))

    def to_json(self):
        return {"t": self.t, "ladder": self.ladder, "max_gap": self.max_gap,
                "max_a": self.max_a, "mean_a": self.mean_a,
                "max_b": self.max_b, "mean_b": self.mean_b,
                "strictly_decreasing": self.strictly_decreasing()}


def equivalence_gap(t, system: SpinSystem, cfg: ReachConfig = ReachConfig(), ladder=(10.0, 40.0, 160.0)) -> GapReport:
    """Sampled one-sided Hausdorff distances between unreduced and K-adjoint clouds.

    (a) unreduced endpoint to K . adjoint cloud, (b) adjoint endpoint to
    K . unreduced cloud, both with K acting on the left.
    """
    if system.name != "su2":
        raise DimensionCap("equivalence sweeps are only available for one spin")
    adj = sample_reach("adjoint", system, t, cfg).points
    rep = GapReport(float(t), [float(v) for v in ladder], [], [], [], [])
    for vm in ladder:
        un = sample_reach("unreduced", system, t, cfg.with_(v_max=float(vm))).points
        D = pairwise_left_coset_su2(un, adj)
        da = D.min(axis=1)
        db = D.min(axis=0)
        rep.max_a.append(float(da.max()))
        rep.mean_a.append(float(da.mean()))
        rep.max_b.append(float(db.max()))
        rep.mean_b.append(float(db.mean()))
    return rep


# ----------------------------------------------------------- t_inf search


def _su2_step(Ea, Eb, a, b):
    return Ea * a - Eb * np.conj(b), Ea * b + Eb * np.conj(a)


def t_inf_estimate(U_F, system: SpinSystem, cfg: ReachConfig = ReachConfig(), t_max=None) -> float:
    """Bisection on the horizon for the first time an adjoint sample meets U_F K.

    Controls are drawn once on a fixed budget horizon; a horizon t counts as a
    hit when some sample trajectory comes within eps of the coset at a grid
    time no later than t, so the hit test is monotone in t.
    """
    if system.name != "su2":
        raise DimensionCap("t_inf search is only available for one spin")
    U_F = as_matc(U_F)
    dt = cfg.dt
    eps = dt if cfg.eps is None else cfg.eps
    lam = float(abs(system.hd[0]))
    t_max = (np.pi / lam + 4 * dt) if t_max is None else t_max
    A, B = U_F[0, 0], U_F[0, 1]
    if coset_distance_su2(A, B, 1.0 + 0j, 0j) < eps:
        return 0.0
    ks = _draw_ks(system, cfg)
    X = ks @ system.H_d @ dagger(ks)                              # (n, m, 2, 2)
    E = _expm_ah(X * dt)
    Ea, Eb = E[..., 0, 0], E[..., 0, 1]
    n_steps = int(np.ceil(t_max / dt))
    per_piece = int(np.ceil(n_steps / cfg.n_switches))

    def hit(steps):
        a = np.ones(len(ks), dtype=np.complex128)
        b = np.zeros(len(ks), dtype=np.complex128)
        for m in range(1, steps + 1):
            j = min((m - 1) // per_piece, cfg.n_switches - 1)
            a, b = _su2_step(Ea[:, j], Eb[:, j], a, b)
            if np.any(coset_distance_su2(A, B, a, b) < eps):
                return True
        return False

    if not hit(n_steps):
        raise NotReached(f"coset not reached within t={t_max}")
    lo, hi = 0, n_steps
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hit(mid):
            hi = mid
        else:
            lo = mid
    return hi * dt
