"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""
import time

import numpy as np

from cli_suite import run_twice
from conftest import ACCEPTANCE_LINES
from kron_suite import run_suite
from spinopt import cartan, kakdec, lp, pmp, reach
from spinopt import kron as kr
from spinopt import timeopt as to
from spinopt.matcore import dagger, expm_ah, haar_unitary


def report(num, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {num} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_kronecker_identities():
    t0 = time.perf_counter()
    worst = run_suite(500, seed=2024)
    dt = time.perf_counter() - t0
    w = max(worst.values())
    report(1, "kronecker identities", w <= 1e-11 and dt < 5.0,
           f"12 checks x 500 instances, worst {w:.2e}, {dt:.2f} s")


def test_2_symmetric_pair():
    r = [cartan.check_symmetric_pair(n) for n in (1, 2, 3)]
    ok = (r[0].symmetric and r[1].symmetric and not r[2].symmetric
          and r[2].witness is not None and r[2].p_component_norm > 0.1)
    # the hand-picked pair Ix⊗Iy⊗Iz, i·Iy⊗Iy⊗1 is a second witness
    pair = cartan.weight_pair(3)
    a = kr.parse_elem("Ix⊗Iy⊗Iz").matrix
    b = kr.parse_elem("i·Iy⊗Iy⊗1").matrix
    pn = np.linalg.norm(cartan.cartan_split(kr.comm(a, b), pair)[1])
    ok = ok and pn > 0.1
    report(2, "symmetric pair", ok,
           f"n=1 {r[0].symmetric}, n=2 {r[1].symmetric}, n=3 {r[2].symmetric} "
           f"witness {r[2].witness} p-norm {r[2].p_component_norm:.3f}, second witness {pn:.3f}")


def test_3_kostant_convexity():
    t0 = time.perf_counter()
    a = cartan.kostant_sample([1.0], cartan.su2_pair(), cartan.su2_roots(), 10_000, seed=31)
    b = cartan.kostant_sample([1.0, 2.0, 4.0], cartan.weight_pair(2), cartan.su4_roots(),
                              10_000, seed=32)
    dt = time.perf_counter() - t0
    ok = a.n_outside == 0 and b.n_outside == 0 and dt < 30.0
    report(3, "kostant convexity", ok,
           f"su2 outside {a.n_outside} (max {a.max_violation:.1e}), su4 outside {b.n_outside} "
           f"(max {b.max_violation:.1e}), {dt:.1f} s")


def test_4_kak_round_trip(su4):
    rng = np.random.default_rng(41)
    worst, outside = 0.0, 0
    for _ in range(1000):
        g = haar_unitary(4, rng)
        r = kakdec.kak(g)
        worst = max(worst, np.linalg.norm(r.k1 @ r.a @ r.k2 - g))
        outside += not su4.cell.contains(r.x_log)
    R = su4.roots
    fp = 0.0
    for _ in range(500):
        x = kakdec.fold_to_cell(rng.uniform(-4, 4, 3), su4.cell).x_folded
        n = rng.integers(-2, 3, size=4)
        n[-1] = -n[:3].sum()
        y = R.coords_from_theta((R.theta(x) + np.pi * n)[rng.permutation(4)])
        fp = max(fp, np.max(np.abs(kakdec.fold_to_cell(y, su4.cell).x_folded - x)))
    ok = worst <= 1e-8 and outside == 0 and fp <= 1e-8
    report(4, "kak round trip", ok,
           f"1000 SU(4) worst {worst:.1e}, outside cell {outside}, fixed-point drift {fp:.1e}")


def test_5_su2_optimality(su2):
    rng = np.random.default_rng(51)
    dt = 1e-3
    t0 = time.perf_counter()
    da, lo, hi = 0.0, np.inf, -np.inf
    for _ in range(50):
        U = haar_unitary(2, rng)
        a = to.alpha_star(kakdec.pi_A(U), su2.orbit).alpha
        da = max(da, abs(a - to.alpha_su2_closed_form(U)))
        tb = to.t_min_adjoint_bruteforce(U, su2, n_dirs=64, dt=dt)
        lo, hi = min(lo, tb - a), max(hi, tb - a)
    el = time.perf_counter() - t0
    ok = da <= 1e-9 and hi < 2 * dt and el < 120.0
    report(5, "su2 optimality", ok,
           f"alpha vs closed form {da:.1e}, brute force minus alpha in [{lo:.1e}, {hi:.1e}], "
           f"{el:.1f} s")


def test_6_su4_end_to_end(su4):
    rng = np.random.default_rng(61)
    P = su4.orbit.points
    e_end, e_time, e_lp = 0.0, 0.0, 0.0
    for _ in range(100):
        U = haar_unitary(4, rng)
        seq = to.synthesize(U, su4)
        e_end = max(e_end, np.linalg.norm(to.simulate(seq, su4).endpoint - U))
        x = kakdec.pi_A(U)
        a = to.alpha_star(x, su4.orbit).alpha
        e_time = max(e_time, abs(seq.total_time - a))
        e_lp = max(e_lp, abs(a - lp.simplex(np.ones(len(P)), P.T, x).sum()))
    ok = e_end <= 1e-8 and e_time <= 1e-10 and e_lp <= 1e-10
    report(6, "su4 end to end", ok,
           f"endpoint {e_end:.1e}, time vs alpha {e_time:.1e}, enumeration vs simplex {e_lp:.1e}")


def test_7_pmp_family():
    pair = cartan.weight_pair(2)
    R = cartan.su4_roots()
    H_d = R.h_matrix([1.0, 2.0, 4.0])
    rng = np.random.default_rng(71)
    k = cartan.random_k(pair, rng)
    p = pmp.ExtremalParams.make(k @ H_d @ dagger(k),
                                cartan.random_k_element(pair, rng, radius=2.0), pair, H_d)
    ts = np.linspace(0.0, 2 * np.pi, 65)
    g, X, u = pmp.extremal_traj(p, ts)
    ode = max(max(pmp.ode_residuals(p, t, h=1e-4)) for t in ts)
    ext = max(pmp.extremality_residual(X[i], u[i], pair) for i in range(len(ts)))
    Hs = [pmp.hamiltonian(X[i], u[i]) for i in range(len(ts))]
    drift = max(Hs) - min(Hs)
    tf = [pmp.double_int_optimal(pmp.DoubleIntState(s, 0.0)).t_F for s in (1.0, -1.0)]
    ok = ode <= 1e-6 and ext <= 1e-9 and drift <= 1e-8 and tf == [2.0, 2.0]
    report(7, "pmp extremals", ok,
           f"ode {ode:.1e}, extremality {ext:.1e}, hamiltonian drift {drift:.1e}, "
           f"double integrator t_F {tf}")


def test_8_equivalence_trend(su2):
    cfg = reach.ReachConfig(n_samples=5000, seed=81)
    rep = reach.equivalence_gap(np.pi / 4, su2, cfg, ladder=(10.0, 40.0, 160.0))
    dt = 1e-3
    t = reach.t_inf_estimate(expm_ah(np.pi / 4 * kr.IZ), su2, cfg.with_(n_samples=256, dt=dt))
    ok = rep.strictly_decreasing() and abs(t - np.pi / 4) <= 2 * dt
    report(8, "equivalence trend", ok,
           f"max gap {[round(g, 4) for g in rep.max_gap]}, t_inf {t:.4f} vs {np.pi / 4:.4f}")


def test_9_cli_determinism(tmp_path):
    res = run_twice(tmp_path)
    bad = [c for c, same, code in res if not same or code != 0]
    report(9, "cli determinism", not bad,
           f"{len(res)} invocations byte-identical, failures {bad}")
