import json

import numpy as np
import pytest

from spinopt import cartan, kakdec, lp
from spinopt import kron as kr
from spinopt import timeopt as to
from spinopt.errors import DimensionCap, MalformedInput, NonGenericSystem, NotUnitary
from spinopt.matcore import expm_ah, haar_unitary

SWAP = np.exp(-1j * np.pi / 4) * kr.swap_operator(2)


def test_default_systems(su2, su4):
    assert np.allclose(su2.H_d, kr.IZ)
    assert len(su4.orbit) == 24 and su4.N == 4
    assert len(su4.H_js) == 4


def test_non_generic_drift():
    with pytest.raises(NonGenericSystem):
        to.make_system("su4", [1.0, 1.0, 3.0])
    with pytest.raises(MalformedInput):
        to.make_system("su4", [1.0, 2.0])
    with pytest.raises(DimensionCap):
        to.make_system("su8")


def test_system_from_drift(su4):
    s = to.system_from_drift("su4", su4.H_d)
    assert np.allclose(s.hd, [1, 2, 4])
    with pytest.raises(NonGenericSystem):
        to.system_from_drift("su4", kr.single_spin("Ix", 0, 2))


def test_alpha_frozen_values(su2, su4):
    # values from the independent simplex route, matching 3 pi / 28 and pi / 16
    assert to.alpha_star(kakdec.pi_A(SWAP), su4.orbit).alpha == pytest.approx(3 * np.pi / 28, abs=1e-12)
    assert to.alpha_star([np.pi / 4, 0, 0], su4.orbit).alpha == pytest.approx(np.pi / 16, abs=1e-12)
    assert to.alpha_star([np.pi / 4], su2.orbit).alpha == pytest.approx(np.pi / 4)
    a = to.alpha_star([0.0, 0.0, 0.0], su4.orbit)
    assert a.alpha == 0.0 and a.betas[0] == 1.0


def test_alpha_matches_simplex(rng, su4):
    P = su4.orbit.points
    for _ in range(30):
        x = kakdec.pi_A(haar_unitary(4, rng))
        a = to.alpha_star(x, su4.orbit)
        assert a.alpha == pytest.approx(lp.simplex(np.ones(len(P)), P.T, x).sum(), abs=1e-10)


def test_su2_closed_form(rng, su2):
    for _ in range(30):
        U = haar_unitary(2, rng)
        a = to.alpha_star(kakdec.pi_A(U), su2.orbit).alpha
        assert a == pytest.approx(to.alpha_su2_closed_form(U), abs=1e-9)
    assert to.alpha_su2_closed_form(expm_ah(np.pi / 4 * kr.IZ)) == pytest.approx(np.pi / 4)
    assert to.alpha_su2_closed_form(expm_ah(0.8 * kr.IX)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ["su2", "su4"])
def test_synthesize_reaches_target(rng, name, su2, su4):
    sys = su2 if name == "su2" else su4
    for _ in range(10):
        U = haar_unitary(sys.N, rng)
        seq = to.synthesize(U, sys)
        res = to.simulate(seq, sys)
        assert np.linalg.norm(res.endpoint - U) < 1e-8
        rep = to.verify(seq, U, sys)
        assert rep.certificate and rep.total_time == pytest.approx(rep.alpha_star, abs=1e-10)


def test_synthesize_identity_and_k(su4, rng):
    assert to.synthesize(np.eye(4), su4).segments == ()
    k = cartan.random_k(su4.pair, rng)
    seq = to.synthesize(k, su4)
    assert seq.total_time == pytest.approx(0.0, abs=1e-9)


def test_expand_unreduced(rng, su4):
    U = haar_unitary(4, rng)
    seq = to.synthesize(U, su4)
    ex = to.expand_unreduced(seq, su4)
    j0 = to._hd_index(su4)
    for s in ex.segments:
        if isinstance(s, to.Drift):
            assert s.direction_index == j0 and np.allclose(s.k, np.eye(4))
    assert np.linalg.norm(to.simulate(ex, su4).endpoint - U) < 1e-8
    assert ex.total_time == pytest.approx(seq.total_time)


def test_finite_amplitude_converges(rng, su4):
    U = haar_unitary(4, rng)
    seq = to.synthesize(U, su4)
    errs = [np.linalg.norm(to.simulate(seq, su4, v_max=v).endpoint - U) for v in (1e2, 1e3, 1e4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_euler_and_kron_factor(rng, su4):
    for _ in range(20):
        A = haar_unitary(2, rng)
        a, b, c = to.euler_xyx(A)
        R = expm_ah(a * kr.IX) @ expm_ah(b * kr.IY) @ expm_ah(c * kr.IX)
        assert np.allclose(R, A, atol=1e-10)
        B = haar_unitary(2, rng)
        F, G = to.kron_factor(np.kron(A, B))
        assert np.allclose(np.kron(F, G), np.kron(A, B), atol=1e-10)


def test_pulse_schedule_su2(su2):
    k = expm_ah(0.4 * kr.IX)
    sch = to.pulse_schedule(k, su2, 10.0)
    assert len(sch) == 1 and sch[0][0] == pytest.approx(0.04)
    assert to.pulse_schedule(np.eye(2), su2, 10.0) == []


def test_simulate_trajectory(su2):
    seq = to.synthesize(expm_ah(np.pi / 4 * kr.IZ), su2)
    res = to.simulate(seq, su2, step=0.1)
    ts = [t for t, _ in res.trajectory]
    assert ts[0] == 0.0 and ts[-1] == pytest.approx(np.pi / 4)
    assert all(b > a for a, b in zip(ts, ts[1:]))
    assert np.allclose(res.trajectory[3][1], expm_ah(0.3 * kr.IZ))


def test_sequence_json_round_trip(rng, su4):
    seq = to.synthesize(haar_unitary(4, rng), su4)
    back = to.PulseSequence.from_json(json.loads(seq.dumps()))
    assert back.total_time == seq.total_time
    assert np.allclose(to.simulate(back, su4).endpoint, to.simulate(seq, su4).endpoint)
    with pytest.raises(MalformedInput):
        to.PulseSequence.from_json({"segments": [{"type": "wait"}]})
    with pytest.raises(MalformedInput):
        to.PulseSequence.from_json({"segments": [{"type": "drift", "direction_index": 0,
                                                  "k": {"dim": 1, "re": [1], "im": [0]},
                                                  "duration": -1}]})


def test_coset_distance_su2_closed_form(rng):
    for _ in range(20):
        U, V = haar_unitary(2, rng), haar_unitary(2, rng)
        d = to.coset_distance_su2(U[0, 0], U[0, 1], V[0, 0], V[0, 1])
        ss = np.linspace(0, 2 * np.pi, 20001)
        grid = min(np.linalg.norm(V - U @ expm_ah(s * kr.IX)) for s in ss[::20])
        assert d <= grid + 1e-9 and grid - d < 1e-2


def test_bruteforce_above_alpha(su2):
    U = expm_ah(0.6 * kr.IZ) @ expm_ah(0.3 * kr.IX)
    a = to.alpha_su2_closed_form(U)
    t = to.t_min_adjoint_bruteforce(U, su2)
    assert -2e-3 < t - a < 2e-3
    with pytest.raises(DimensionCap):
        to.t_min_adjoint_bruteforce(np.eye(4), to.make_system("su4"))
    with pytest.raises(NotUnitary):
        to.t_min_adjoint_bruteforce(2 * np.eye(2), su2)


def test_in_K(su4):
    assert su4.in_K(expm_ah(0.3 * kr.single_spin("Iy", 1, 2)))
    assert not su4.in_K(expm_ah(0.3 * kr.parse_elem("i·Iz⊗Iz").matrix))
