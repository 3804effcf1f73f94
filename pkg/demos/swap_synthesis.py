"""Synthesize SWAP on two coupled spins and compare hard and finite pulses."""
import numpy as np

from spinopt import kakdec, kron as kr, timeopt

system = timeopt.make_system("su4")          # drift with torus coordinates (1, 2, 4)
target = np.exp(-1j * np.pi / 4) * kr.swap_operator(2)

x = kakdec.pi_A(target)
print("torus coordinates of SWAP:", np.round(x, 6))

seq = timeopt.synthesize(target, system)
print(f"minimal time {seq.total_time:.6f}  (3 pi / 28 = {3 * np.pi / 28:.6f})")
for s in seq.segments:
    kind = "pulse" if isinstance(s, timeopt.HardPulse) else f"drift {s.direction_index:2d} for {s.duration:.4f}"
    print("  ", kind)

end = timeopt.simulate(seq, system).endpoint
print("endpoint error with hard pulses:", f"{np.linalg.norm(end - target):.2e}")
for v in (1e2, 1e3, 1e4):
    r = timeopt.simulate(seq, system, v_max=v)
    print(f"v_max {v:8.0f}: error {np.linalg.norm(r.endpoint - target):.2e}, clock {r.duration:.4f}")
