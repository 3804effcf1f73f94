"""Finite-amplitude control clouds close in on the adjoint cloud as v_max grows."""
import numpy as np

from spinopt import kron as kr, reach, timeopt
from spinopt.matcore import expm_ah

system = timeopt.make_system("su2")
cfg = reach.ReachConfig(n_samples=2000, seed=1)
rep = reach.equivalence_gap(np.pi / 4, system, cfg, ladder=(10.0, 40.0, 160.0))
for v, g, m in zip(rep.ladder, rep.max_gap, rep.mean_a):
    print(f"v_max {v:6.0f}: max gap {g:.4f}, mean {m:.4f}")

t = reach.t_inf_estimate(expm_ah(np.pi / 4 * kr.IZ), system, cfg.with_(n_samples=256))
print(f"first hitting time for exp(pi/4 Iz): {t:.4f} (pi/4 = {np.pi / 4:.4f})")
