"""Single spin: LP minimal time against the closed form and a brute-force search."""
import numpy as np

from spinopt import kakdec, timeopt
from spinopt.matcore import haar_unitary

system = timeopt.make_system("su2")
rng = np.random.default_rng(3)
print(" alpha_lp   closed     brute")
for _ in range(5):
    U = haar_unitary(2, rng)
    a = timeopt.alpha_star(kakdec.pi_A(U), system.orbit).alpha
    c = timeopt.alpha_su2_closed_form(U)
    b = timeopt.t_min_adjoint_bruteforce(U, system, dt=1e-3)
    print(f"{a:9.5f} {c:9.5f} {b:9.5f}")
