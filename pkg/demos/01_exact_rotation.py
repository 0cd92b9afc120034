# Exact-rotation sanity check: with no perturbation at all, composing N
# steps of the 1/N rotation returns to the identity map, and the partial
# compositions trace the geometric sums T_k = (1 - rho^k)/(1 - rho).
import numpy as np

from parimplode import TheoremA, closed_form_T_array, materialize, run_point, run_recurrences

for N in (10, 100, 1000, 10000):
    point = run_point(TheoremA(1, amplitude=0.0), N)
    print(f"N={N:6d}  coeff_err={point.coeff_err:.3e}  "
          f"(budget 1e-9*N = {1e-9 * N:.0e})  wronskian={point.wronskian_resid:.3e}")

# the whole orbit, not just the endpoint: q_k follows T_k step for step
N = 256
triple = run_recurrences(materialize(TheoremA(1, amplitude=0.0), N))
T = closed_form_T_array(N)
dev = np.max(np.abs(triple.q - T))
print(f"\norbit vs closed form at N={N}: max |q_k - T_k| = {dev:.3e}")
print(f"checkpoints: q_N = {triple.q[N]:.3e} (exact limit 0), "
      f"q_N+1 = {triple.q[N + 1]:.6f} (exact limit 1)")
