"""
Condition number of the solution
================================

The closed form is compared with a finite-difference estimate that re-solves
the equation for random data perturbations, and with a probe along the
worst-case direction.
"""

# %%
from nlmeq import condition_number_real, fd_condition_estimate, fd_probe_direction, solve_fixed_point
from nlmeq.experiments import example4_spec

for k in (1, 3, 5, 7, 9):
    spec = example4_spec(k)
    X = solve_fixed_point(spec, tol=1e-13 * spec.q_max).X
    rep = condition_number_real(X, spec.A, spec.Q, spec.p)
    fd = fd_condition_estimate(spec, X=X, trials=20)
    probe = fd_probe_direction(spec, rep, X=X)
    print(f"k={k}: c_rel {rep.c_value:.5f}  random fd {fd:.5f}  worst-direction fd {probe:.5f}")

# %%
# X stays close to Q here and the linearized operator is close to the
# identity, so the relative condition number is close to 1 for every k.
