"""
How far does the solution move when A changes?
==============================================

For p > 1 the bound rho is relative and only needs ||A|| and lambda_min(Q).
For 0 < p < 1 the bound mu* uses the linearized operator at the solution.
"""

# %%
import numpy as np

from nlmeq import bound_mu_star, bound_rho, solve_fixed_point
from nlmeq.experiments import example1_spec, example3_spec, random_perturbation, trial_rng

spec = example3_spec()
X = solve_fixed_point(spec, tol=1e-13).X
for j in (4, 5, 6, 7):
    dA = random_perturbation(2, 10.0 ** -j, trial_rng(0, 0))
    Xt = solve_fixed_point(spec.perturbed(dA=dA), X0=X, tol=1e-13).X
    err = np.linalg.norm(Xt - X, 2) / np.linalg.norm(X, 2)
    print(f"j={j}: observed {err:.3e}  rho {bound_rho(spec, dA).bound:.3e}")

# %%
# The p < 1 case. con2 and con3 must both be positive for mu* to be certified.
spec = example1_spec()
X = solve_fixed_point(spec, tol=1e-13).X
for j in (4, 5, 6, 7):
    dA = random_perturbation(2, 10.0 ** -j, trial_rng(0, 0))
    rep = bound_mu_star(spec, X, dA=dA)
    Xt = solve_fixed_point(spec.perturbed(dA=dA), X0=X, tol=1e-13).X
    err = np.linalg.norm(Xt - X, 2) / np.linalg.norm(X, 2)
    print(f"j={j}: con2 {rep.con2:.5f} con3 {rep.con3:.4f} "
          f"observed {err:.3e} mu*/||X|| {rep.bound_rel:.3e}")
