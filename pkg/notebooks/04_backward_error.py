"""
Certifying an approximate solution from its residual
====================================================

For 0 < p < 1 the distance from an iterate to the true solution is bounded by
theta ||R||, which is compared with the older nu* ||R||.
"""

# %%
import numpy as np

from nlmeq import backward_error_theta, solve_fixed_point
from nlmeq.solver import iterate
from nlmeq.experiments import example2_spec

spec = example2_spec()
X0 = 3 * spec.Q
X = solve_fixed_point(spec, X0=X0, tol=1e-14).X

for k, Xk in enumerate(iterate(spec, X0, 7), start=1):
    if k < 4:
        continue
    rep = backward_error_theta(Xk, spec)
    err = np.linalg.norm(Xk - X, 2)
    print(f"k={k}: error {err:.4e}  theta||R|| {rep.bound:.4e}  nu*||R|| {rep.legacy_nu_bound:.4e}")
