"""
Solving X - A^* X^{-p} A = Q
============================

The positive definite solution is the limit of the fixed-point iteration
X_n = Q + A^* X_{n-1}^{-p} A started from X_0 = Q.
"""

# %%
import numpy as np

from nlmeq import EquationSpec, alpha_beta_bounds, solve_fixed_point

A = np.array([[2.0, 0.95], [0.0, 1.0]])
A /= np.linalg.norm(A, 2)
spec = EquationSpec(A, 5 * np.eye(2), p=3.0)

report = solve_fixed_point(spec, tol=1e-13)
print(report.status, "after", report.iterations, "steps")
print(report.X)

# %%
# The residual falls geometrically.
for k, r in enumerate(report.residual_history[:6], start=1):
    print(f"step {k}: ||R|| = {r:.3e}")

# %%
# Scalar equations give an interval [beta, alpha] that contains the spectrum
# of the solution.
bounds = alpha_beta_bounds(spec)
print("beta, alpha =", bounds.beta, bounds.alpha)
print("eigenvalues =", np.linalg.eigvalsh(report.X))
