"""Command line interface.

Exit codes: 0 success, 2 a theorem's hypotheses fail or the input is outside
the routine's regime, 3 the iteration did not converge, 4 I/O error or
malformed matrix file.
"""

import argparse
import json
import sys

import numpy as np

from . import experiments
from .backward import backward_error_theta
from .conditioning import ConditionParams, condition_number, condition_number_real
from .io import MatrixFileError, matrix_to_dict, read_matrix
from .linalg import NotPositiveDefiniteError, RegimeError, SingularOperatorError
from .perturbation import bound_mu_star, bound_rho
from .solver import EquationSpec, check_contraction_condition, solve_fixed_point

EXIT_OK = 0
EXIT_CONDITION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _spec(args):
    A = read_matrix(args.A)
    Q = read_matrix(args.Q)
    try:
        return EquationSpec(A, Q, args.p, symmetrize=not args.no_symmetrize)
    except NotPositiveDefiniteError as exc:
        raise _Fail(EXIT_CONDITION, str(exc))
    except ValueError as exc:
        raise _Fail(EXIT_IO, str(exc))


def _start(spec, policy):
    if policy in (None, "Q"):
        return spec.Q.copy()
    if policy == "lambda_min":
        return spec.q_min * np.eye(spec.n)
    try:
        c = float(policy)
    except ValueError:
        raise _Fail(EXIT_IO, f"--x0 must be 'Q', 'lambda_min' or a positive number, got {policy!r}")
    if not c > 0:
        raise _Fail(EXIT_IO, "--x0 multiplier must be positive")
    return c * spec.Q


def _emit(payload, out):
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solved(spec, tol):
    sol = solve_fixed_point(spec, tol=tol)
    if not sol.converged:
        raise _Fail(EXIT_NO_CONVERGENCE, f"iteration ended with status {sol.status}")
    return sol.X


def cmd_solve(args):
    spec = _spec(args)
    sol = solve_fixed_point(spec, X0=_start(spec, args.x0), tol=args.tol, max_iter=args.max_iter)
    _emit({
        "X": matrix_to_dict(sol.X),
        "iterations": sol.iterations,
        "residual_history": sol.residual_history.tolist(),
        "status": sol.status,
    }, args.out)
    return EXIT_OK if sol.converged else EXIT_NO_CONVERGENCE


def cmd_perturb(args):
    spec = _spec(args)
    dA = read_matrix(args.dA) if args.dA else np.zeros((spec.n, spec.n))
    dQ = read_matrix(args.dQ) if args.dQ else None
    if spec.p > 1:
        if dQ is not None:
            raise _Fail(EXIT_CONDITION, "the p > 1 bound covers perturbations of A only")
        rep = bound_rho(spec, dA)
        payload = {"regime": rep.regime, "rho": rep.bound, "conditions_hold": rep.conditions_hold}
    elif spec.p < 1:
        X = _solved(spec, 1e-13)
        rep = bound_mu_star(spec, X, dA=dA, dQ=dQ)
        s = rep.scalars
        payload = {"regime": rep.regime, "mu_star": rep.bound, "mu_star_rel": rep.bound_rel,
                   "conditions_hold": rep.conditions_hold, "con2": rep.con2, "con3": rep.con3,
                   "l": s.l, "zeta": s.zeta, "xi": s.xi, "n": s.n_norm, "eta": s.eta,
                   "eps": s.eps, "sigma": s.sigma}
    else:
        raise _Fail(EXIT_CONDITION, "perturbation bounds are defined for p > 1 or 0 < p < 1")
    _emit(payload, args.out)
    return EXIT_OK if rep.conditions_hold else EXIT_CONDITION


def cmd_condnum(args):
    spec = _spec(args)
    if not spec.p > 1:
        raise _Fail(EXIT_CONDITION, "condition numbers are defined for p > 1")
    if not check_contraction_condition(spec):
        raise _Fail(EXIT_CONDITION, "p||A||^2 < lambda_min(Q)^(p+1) does not hold")
    X = _solved(spec, 1e-13 * max(1.0, spec.q_max))
    params = (ConditionParams.absolute() if args.absolute
              else ConditionParams.relative(X, spec.A, spec.Q))
    if spec.is_real and not args.complex_path:
        rep = condition_number_real(X, spec.A, spec.Q, spec.p, params)
    else:
        rep = condition_number(X, spec.A, spec.Q, spec.p, params)
    _emit({"c": rep.c_value, "case": rep.case, "xi": params.xi, "eta": params.eta,
           "rho": params.rho}, args.out)
    return EXIT_OK


def cmd_backward(args):
    spec = _spec(args)
    Xt = read_matrix(args.X)
    rep = backward_error_theta(Xt, spec, contraction=args.contraction)
    _emit({"residual_norm": rep.residual_norm, "theta1": rep.theta1, "theta": rep.theta,
           "bound": rep.bound, "legacy_nu_bound": rep.legacy_nu_bound,
           "applicable": rep.applicable, "legacy_applicable": rep.legacy_applicable}, args.out)
    return EXIT_OK if rep.applicable else EXIT_CONDITION


def cmd_example(args):
    values = [int(v) for v in args.values.split(",")] if args.values else None
    cfg = experiments.ExperimentConfig(
        example_id=args.id, values=values, trials=args.trials, seed=args.seed,
        fmt=args.format, tol=args.tol, reference=args.reference,
        contraction=args.contraction)
    rows = experiments.run_example(cfg)
    text = experiments.format_table(rows, experiments.COLUMNS[args.id], args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_CONDITION if any(r["flags"] for r in rows) else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="nlmeq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def equation_args(sp):
        sp.add_argument("A", help="matrix file for A")
        sp.add_argument("Q", help="matrix file for Q")
        sp.add_argument("--p", type=float, required=True, help="exponent p > 0")
        sp.add_argument("--no-symmetrize", action="store_true",
                        help="keep Q exactly as given instead of its Hermitian part")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("solve", help="solve by fixed-point iteration")
    equation_args(sp)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.add_argument("--x0", default="Q", help="'Q', 'lambda_min', or a multiplier c for X0 = cQ")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("perturb", help="perturbation bound for given dA (and dQ)")
    equation_args(sp)
    sp.add_argument("--dA", help="matrix file for the perturbation of A")
    sp.add_argument("--dQ", help="matrix file for the perturbation of Q (0 < p < 1 only)")
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("condnum", help="condition number of the solution (p > 1)")
    equation_args(sp)
    sp.add_argument("--absolute", action="store_true", help="unit weights instead of relative")
    sp.add_argument("--complex-path", action="store_true",
                    help="use the complex 2n^2 split even for real data")
    sp.set_defaults(func=cmd_condnum)

    sp = sub.add_parser("backward", help="error bound for an approximate solution (0 < p < 1)")
    equation_args(sp)
    sp.add_argument("--X", required=True, help="matrix file with the approximate solution")
    sp.add_argument("--contraction", choices=("stated", "proof"), default="stated")
    sp.set_defaults(func=cmd_backward)

    sp = sub.add_parser("example", help="reproduce one of the numerical examples")
    sp.add_argument("id", type=int, choices=(1, 2, 3, 4))
    sp.add_argument("--values", help="comma-separated j (examples 1, 3) or k (2, 4) values")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    sp.add_argument("--reference", choices=("stopping", "deep"), default="stopping")
    sp.add_argument("--contraction", choices=("stated", "proof"), default="stated")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_example)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MatrixFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RegimeError, NotPositiveDefiniteError, SingularOperatorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITION


if __name__ == "__main__":
    sys.exit(main())
