import numpy as np
import pytest

from nlmeq.conditioning import (
    ConditionParams,
    assemble_condition_blocks,
    condition_number,
    condition_number_real,
    fd_condition_estimate,
    fd_probe_direction,
    linearized_response,
    top_direction,
)
from nlmeq.experiments import example4_spec
from nlmeq.solver import EquationSpec, check_contraction_condition, solve_fixed_point

from conftest import random_hpd


def _solve(spec):
    return solve_fixed_point(spec, tol=1e-14 * max(1.0, spec.q_max)).X


def test_params_validation_and_scaling():
    with pytest.raises(ValueError):
        ConditionParams(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ConditionParams(1.0, 0.0, 0.0)
    p = ConditionParams(1.0, 2.0, 3.0).scaled(2.0)
    assert (p.xi, p.eta, p.rho) == (2.0, 4.0, 6.0)


def test_zero_coefficient_blocks():
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    b = assemble_condition_blocks(Q, np.zeros((2, 2)), 2.0)
    np.testing.assert_allclose(b["S"], np.eye(4), atol=1e-15)
    for k in ("Sigma", "U1", "Omega1", "U2", "Omega2", "Uc"):
        assert not np.any(b[k])
    # X = Q, so relative conditioning is ||Q||_F / ||X||_F = 1
    for f in (condition_number, condition_number_real):
        assert f(Q, np.zeros((2, 2)), Q, 2.0).c_value == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("a,q,p", [(0.5, 1.0, 2.0), (-0.8, 3.0, 3.0), (1.2, 2.0, 1.5)])
def test_scalar_closed_form(a, q, p):
    spec = EquationSpec(np.array([[a]]), np.array([[q]]), p)
    x = _solve(spec)[0, 0]
    # implicit differentiation of x - a^2 x^{-p} = q
    v = 1 + p * a * a * x ** (-p - 1)
    dq, da = 1 / v, 2 * a * x ** -p / v
    params = ConditionParams(2.0, 3.0, 5.0)
    expected = np.hypot(params.rho * dq, params.eta * da) / params.xi
    rep = condition_number_real(np.array([[x]]), spec.A, spec.Q, p, params)
    assert rep.c_value == pytest.approx(expected, rel=1e-12)
    # complex data directions only add an imaginary part of A; at n = 1 it
    # does not move x to first order, so both paths agree
    assert condition_number(np.array([[x]]), spec.A, spec.Q, p, params).c_value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
def test_real_and_complex_paths_agree_on_example4(k):
    spec = example4_spec(k)
    X = _solve(spec)
    cr = condition_number_real(X, spec.A, spec.Q, spec.p).c_value
    cc = condition_number(X, spec.A, spec.Q, spec.p).c_value
    assert cr == pytest.approx(cc, rel=1e-10)


def test_real_path_rejects_complex():
    with pytest.raises(ValueError):
        condition_number_real(np.eye(2), 1j * np.eye(2), np.eye(2), 2.0)


def test_solution_solved_when_missing():
    spec = example4_spec(3)
    c1 = condition_number(None, spec.A, spec.Q, spec.p).c_value
    c2 = condition_number(_solve(spec), spec.A, spec.Q, spec.p).c_value
    assert c1 == pytest.approx(c2, rel=1e-10)


def test_complex_block_structure():
    rng = np.random.default_rng(5)
    X = random_hpd(rng, 3)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = assemble_condition_blocks(X, A, 2.5)
    m = 9
    Sc, Uc = b["Sc"], b["Uc"]
    np.testing.assert_array_equal(Sc[:m, :m], Sc[m:, m:])
    np.testing.assert_array_equal(Sc[:m, m:], -Sc[m:, :m])
    np.testing.assert_allclose(Uc[:m, :m] + Uc[m:, m:], 2 * b["U1"], atol=1e-14)
    np.testing.assert_allclose(Uc[m:, :m] + Uc[:m, m:], 2 * b["Omega2"], atol=1e-14)
    Vinv = np.linalg.inv(b["V"])
    np.testing.assert_allclose(b["S"] + 1j * b["Sigma"], Vinv, atol=1e-13)


def test_scaling_invariance():
    spec = example4_spec(5)
    X = _solve(spec)
    base = ConditionParams.relative(X, spec.A, spec.Q)
    c0 = condition_number(X, spec.A, spec.Q, spec.p, base).c_value
    for t in (1e-3, 7.0, 1e4):
        ct = condition_number(X, spec.A, spec.Q, spec.p, base.scaled(t)).c_value
        assert ct == pytest.approx(c0, rel=1e-12)


def test_top_direction_attains_linearized_norm():
    rng = np.random.default_rng(9)
    Q = random_hpd(rng, 2, lo=2, hi=4)
    A = 0.5 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    spec = EquationSpec(A, Q, 2.0)
    X = _solve(spec)
    rep = condition_number(X, A, Q, 2.0)
    E, H = top_direction(rep, 2)
    nrm = np.sqrt(np.linalg.norm(E) ** 2 + np.linalg.norm(H) ** 2)
    assert nrm == pytest.approx(1.0, rel=1e-12)
    assert linearized_response(X, A, 2.0, E, H, rep.params) == pytest.approx(rep.c_value, rel=1e-10)


def _random_spec(rng, cplx):
    n = int(rng.integers(2, 4))
    Q = random_hpd(rng, n, lo=1.5, hi=4.0, complex_=cplx)
    A = rng.standard_normal((n, n))
    if cplx:
        A = A + 1j * rng.standard_normal((n, n))
    p = rng.uniform(1.2, 3.5)
    A *= rng.uniform(0.2, 0.9) * np.sqrt(np.linalg.eigvalsh(Q)[0] ** (p + 1) / p) / np.linalg.norm(A, 2)
    return EquationSpec(A, Q, p)


@pytest.mark.parametrize("cplx", [False, True])
def test_fd_estimate_dominated(cplx):
    rng = np.random.default_rng(31 + cplx)
    for _ in range(8):
        spec = _random_spec(rng, cplx)
        assert check_contraction_condition(spec)
        X = _solve(spec)
        c = (condition_number(X, spec.A, spec.Q, spec.p) if cplx
             else condition_number_real(X, spec.A, spec.Q, spec.p)).c_value
        est, skipped = fd_condition_estimate(spec, X=X, trials=10, return_skipped=True)
        assert skipped == 0
        assert est <= c * (1 + 1e-5)


@pytest.mark.parametrize("cplx", [False, True])
def test_fd_probe_sharp(cplx):
    rng = np.random.default_rng(77 + cplx)
    for _ in range(5):
        spec = _random_spec(rng, cplx)
        X = _solve(spec)
        rep = (condition_number(X, spec.A, spec.Q, spec.p) if cplx
               else condition_number_real(X, spec.A, spec.Q, spec.p))
        r = fd_probe_direction(spec, rep, X=X)
        assert 0.95 * rep.c_value <= r <= rep.c_value * (1 + 1e-5)


@pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
def test_example4_fd_dominance_and_sharpness(k):
    spec = example4_spec(k)
    X = _solve(spec)
    rep = condition_number_real(X, spec.A, spec.Q, spec.p)
    est = fd_condition_estimate(spec, X=X, trials=20)
    assert est <= rep.c_value * (1 + 1e-2)
    assert fd_probe_direction(spec, rep, X=X) >= 0.95 * rep.c_value


def test_fd_zero_coefficient_is_identity_response():
    # X = Q, so ΔX = ΔQ; with unit weights and A frozen the ratio is 1
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    spec = EquationSpec(np.zeros((2, 2)), Q, 2.0)
    params = ConditionParams(1.0, 0.0, 1.0)
    rep = condition_number_real(Q, spec.A, Q, 2.0, params)
    assert rep.c_value == pytest.approx(1.0, rel=1e-14)
    assert fd_probe_direction(spec, rep, X=Q) == pytest.approx(1.0, rel=1e-6)
    assert fd_condition_estimate(spec, params, trials=5) <= 1.0 + 1e-6
