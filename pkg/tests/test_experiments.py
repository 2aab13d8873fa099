import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlmeq.experiments import (
    COLUMNS,
    ExperimentConfig,
    format_table,
    geometric_mean,
    random_perturbation,
    render,
    run_example,
    trial_rng,
)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.floats(1e-12, 1e3), st.integers(0, 2 ** 31), st.integers(0, 100))
def test_random_perturbation_norm_and_symmetry(n, mag, seed, trial):
    E = random_perturbation(n, mag, trial_rng(seed, trial))
    np.testing.assert_array_equal(E, E.T)
    assert np.linalg.norm(E, 2) == pytest.approx(mag, rel=1e-12)


def test_random_perturbation_zero_and_negative():
    np.testing.assert_array_equal(random_perturbation(3, 0.0, trial_rng(0, 0)), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        random_perturbation(3, -1.0, trial_rng(0, 0))


def test_trial_streams_deterministic_and_distinct():
    a = random_perturbation(2, 1.0, trial_rng(42, 3))
    b = random_perturbation(2, 1.0, trial_rng(42, 3))
    c = random_perturbation(2, 1.0, trial_rng(42, 4))
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_geometric_mean():
    assert geometric_mean([3.0] * 7) == pytest.approx(3.0, rel=1e-15)
    assert geometric_mean([1.0, 100.0]) == pytest.approx(10.0, rel=1e-15)
    assert geometric_mean([0.0, 5.0]) == 0.0


def test_config_validation():
    for bad in (dict(example_id=5), dict(example_id=1, trials=0),
                dict(example_id=1, fmt="xml"), dict(example_id=2, reference="x")):
        with pytest.raises(ValueError):
            ExperimentConfig(**bad)
    assert ExperimentConfig(4).values == [1, 3, 5, 7, 9]


def test_unperturbed_example1():
    rows = run_example(ExperimentConfig(1, values=[5], trials=1, scale=0.0))
    assert rows[0]["true_rel_err"] == 0.0
    assert rows[0]["mu_star_rel"] == 0.0
    assert rows[0]["flags"] == 0


def test_unperturbed_example3():
    rows = run_example(ExperimentConfig(3, values=[5], trials=1, scale=0.0))
    assert rows[0]["true_rel_err"] == 0.0 and rows[0]["rho"] == 0.0


@pytest.mark.parametrize("eid", [1, 2, 3, 4])
def test_rows_have_columns_and_no_flags(eid):
    rows = run_example(ExperimentConfig(eid, trials=3))
    for r in rows:
        assert list(r) == COLUMNS[eid]
        assert r["flags"] == 0


def test_render_deterministic():
    cfg = dict(example_id=1, values=[6, 7], trials=4, seed=42)
    assert render(ExperimentConfig(**cfg)) == render(ExperimentConfig(**cfg))


def test_trial_results_independent_of_trial_count():
    # trial t always draws the same perturbation
    one = run_example(ExperimentConfig(3, values=[5], trials=1, seed=9))
    rows = run_example(ExperimentConfig(3, values=[5], trials=1, seed=9))
    assert one == rows


def test_csv_and_markdown_headers():
    rows = [dict(k=1, c_rel=1.5, flags=0)]
    csv_text = format_table(rows, COLUMNS[4], "csv")
    assert csv_text.splitlines() == ["k,c_rel,flags", "1,1.5000e+00,0"]
    md = format_table(rows, COLUMNS[4], "markdown").splitlines()
    assert md[0] == "| k | c_rel | flags |"
    assert md[2] == "| 1 | 1.5000e+00 | 0 |"
