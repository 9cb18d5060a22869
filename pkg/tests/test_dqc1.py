import warnings

import numpy as np
import pytest

from braidtrace import dqc1
from braidtrace.braid import parse_braid
from braidtrace.jones_wenzl import homfly_value
from braidtrace.path_model import jones_value

TREFOIL = parse_braid("1 1 1", 2)
FIG8 = parse_braid("1 -2 1 -2", 3)


def test_default_beta():
    assert dqc1.default_beta(2) == 4
    assert dqc1.default_beta(16) == 7
    assert dqc1.default_beta(17) == 8


def test_precision_warning():
    with pytest.warns(dqc1.PrecisionWarning):
        dqc1.check_precision(4, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        dqc1.check_precision(4, 6)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv(dqc1.THREADS_ENV, "3")
    assert dqc1.thread_count() == 3
    assert dqc1.thread_count(2) == 2
    monkeypatch.setenv(dqc1.THREADS_ENV, "zero")
    with pytest.raises(ValueError):
        dqc1.thread_count()


@pytest.mark.parametrize("b", [TREFOIL, FIG8], ids=["trefoil", "fig8"])
def test_exact_mode_close_to_jones(b):
    est = dqc1.estimate_jones(b, 5, 6, mode="exact")
    assert abs(est.value - jones_value(b, 5)) <= est.systematic_bound + 1e-12
    assert est.std_error == 0


def test_monte_carlo_close_to_exact_mode():
    exact = dqc1.estimate_jones(FIG8, 5, 6, mode="exact").value
    for mode in ("monte_carlo", "shots"):
        est = dqc1.estimate_jones(FIG8, 5, 6, 20000, dqc1.RngConfig(11), mode=mode)
        assert abs(est.value - exact) < 5 * est.std_error


def test_homfly_exact_mode():
    b = parse_braid("1 1 1", 2)
    est = dqc1.estimate_homfly(b, 6, 3, 5, mode="exact")
    assert abs(est.value - homfly_value(b, 6, 3)) <= est.systematic_bound + 1e-12


def test_seeded_runs_repeat_and_ignore_threads():
    a = dqc1.estimate_jones(FIG8, 5, 6, 10000, dqc1.RngConfig(5), threads=1)
    b = dqc1.estimate_jones(FIG8, 5, 6, 10000, dqc1.RngConfig(5), threads=3)
    c = dqc1.estimate_jones(FIG8, 5, 6, 10000, dqc1.RngConfig(6), threads=1)
    assert a.to_json() == b.to_json()
    assert a.value != c.value


def test_json_schema():
    out = dqc1.estimate_jones(TREFOIL, 5, 6, 100, dqc1.RngConfig(1)).to_json()
    assert list(out) == ["value", "std_error", "systematic_bound", "samples", "mode",
                         "prefactor", "markov_trace", "seed"]
    assert set(out["value"]) == {"re", "im"}


def test_sector_sampling():
    rng = np.random.default_rng(0)
    probs = dqc1.sector_probabilities_h(4, 5)
    draws = [dqc1.sample_sector_h(4, 5, rng) for _ in range(2000)]
    assert abs(draws.count(3) / 2000 - probs[3]) < 0.05
    lam = dqc1.sample_sector_lambda(4, 6, 3, rng)
    assert lam.n == 4


@pytest.mark.parametrize("kwargs", [dict(k=2), dict(k=5, beta=0), dict(k=5, samples=0), dict(k=5, mode="x")])
def test_validation(kwargs):
    with pytest.raises(ValueError):
        dqc1.estimate_jones(TREFOIL, **kwargs)


def test_homfly_rejects_bad_r():
    with pytest.raises(ValueError):
        dqc1.estimate_homfly(TREFOIL, 4, 4)
