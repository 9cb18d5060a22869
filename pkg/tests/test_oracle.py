import random

import pytest

from braidtrace import oracle
from braidtrace.braid import BraidWord, parse_braid
from braidtrace.path_model import jones_value


def test_laurent_arithmetic():
    x = oracle.LaurentPolynomial.monomial(1)
    p = (x + oracle.LaurentPolynomial.monomial(-1)) * x
    assert p == oracle.LaurentPolynomial({2: 1, 0: 1})


def test_unknot():
    assert oracle.kauffman_jones(BraidWord(1)) == oracle.LaurentPolynomial({0: 1})


def test_hopf_against_path_model():
    b = parse_braid("1 1", 2)
    poly = oracle.kauffman_jones(b)
    for k in range(3, 9):
        assert abs(poly.at_root_of_unity(k) - jones_value(b, k)) < 1e-9


def test_oracle_limits():
    with pytest.raises(ValueError):
        oracle.kauffman_jones(BraidWord(oracle.MAX_ORACLE_STRANDS + 1))


def test_iter_braid_words_counts():
    assert sum(1 for _ in oracle.iter_braid_words(3, 2)) == 1 + 4 + 16


def test_report_records_violations():
    r = oracle.Report("x")
    r.record(1e-12, 1e-9, "small")
    assert r.ok
    r.record(1e-3, 1e-9, "large")
    assert not r.ok and r.checks == 2 and r.to_dict()["violations"][0].startswith("large")


def test_markov_invariance_small():
    rng = random.Random(1)
    rep = oracle.Report("markov")
    for _ in range(10):
        b = oracle.random_braid(3, 3, rng)
        oracle.invariance_suite(b, 6, rs=(2, 3), moves=3, rng=rng, report=rep)
    assert rep.ok, rep.violations
