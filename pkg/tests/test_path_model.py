import cmath
import math

import numpy as np
import pytest

from braidtrace import path_model as pm
from braidtrace.braid import BraidWord, parse_braid


@pytest.mark.parametrize("n,k", [(3, 5), (4, 5), (5, 6), (6, 8)])
def test_sector_sizes_sum_to_path_count(n, k):
    total = sum(pm.sector_size(n, k, h) for h in range(1, k))
    assert total == len([p for h in range(1, k) for p in pm.enumerate_paths(n, k, h)])


def test_paths_stay_on_ladder():
    for p in pm.enumerate_paths(5, 4, 2):
        assert all(1 <= a <= 3 for a in p.rungs)
        assert p.end == 2


def test_ladder_path_validation():
    with pytest.raises(ValueError):
        pm.LadderPath(3, (pm.DOWN,))


@pytest.mark.parametrize("k", range(3, 9))
def test_generators_unitary(k):
    for h in range(1, k):
        if not pm.sector_size(4, k, h):
            continue
        for i in range(1, 4):
            g = pm.generator_matrix(4, k, h, i)
            assert np.allclose(g @ g.conj().T, np.eye(len(g)), atol=1e-12)


def test_braid_relation():
    k, h = 7, 2
    s1, s2 = (pm.generator_matrix(4, k, h, i) for i in (1, 2))
    assert np.allclose(s1 @ s2 @ s1, s2 @ s1 @ s2, atol=1e-12)


def test_identity_trace_is_one():
    for n in range(1, 6):
        assert abs(pm.markov_trace_path(BraidWord(n), 6) - 1) < 1e-12


def test_unknot_and_trefoil():
    k = 5
    t = cmath.exp(2j * math.pi / k)
    assert abs(pm.jones_value(BraidWord(1), k) - 1) < 1e-12
    trefoil = parse_braid("1 1 1", 2)
    # left-handed trefoil in this convention: -t^-4 + t^-3 + t^-1
    expected = -t ** -4 + t ** -3 + t ** -1
    mirror = -t ** 4 + t ** 3 + t
    v = pm.jones_value(trefoil, k)
    assert min(abs(v - expected), abs(v - mirror)) < 1e-9


def test_invalid_k():
    with pytest.raises(ValueError):
        pm.jones_value(BraidWord(2, (1,)), 2)
