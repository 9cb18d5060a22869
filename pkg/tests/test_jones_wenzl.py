import math

import numpy as np
import pytest

from braidtrace import jones_wenzl as jw
from braidtrace.braid import BraidWord, parse_braid


def test_young_diagram_validation():
    with pytest.raises(ValueError):
        jw.YoungDiagram((1, 2))
    assert jw.YoungDiagram((3, 1)).n == 4


def test_tableau_validation():
    with pytest.raises(ValueError):
        jw.StandardTableau((2, 1))
    assert jw.StandardTableau((1, 2, 1)).shape == jw.YoungDiagram((2, 1))


@pytest.mark.parametrize("k,r", [(5, 2), (6, 3), (8, 3), (7, 4)])
def test_generators_unitary(k, r):
    for lam in jw.enumerate_diagrams(4, k, r):
        for i in range(1, 4):
            g = jw.jw_generator(lam, k, r, i)
            assert np.allclose(g @ g.conj().T, np.eye(len(g)), atol=1e-12)


def test_braid_relation_jw():
    lam = jw.YoungDiagram((2, 1, 1))
    s1, s2 = (jw.jw_generator(lam, 7, 3, i) for i in (1, 2))
    assert np.allclose(s1 @ s2 @ s1, s2 @ s1 @ s2, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_weights_normalize(n):
    for k, r in [(5, 2), (6, 3), (8, 4)]:
        total = sum(size * s for _, size, s, _ in jw.sector_distribution(n, k, r))
        assert abs(total - 1) < 1e-10


def test_identity_homfly_is_one():
    assert abs(jw.homfly_value(BraidWord(1), 6, 3) - 1) < 1e-12


def test_homfly_prefactor_two_strands():
    b = BraidWord(2)
    k, r = 7, 3
    expected = math.sin(math.pi * r / k) / math.sin(math.pi / k)
    assert abs(jw.homfly_prefactor(b, k, r) - expected) < 1e-12


def test_axial_distance():
    tab = jw.StandardTableau((1, 2, 1))
    # box 2 at (2,1), box 3 at (1,2): content difference
    assert abs(jw.axial_distance(tab, 2)) == 2


def test_trefoil_homfly_r3():
    assert abs(jw.homfly_value(parse_braid("1 1 1", 2), 6, 3) - (-2)) < 1e-9
