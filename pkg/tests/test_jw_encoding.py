from fractions import Fraction

import numpy as np
import pytest

from braidtrace import jones_wenzl as jw
from braidtrace import jw_encoding as je
from braidtrace.braid import parse_braid
from braidtrace.path_encoding import build_encoding_table
from braidtrace.state import diagonal_elements, registers_of

from _encoding_helpers import all_keys, check_crossing_elements

K, R, BETA = 6, 3, 3
DIAGRAMS = jw.enumerate_diagrams(4, K, R)


def _labels(table):
    keys = all_keys(table.n, table.beta)
    rows = je.decode_rows(registers_of(keys, table.n, table.beta), table)
    index = {t: j for j, t in enumerate(jw._tableau_rows(table.lam, table.k, table.r))}
    return keys, np.array([index[tuple(t)] for t in rows.tolist()])


def test_row_probabilities_sum_to_one():
    lam = jw.YoungDiagram((2, 1, 1))
    table = je.build_row_cutoffs(lam, K, R, BETA)
    for p, t in table.states():
        total = sum(je.row_probability(p, t, j, lam, k=K, r=R) for j in range(1, R + 1))
        assert total == 1
        assert table.interval(p, t, R)[1] == table.scale


@pytest.mark.parametrize("lam", DIAGRAMS, ids=str)
def test_decoding_covers_tableaux(lam):
    table = je.build_row_cutoffs(lam, K, R, BETA)
    _, labels = _labels(table)
    assert len(np.unique(labels)) == jw.tableau_count(lam, K, R)
    assert sum(je.decoded_distribution(table).values()) == 1
    assert je.rounding_distance(table) <= Fraction(2 * lam.n, 2 ** BETA)


@pytest.mark.parametrize("lam", DIAGRAMS, ids=str)
@pytest.mark.parametrize("sign", [1, -1])
def test_unstuck_matrix_elements(lam, sign):
    table = je.build_row_cutoffs(lam, K, R, BETA)
    kernel = je.jw_kernel(table)
    keys, labels = _labels(table)
    for i in range(1, lam.n):
        pi = jw.jw_generator(lam, K, R, i, sign)
        assert check_crossing_elements(kernel, keys, labels, pi, i, sign) < 1e-9


@pytest.mark.parametrize("lam", DIAGRAMS, ids=str)
def test_stuck_count_is_interval_product_difference(lam):
    table = je.build_row_cutoffs(lam, K, R, BETA)
    kernel = je.jw_kernel(table)
    graph = jw.profile_graph(K, R)
    for p, t in table.states():
        i = t + 1
        if i >= lam.n:
            continue
        m = je.build_matching(table, i, p)
        for blk in m.blocks.values():
            sizes = [(a1 - a0) * (b1 - b0) for (a0, a1), (b0, b1) in (blk.side, blk.partner_side)]
            assert blk.stuck == max(0, sizes[0] - sizes[1])
            if sizes[0] == sizes[1]:
                assert blk.stuck == 0
        assert m.stuck_count() == kernel.stuck_pairs(i, graph.index[p])
        assert m.stuck_count() == _grid_stuck_count(kernel, i, graph.index[p])


def _grid_stuck_count(kernel, i, ctx):
    vals = np.arange(kernel.scale, dtype=np.int64)
    return int(np.count_nonzero(kernel.segment(i, ctx, vals[:, None], vals[None, :])[5]))


def test_matching_partner_roundtrip():
    lam = jw.YoungDiagram((2, 1, 1))
    table = je.build_row_cutoffs(lam, K, R, BETA)
    m = je.build_matching(table, 2, je.profile_after((1,), K, R))
    for (j1, j2), blk in m.blocks.items():
        back = m.blocks.get((j2, j1))
        (a0, a1), (b0, b1) = blk.side
        for ra in range(a0, a1):
            for rb in range(b0, b1):
                q = blk.partner(ra, rb)
                if q is not None:
                    assert back.partner(*q) == (ra, rb)


def test_unstuck_diagonals_match_braid():
    lam = jw.YoungDiagram((2, 1, 1))
    b = parse_braid("1 -2 3 1 2", 4)
    table = je.build_row_cutoffs(lam, K, R, BETA)
    kernel = je.jw_kernel(table)
    keys, labels = _labels(table)
    diag = diagonal_elements(kernel, keys, b.letters)
    pi = jw.jw_braid(b, lam, K, R)
    free = ~kernel.stuck_mask(keys)
    assert np.abs(diag[free] - np.diag(pi)[labels[free]]).max() < 1e-9


def test_two_row_cutoffs_match_path_cutoffs():
    n, k = 4, 5
    for h in (1, 3):
        lam = jw.diagram_for_rung(n, h)
        rows = je.build_row_cutoffs(lam, k, 2, 4)
        path = build_encoding_table(n, k, h, 4)
        for (a, t), c in path.cutoffs.items():
            p = je.profile_after([1] * (a - 1), k, 2) if t == a - 1 else None
            if p is None:
                continue
            assert rows.cutoffs[(p, t, 1)] == c


def test_matching_errors():
    table = je.build_row_cutoffs(jw.YoungDiagram((2, 1)), K, R, BETA)
    with pytest.raises(ValueError):
        je.build_matching(table, 3, je.profile_after((), K, R))
    with pytest.raises(ValueError):
        je.profile_after((2,), K, R)
