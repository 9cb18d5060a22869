import pytest

from braidtrace.braid import (
    BraidError,
    BraidWord,
    as_braid,
    exponent_sum,
    format_braid,
    markov_conjugate,
    markov_stabilize,
    parse_braid,
    read_braid_file,
    writhe,
)


def test_parse_roundtrip():
    b = parse_braid("1 -2  3", 4)
    assert b.letters == (1, -2, 3)
    assert parse_braid(format_braid(b), 4) == b


def test_empty_word():
    b = parse_braid("", 1)
    assert b.letters == () and b.strands == 1


@pytest.mark.parametrize("text,n", [("0", 3), ("3", 3), ("-4", 4), ("x", 2)])
def test_parse_rejects(text, n):
    with pytest.raises(BraidError):
        parse_braid(text, n)


def test_strand_count_validated():
    with pytest.raises(BraidError):
        BraidWord(0)


def test_writhe_is_minus_exponent_sum():
    b = parse_braid("1 1 -2 1", 3)
    assert exponent_sum(b) == 2
    assert writhe(b) == -2


def test_markov_moves():
    b = parse_braid("1 -2", 3)
    a = parse_braid("2", 3)
    assert markov_conjugate(b, a).letters == (2, 1, -2, -2)
    s = markov_stabilize(b, -1)
    assert s.strands == 4 and s.letters == (1, -2, -3)


def test_inverse_and_product():
    b = parse_braid("1 -2", 3)
    assert (b * b.inverse()).letters == (1, -2, 2, -1)


def test_read_braid_file(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("# figure eight\nstrands=3\n1 -2\n1 -2  # tail\n")
    assert read_braid_file(path) == BraidWord(3, (1, -2, 1, -2))
    path.write_text("1 2\n")
    with pytest.raises(BraidError):
        read_braid_file(path)


def test_as_braid():
    assert as_braid([1, -2]).strands == 3
    assert as_braid("1 1 1").strands == 2
    with pytest.raises(BraidError):
        as_braid(BraidWord(2, (1,)), strands=3)
