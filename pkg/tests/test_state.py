import numpy as np
import pytest

from braidtrace import state as st


def test_register_roundtrip():
    regs = (5, 0, 7, 2)
    x = st.registers_to_int(regs, 3)
    assert st.registers_from_int(x, 4, 3) == regs
    assert st.registers_from_bits("101000111010", 4, 3) == regs
    with pytest.raises(ValueError):
        st.registers_from_int(1 << 12, 4, 3)


def test_keys_and_registers_agree():
    rng = np.random.default_rng(0)
    regs = rng.integers(0, 8, size=(20, 4))
    keys = st.keys_from_registers(regs, 3)
    assert np.array_equal(st.registers_of(keys, 4, 3), regs)
    for t in range(1, 5):
        assert np.array_equal(st.register(keys, t, 4, 3), regs[:, t - 1])


def test_wide_keys_use_python_ints():
    n, beta = 10, 7
    assert st.key_dtype(n, beta) is object
    regs = np.full((2, n), (1 << beta) - 1)
    keys = st.keys_from_registers(regs, beta)
    assert int(keys[0]) == (1 << (n * beta)) - 1
    assert np.array_equal(st.register(keys, n, n, beta), regs[:, -1])


def test_sparse_state_basics():
    s = st.SparseAmplitudeState.basis((1, 2), 2, 2)
    assert s[(1, 2)] == 1 and s[(0, 0)] == 0
    assert s.norm() == 1 and s.vdot(s) == 1
    keys, amps = s.to_keys()
    again = st.SparseAmplitudeState.from_keys(2, 2, keys, amps)
    assert dict(again.items()) == dict(s.items())


def test_exhaustive_starts_cover_active_registers():
    chunks = list(st.exhaustive_starts(3, 2, 2, chunk=5))
    keys = np.concatenate(chunks)
    assert len(keys) == 16 and len(np.unique(keys)) == 16
    assert np.all(st.register(keys, 3, 3, 2) == 0)
