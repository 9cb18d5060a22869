"""Bit registers, sparse amplitude states, and the branching engine shared by
the encoded crossing operators.

A bitstring of ``n * beta`` bits is read as ``n`` registers of ``beta`` bits
each, register 1 first and most-significant-bit first inside a register.
Vectorized code works on integer arrays of shape ``(N, n)`` holding the
register values; the sparse state keys bitstrings by their integer value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

EXACT_MODE_MAX_BITS = 24


def registers_from_int(x: int, n: int, beta: int) -> tuple[int, ...]:
    if x < 0 or x >> (n * beta):
        raise ValueError(f"{x} does not fit in {n * beta} bits")
    mask = (1 << beta) - 1
    return tuple((x >> (beta * (n - 1 - t))) & mask for t in range(n))


def registers_to_int(regs: Iterable[int], beta: int) -> int:
    x = 0
    for r in regs:
        x = (x << beta) | int(r)
    return x


def registers_from_bits(bits: str, n: int, beta: int) -> tuple[int, ...]:
    if len(bits) != n * beta or set(bits) - {"0", "1"}:
        raise ValueError(f"expected a string of {n * beta} binary digits")
    return registers_from_int(int(bits, 2) if bits else 0, n, beta)


def as_registers(x, n: int, beta: int) -> tuple[int, ...]:
    """Accept an int, a '0'/'1' string, or a register sequence."""
    if isinstance(x, str):
        return registers_from_bits(x, n, beta)
    if isinstance(x, (int, np.integer)):
        return registers_from_int(int(x), n, beta)
    regs = tuple(int(r) for r in x)
    if len(regs) != n or any(not 0 <= r < (1 << beta) for r in regs):
        raise ValueError(f"expected {n} registers with values below 2^{beta}")
    return regs


def registers_array(xs: np.ndarray, n: int, beta: int) -> np.ndarray:
    """Vectorized ``registers_from_int`` for ``n * beta <= 62``."""
    xs = np.asarray(xs, dtype=np.int64)
    shifts = beta * (n - 1 - np.arange(n, dtype=np.int64))
    return (xs[:, None] >> shifts[None, :]) & ((1 << beta) - 1)


def pack_registers(regs: np.ndarray, beta: int) -> np.ndarray:
    n = regs.shape[1]
    shifts = beta * (n - 1 - np.arange(n, dtype=np.int64))
    return np.bitwise_or.reduce(regs.astype(np.int64) << shifts[None, :], axis=1) if n else np.zeros(len(regs), np.int64)


class SparseAmplitudeState:
    """Finitely supported map from ``n * beta``-bit strings to amplitudes."""

    def __init__(self, n: int, beta: int, amplitudes: Mapping[int, complex] | None = None):
        self.n = n
        self.beta = beta
        self.amplitudes: dict[int, complex] = {}
        for x, a in (amplitudes or {}).items():
            registers_from_int(int(x), n, beta)
            if a != 0:
                self.amplitudes[int(x)] = complex(a)

    @classmethod
    def basis(cls, x, n: int, beta: int) -> "SparseAmplitudeState":
        return cls(n, beta, {registers_to_int(as_registers(x, n, beta), beta): 1.0})

    @property
    def bits(self) -> int:
        return self.n * self.beta

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __getitem__(self, x) -> complex:
        key = registers_to_int(as_registers(x, self.n, self.beta), self.beta)
        return self.amplitudes.get(key, 0j)

    def items(self):
        return self.amplitudes.items()

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def vdot(self, other: "SparseAmplitudeState") -> complex:
        return sum(a.conjugate() * other.amplitudes.get(x, 0j) for x, a in self.amplitudes.items())

    def to_keys(self) -> tuple[np.ndarray, np.ndarray]:
        keys = sorted(self.amplitudes)
        arr = np.array(keys + [None], dtype=object)[:-1]
        if key_dtype(self.n, self.beta) is not object:
            arr = arr.astype(np.int64)
        amps = np.array([self.amplitudes[x] for x in keys], dtype=complex)
        return arr, amps

    @classmethod
    def from_keys(cls, n: int, beta: int, keys: np.ndarray, amps: np.ndarray,
                  tol: float = 0.0) -> "SparseAmplitudeState":
        out: dict[int, complex] = {}
        for x, a in zip(keys.tolist(), amps.tolist()):
            out[int(x)] = out.get(int(x), 0j) + a
        state = cls(n, beta)
        state.amplitudes = {x: a for x, a in sorted(out.items()) if abs(a) > tol}
        return state


def key_dtype(n: int, beta: int):
    """int64 keys when they fit, Python ints otherwise."""
    return np.int64 if n * beta <= 62 else object


def keys_from_registers(regs: np.ndarray, beta: int) -> np.ndarray:
    n = regs.shape[1]
    if key_dtype(n, beta) is object:
        return np.array([registers_to_int(row, beta) for row in regs.tolist()] + [None], dtype=object)[:-1]
    return pack_registers(regs, beta)


def register(keys: np.ndarray, t: int, n: int, beta: int) -> np.ndarray:
    """Value of register ``t`` (1-based) of every key, as int64."""
    out = (keys >> (beta * (n - t))) & ((1 << beta) - 1)
    return out.astype(np.int64) if keys.dtype == object else out


def registers_of(keys: np.ndarray, n: int, beta: int, upto: int | None = None) -> np.ndarray:
    upto = n if upto is None else upto
    out = np.empty((len(keys), upto), dtype=np.int64)
    for t in range(upto):
        out[:, t] = register(keys, t + 1, n, beta)
    return out


@dataclass
class CrossingAction:
    """Per-string action of one encoded crossing on a batch of strings.

    Each input string ``x`` maps to ``stay * x + move * partner(x)``, where
    ``partner(x)`` differs from ``x`` only in the two crossing registers,
    which take the values ``reg_a`` and ``reg_b``.
    """

    stay: np.ndarray
    move: np.ndarray
    moves: np.ndarray
    reg_a: np.ndarray
    reg_b: np.ndarray
    stuck: np.ndarray


# lookup tables over (context, r_i, r_{i+1}) are built when 2 beta is at most this
LOOKUP_BITS = 16


class Kernel:
    """Encoded crossing operators on ``n``-register strings.

    Decoding walks through *contexts* (a rung, a profile, ...): step ``t``
    reads register ``t+1`` in context ``c_t`` and moves to ``c_{t+1}``. The
    crossing on boxes ``(i, i+1)`` depends only on ``c_{i-1}`` and the two
    registers it touches. Subclasses supply :meth:`step` and :meth:`segment`.
    """

    n: int
    beta: int
    num_contexts: int
    start: int

    def step(self, t: int, ctx: np.ndarray, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def segment(self, i: int, ctx: np.ndarray, ra: np.ndarray, rb: np.ndarray):
        """Return ``(stay, move, matched, partner_a, partner_b, stuck)`` arrays."""
        raise NotImplementedError

    @property
    def scale(self) -> int:
        return 1 << self.beta

    def contexts(self, keys: np.ndarray, steps: int) -> np.ndarray:
        ctx = np.full(len(keys), self.start, dtype=np.int64)
        for t in range(steps):
            ctx = self.step(t, ctx, register(keys, t + 1, self.n, self.beta))
        return ctx

    def _lookup(self, i: int):
        cache = self.__dict__.setdefault("_lookups", {})
        if i not in cache:
            vals = np.arange(self.scale, dtype=np.int64)
            ctx = np.arange(self.num_contexts, dtype=np.int64)[:, None, None]
            parts = self.segment(i, ctx, vals[None, :, None], vals[None, None, :])
            shape = (self.num_contexts, self.scale, self.scale)
            cache[i] = tuple(np.broadcast_to(x, shape).reshape(-1) for x in parts)
        return cache[i]

    def _segment_fast(self, i: int, ctx, ra, rb):
        if 2 * self.beta <= LOOKUP_BITS:
            pos = (ctx << (2 * self.beta)) | (ra << self.beta) | rb
            return tuple(x[pos] for x in self._lookup(i))
        return self.segment(i, ctx, ra, rb)

    def __call__(self, keys: np.ndarray, i: int, sign: int) -> CrossingAction:
        n, beta = self.n, self.beta
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} outside 1..{n - 1}")
        ctx = self.contexts(keys, i - 1)
        ra = register(keys, i, n, beta)
        rb = register(keys, i + 1, n, beta)
        stay, move, matched, pa, pb, stuck = self._segment_fast(i, ctx, ra, rb)
        if sign < 0:
            stay, move = stay.conj(), move.conj()
        return CrossingAction(stay, move, matched, pa, pb, stuck)

    def stuck_mask(self, keys: np.ndarray, positions=None) -> np.ndarray:
        """True for keys stuck at any of the given crossing positions (default: all)."""
        positions = range(1, self.n) if positions is None else positions
        out = np.zeros(len(keys), dtype=bool)
        ctx = np.full(len(keys), self.start, dtype=np.int64)
        wanted = set(positions)
        for i in range(1, self.n):
            ra = register(keys, i, self.n, self.beta)
            if i in wanted:
                out |= self._segment_fast(i, ctx, ra, register(keys, i + 1, self.n, self.beta))[5]
            ctx = self.step(i - 1, ctx, ra)
        return out

    def stuck_pairs(self, i: int, ctx: int) -> int:
        """Number of ``(r_i, r_{i+1})`` values stuck at crossing ``i`` in context ``ctx``."""
        vals = np.arange(self.scale, dtype=np.int64)
        return int(np.count_nonzero(self.segment(i, ctx, vals[:, None], vals[None, :])[5]))

    def context_distribution(self, steps: int) -> dict[int, Fraction]:
        """Exact distribution of the decoding context after ``steps`` uniform registers."""
        vals = np.arange(self.scale, dtype=np.int64)
        dist = {self.start: Fraction(1)}
        for t in range(steps):
            nxt: dict[int, Fraction] = {}
            for c, p in dist.items():
                after = self.step(t, np.full(self.scale, c, np.int64), vals)
                targets, counts = np.unique(after, return_counts=True)
                for c2, m in zip(targets.tolist(), counts.tolist()):
                    nxt[c2] = nxt.get(c2, Fraction(0)) + p * Fraction(m, self.scale)
            dist = nxt
        return dist

    def stuck_union_bound(self, positions) -> Fraction:
        """Sum over crossing positions of the exact probability of being stuck there."""
        total = Fraction(0)
        for i in sorted(set(positions)):
            for c, p in self.context_distribution(i - 1).items():
                total += p * Fraction(self.stuck_pairs(i, c), self.scale ** 2)
        return total

    def unstuck_count(self) -> int:
        """Exact number of strings stuck at no crossing position.

        Transfer scan over registers carrying the decoding context and the
        value of the latest register.
        """
        n, full = self.n, self.scale
        if n < 2:
            return full ** n
        vals = np.arange(full, dtype=np.int64)
        free = {self.start: np.ones(full, dtype=object)}
        for t in range(1, n):
            nxt: dict[int, np.ndarray] = {}
            for c, row in free.items():
                stuck = self._segment_fast(t, np.full((full, full), c, np.int64),
                                           np.broadcast_to(vals[:, None], (full, full)),
                                           np.broadcast_to(vals[None, :], (full, full)))[5]
                keep = (~np.asarray(stuck, bool).reshape(full, full)).astype(object)
                after = self.step(t - 1, np.full(full, c, np.int64), vals)
                for c2 in np.unique(after).tolist():
                    sel = after == c2
                    contrib = row[sel].dot(keep[sel])
                    nxt[c2] = nxt[c2] + contrib if c2 in nxt else contrib
            free = nxt
        return int(sum(int(x) for row in free.values() for x in row))

    def exhaustive_trace(self, letters, active: int | None = None) -> complex:
        """``2^{-n beta} sum_x <x|U|x>``, summing over the first ``active`` registers only."""
        letters = tuple(letters)
        if not letters:
            return 1 + 0j
        if active is None:
            active = min(self.n, max(abs(g) for g in letters) + 1)
        if self.n * self.beta > EXACT_MODE_MAX_BITS:
            raise ValueError(f"exact mode needs n*beta <= {EXACT_MODE_MAX_BITS}, got {self.n * self.beta}")
        acc = 0j
        for starts in exhaustive_starts(self.n, self.beta, active):
            acc += diagonal_elements(self, starts, letters).sum()
        return complex(acc / 2 ** (self.beta * active))


def apply_crossing(kernel: Kernel, keys: np.ndarray, amps: np.ndarray, i: int, sign: int):
    """Apply one encoded crossing to ``(keys, amps)`` branches; returns new branches
    plus the index of the input branch each output descends from."""
    n, beta = kernel.n, kernel.beta
    act = kernel(keys, i, sign)
    idx = np.flatnonzero(act.moves)
    old_a = register(keys[idx], i, n, beta)
    old_b = register(keys[idx], i + 1, n, beta)
    flip = ((old_a ^ act.reg_a[idx]) << beta) | (old_b ^ act.reg_b[idx])
    if keys.dtype == object:
        flip = flip.astype(object)
    moved = keys[idx] ^ (flip << (beta * (n - i - 1)))
    out_keys = np.concatenate([keys, moved])
    out_amps = np.concatenate([amps * act.stay, amps[idx] * act.move[idx]])
    parent = np.concatenate([np.arange(len(keys)), idx])
    return out_keys, out_amps, parent


def _merge(keys: np.ndarray, amps: np.ndarray, origin: np.ndarray, bits: int):
    """Sum amplitudes of identical (origin, string) branches."""
    if len(keys) == 0:
        return origin, keys, amps
    if keys.dtype != object and bits + int(origin.max()).bit_length() <= 62:
        comb = (origin << bits) | keys
    else:
        comb = np.array([(int(o) << bits) | int(x) for o, x in zip(origin.tolist(), keys.tolist())] + [None], dtype=object)[:-1]
    _, first, inverse = np.unique(comb, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    summed = np.zeros(len(first), dtype=complex)
    np.add.at(summed, inverse, amps)
    return origin[first], keys[first], summed


def apply_word(kernel: Kernel, state: SparseAmplitudeState, letters: Iterable[int]) -> SparseAmplitudeState:
    """Apply ``U(g_1) ... U(g_m)`` to a state (the last letter acts first)."""
    keys, amps = state.to_keys()
    for g in reversed(tuple(letters)):
        keys, amps, _ = apply_crossing(kernel, keys, amps, abs(g), 1 if g > 0 else -1)
        _, keys, amps = _merge(keys, amps, np.zeros(len(keys), np.int64), state.bits)
    return SparseAmplitudeState.from_keys(state.n, state.beta, keys, amps)


def diagonal_elements(kernel: Kernel, starts: np.ndarray, letters: Iterable[int]) -> np.ndarray:
    """``<x|U(b)|x>`` for every key ``x`` in ``starts``."""
    letters = tuple(letters)
    if not letters:
        return np.ones(len(starts), dtype=complex)
    bits = kernel.n * kernel.beta
    keys = starts
    amps = np.ones(len(starts), dtype=complex)
    origin = np.arange(len(starts), dtype=np.int64)
    for g in reversed(letters):
        keys, amps, parent = apply_crossing(kernel, keys, amps, abs(g), 1 if g > 0 else -1)
        origin = origin[parent]
        if len(keys) > 8 * len(starts):
            origin, keys, amps = _merge(keys, amps, origin, bits)
    back = keys == starts[origin]
    out = np.zeros(len(starts), dtype=complex)
    np.add.at(out, origin[back], amps[back])
    return out


def exhaustive_starts(n: int, beta: int, active: int, chunk: int = 1 << 16):
    """Yield key arrays covering every value of the first ``active`` registers
    (later registers held at zero)."""
    total = 1 << (beta * active)
    shift = beta * (n - active)
    for lo in range(0, total, chunk):
        yield np.arange(lo, min(total, lo + chunk), dtype=np.int64) << shift
