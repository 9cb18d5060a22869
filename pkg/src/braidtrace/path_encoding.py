"""Bitstring encoding of ladder paths and the encoded crossing operators.

Step ``t`` of a path is read from register ``r_t``: it goes up iff ``r_t`` is
below the cutoff ``C(a, t-1) = ceil(2^beta p_up)`` of the rung ``a`` reached
after ``t-1`` steps. With exact cutoffs every path of the sector would be
equally likely; rounding perturbs that by at most ``2 n 2^-beta`` in 1-norm.

A crossing on steps ``(i, i+1)`` pairs up-down strings with down-up strings
of the same start rung by their lexicographic rank inside the rectangle of
register values that encodes each configuration. Ranks that exist on one side
only are *stuck* and left untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .braid import BraidWord
from .path_model import (
    DOWN,
    UP,
    LadderPath,
    _path_steps,
    completions,
    crossing_coefficients,
    rep_braid,
    sector_size,
)
from .state import (
    EXACT_MODE_MAX_BITS,
    Kernel,
    SparseAmplitudeState,
    apply_word,
    as_registers,
    diagonal_elements,
)

# segment kinds
UU, DD, UD, DU = 0, 1, 2, 3


def _ceil_scaled(p: Fraction, beta: int) -> int:
    return -((-p.numerator << beta) // p.denominator)


def up_probability(a: int, t: int, n: int, k: int, h: int) -> Fraction:
    """Probability that step ``t+1`` goes up, given rung ``a`` after ``t`` steps.

    Proportional to the number of ways to finish at rung ``h`` after each choice.
    """
    if not 0 <= t < n:
        raise ValueError(f"step {t} outside 0..{n - 1}")
    left = n - t - 1
    up = completions(k, left, a + 1, h)
    down = completions(k, left, a - 1, h)
    if up + down == 0:
        raise ValueError(f"rung {a} after {t} steps cannot reach rung {h} at step {n}")
    return Fraction(up, up + down)


def support_states(n: int, k: int, h: int) -> list[tuple[int, int]]:
    """``(rung, steps taken)`` pairs with ``steps < n`` lying on some path of the sector."""
    out = []
    for t in range(n):
        for a in range(1, k):
            if completions(k, t, 1, a) and completions(k, n - t, a, h):
                out.append((a, t))
    return out


@dataclass(frozen=True)
class EncodingTable:
    n: int
    k: int
    h: int
    beta: int
    cutoffs: dict[tuple[int, int], int] = field(repr=False)
    grid: np.ndarray = field(repr=False, compare=False)

    @property
    def scale(self) -> int:
        return 1 << self.beta

    def cutoff(self, a: int, t: int) -> int:
        return self.cutoffs[(a, t)]

    def to_dict(self) -> dict:
        rows = [{"a": a, "t": t, "c": c} for (a, t), c in sorted(self.cutoffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
        return {"n": self.n, "k": self.k, "h": self.h, "beta": self.beta, "cutoffs": rows}


def build_encoding_table(n: int, k: int, h: int, beta: int) -> EncodingTable:
    return _build_encoding_table(n, k, h, beta)


@lru_cache(maxsize=256)
def _build_encoding_table(n: int, k: int, h: int, beta: int) -> EncodingTable:
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if n < 1 or k < 3:
        raise ValueError(f"need n >= 1 and k >= 3, got n={n}, k={k}")
    if not sector_size(n, k, h):
        raise ValueError(f"sector h={h} is empty for n={n}, k={k}")
    cutoffs = {(a, t): _ceil_scaled(up_probability(a, t, n, k, h), beta) for a, t in support_states(n, k, h)}
    # off-support entries are never read by decoding; 0 keeps the array dense
    grid = np.zeros((n, k + 1), dtype=np.int64)
    for (a, t), c in cutoffs.items():
        grid[t, a] = c
    grid.setflags(write=False)
    return EncodingTable(n, k, h, beta, cutoffs, grid)


def decode_rungs(regs: np.ndarray, table: EncodingTable, steps: int | None = None) -> np.ndarray:
    """Rungs visited while decoding each row of an ``(N, n)`` register array.

    Column ``t`` of the result is the rung after ``t`` steps.
    """
    regs = np.asarray(regs, dtype=np.int64)
    steps = table.n if steps is None else steps
    rungs = np.empty((len(regs), steps + 1), dtype=np.int64)
    rungs[:, 0] = 1
    for t in range(steps):
        up = regs[:, t] < table.grid[t, rungs[:, t]]
        rungs[:, t + 1] = rungs[:, t] + np.where(up, 1, -1)
    return rungs


def decode_path(x, table: EncodingTable) -> LadderPath:
    regs = np.array([as_registers(x, table.n, table.beta)])
    rungs = decode_rungs(regs, table)[0]
    steps = tuple(UP if b > a else DOWN for a, b in zip(rungs[:-1], rungs[1:]))
    return LadderPath(table.k, steps)


def rounding_error_bound(n: int, beta: int) -> float:
    return 2 * n / 2 ** beta


def decoded_distribution(table: EncodingTable) -> dict[tuple[int, ...], Fraction]:
    """Exact probability of each path when all ``n beta`` bits are uniform."""
    out: dict[tuple[int, ...], Fraction] = {}
    scale = table.scale
    for steps in _path_steps(table.n, table.k, table.h):
        p = Fraction(1)
        a = 1
        for t, s in enumerate(steps):
            c = table.cutoffs[(a, t)]
            p *= Fraction(c if s == UP else scale - c, scale)
            a += 1 if s == UP else -1
        out[steps] = p
    return out


def rounding_distance(table: EncodingTable) -> Fraction:
    """``|| p_uni - p~ ||_1`` over the paths of the sector."""
    uni = Fraction(1, sector_size(table.n, table.k, table.h))
    return sum((abs(p - uni) for p in decoded_distribution(table).values()), Fraction(0))


def _prefixes(n: int, k: int, h: int) -> list[tuple[int, ...]]:
    out = set()
    for steps in _path_steps(n, k, h):
        for t in range(n + 1):
            out.add(steps[:t])
    return sorted(out, key=lambda s: (len(s), s))


def stochastic_matrices(n: int, k: int, h: int, beta: int):
    """Ideal and rounded transition matrices over path prefixes of the sector.

    Returns ``(states, M, M_rounded)``; ``M[i][j]`` is the probability of moving
    from ``states[j]`` to ``states[i]``. Full-length paths are absorbing.
    """
    table = build_encoding_table(n, k, h, beta)
    states = _prefixes(n, k, h)
    index = {s: i for i, s in enumerate(states)}
    dim = len(states)
    ideal = [[Fraction(0)] * dim for _ in range(dim)]
    rounded = [[Fraction(0)] * dim for _ in range(dim)]
    for j, s in enumerate(states):
        t = len(s)
        if t == n:
            ideal[j][j] = rounded[j][j] = Fraction(1)
            continue
        a = 1 + sum(1 if x == UP else -1 for x in s)
        p = up_probability(a, t, n, k, h)
        pr = Fraction(table.cutoffs[(a, t)], table.scale)
        for step, q, qr in ((UP, p, pr), (DOWN, 1 - p, 1 - pr)):
            child = index.get(s + (step,))
            if child is not None:
                ideal[child][j] += q
                rounded[child][j] += qr
    return states, ideal, rounded


def matvec(mat, vec):
    return [sum((m * v for m, v in zip(row, vec) if m and v), Fraction(0)) for row in mat]


def chain_distance(n: int, k: int, h: int, beta: int) -> Fraction:
    """``|| M^n p0 - M~^n p0 ||_1`` as an exact rational."""
    states, ideal, rounded = stochastic_matrices(n, k, h, beta)
    p = [Fraction(int(len(s) == 0)) for s in states]
    q = list(p)
    for _ in range(n):
        p = matvec(ideal, p)
        q = matvec(rounded, q)
    return sum((abs(x - y) for x, y in zip(p, q)), Fraction(0))


# ---------------------------------------------------------------- crossings


@lru_cache(maxsize=None)
def _coefficient_arrays(k: int) -> tuple[np.ndarray, ...]:
    a, b, c, d = (np.zeros(k + 1, dtype=complex) for _ in range(4))
    for l in range(1, k):
        co = crossing_coefficients(l, k)
        a[l], b[l], c[l], d[l] = co.a, co.b, co.c, co.d
    phase = crossing_coefficients(1, k).e
    return a, b, c, d, phase


@dataclass
class SegmentClass:
    """Vectorized classification of register pairs at one crossing."""

    kind: np.ndarray
    matched: np.ndarray
    stuck: np.ndarray
    partner_a: np.ndarray
    partner_b: np.ndarray


def classify_segments(table: EncodingTable, i: int, l: np.ndarray, ra: np.ndarray, rb: np.ndarray) -> SegmentClass:
    """Classify registers ``(r_i, r_{i+1})`` given the start rung ``l``.

    Arrays broadcast against each other. Partner values are only meaningful
    where ``matched`` holds.
    """
    l, ra, rb = np.broadcast_arrays(np.asarray(l, np.int64), np.asarray(ra, np.int64), np.asarray(rb, np.int64))
    grid = table.grid
    full = table.scale
    c1 = grid[i - 1, l]
    first_up = ra < c1
    mid = l + np.where(first_up, 1, -1)
    second_up = rb < grid[i, np.clip(mid, 0, table.k)]
    kind = np.where(first_up, np.where(second_up, UU, UD), np.where(second_up, DU, DD))

    cu = grid[i, np.clip(l + 1, 0, table.k)]
    cd = grid[i, np.clip(l - 1, 0, table.k)]
    has_ud_side = l + 1 <= table.k - 1
    has_du_side = l - 1 >= 1
    n_ud = np.where(has_ud_side, c1 * (full - cu), 0)
    n_du = np.where(has_du_side, (full - c1) * cd, 0)
    m = np.minimum(n_ud, n_du)

    ud = kind == UD
    du = kind == DU
    label = np.where(ud, (full - cu) * ra + (rb - cu), cd * (ra - c1) + rb)
    mixed = ud | du
    # a partner segment leaving the ladder has zero amplitude: not stuck
    both_sides = has_ud_side & has_du_side
    matched = mixed & both_sides & (label < m)
    stuck = mixed & both_sides & (label >= m)

    safe_cd = np.maximum(cd, 1)
    safe_span = np.maximum(full - cu, 1)
    partner_a = np.where(ud, c1 + label // safe_cd, label // safe_span)
    partner_b = np.where(ud, label % safe_cd, cu + label % safe_span)
    return SegmentClass(kind, matched, stuck, partner_a, partner_b)


def _segment_action(table: EncodingTable, i: int, l, ra, rb):
    a, b, c, d, phase = _coefficient_arrays(table.k)
    cls = classify_segments(table, i, l, ra, rb)
    l = np.broadcast_to(l, cls.kind.shape)
    ud = cls.kind == UD
    du = cls.kind == DU
    stay = np.where(ud, a[l], np.where(du, c[l], phase))
    stay = np.where(cls.stuck, 1.0 + 0j, stay)
    move = np.where(cls.matched, np.where(ud, b[l], d[l]), 0j)
    return stay, move, cls


class PathKernel(Kernel):
    """Encoded crossing operators for one sector at one precision.

    The decoding context is the current rung.
    """

    def __init__(self, table: EncodingTable):
        self.table = table
        self.n = table.n
        self.beta = table.beta
        self.num_contexts = table.k + 1
        self.start = 1

    def step(self, t, ctx, r):
        return ctx + np.where(r < self.table.grid[t, ctx], 1, -1)

    def segment(self, i, ctx, ra, rb):
        # rungs 0 and k never occur; clamp them so lookup arrays stay dense
        ctx = np.clip(ctx, 1, self.table.k - 1)
        stay, move, cls = _segment_action(self.table, i, ctx, ra, rb)
        return stay, move, cls.matched, cls.partner_a, cls.partner_b, cls.stuck

    def stuck_pairs(self, i, ctx):
        table, full = self.table, self.table.scale
        l = int(ctx)
        if not (2 <= l <= table.k - 2):
            return 0
        c1 = table.grid[i - 1, l]
        n_ud = c1 * (full - table.grid[i, l + 1])
        n_du = (full - c1) * table.grid[i, l - 1]
        return int(abs(n_ud - n_du))


def path_kernel(table: EncodingTable) -> PathKernel:
    return _path_kernel(table.n, table.k, table.h, table.beta)


@lru_cache(maxsize=64)
def _path_kernel(n: int, k: int, h: int, beta: int) -> PathKernel:
    return PathKernel(build_encoding_table(n, k, h, beta))


def apply_encoded_crossing(state: SparseAmplitudeState, i: int, sign: int, table: EncodingTable) -> SparseAmplitudeState:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if (state.n, state.beta) != (table.n, table.beta):
        raise ValueError("state and table disagree on n or beta")
    return apply_word(path_kernel(table), state, (sign * i,))


def apply_encoded_braid(state: SparseAmplitudeState, b: BraidWord, table: EncodingTable) -> SparseAmplitudeState:
    if b.strands != table.n:
        raise ValueError(f"braid has {b.strands} strands, table expects {table.n}")
    return apply_word(path_kernel(table), state, b.letters)


def stuck_mask(keys: np.ndarray, table: EncodingTable, positions=None) -> np.ndarray:
    """True for keys stuck at any of the given crossing positions (default: all)."""
    return path_kernel(table).stuck_mask(np.asarray(keys), positions)


def encoded_diagonal(starts: np.ndarray, b: BraidWord, table: EncodingTable) -> np.ndarray:
    """``<x|U(b)|x>`` for each key in ``starts``."""
    return diagonal_elements(path_kernel(table), starts, b.letters)


def encoded_normalized_trace(b: BraidWord, k: int, h: int, beta: int) -> complex:
    """``2^{-n beta} sum_x <x|U(b)|x>`` by exhaustive summation.

    Registers past the last strand the braid touches never influence the
    diagonal, so only the leading ones are enumerated.
    """
    n = b.strands
    if n * beta > EXACT_MODE_MAX_BITS:
        raise ValueError(f"exact mode needs n*beta <= {EXACT_MODE_MAX_BITS}, got {n * beta}")
    return path_kernel(build_encoding_table(n, k, h, beta)).exhaustive_trace(b.letters)


@dataclass(frozen=True)
class StuckFraction:
    exact: Fraction
    approximation: float

    def __float__(self) -> float:
        return float(self.exact)


def stuck_fraction(n: int, k: int, h: int, beta: int) -> StuckFraction:
    """Fraction of bitstrings stuck at one or more crossing positions (exact)."""
    kernel = path_kernel(build_encoding_table(n, k, h, beta))
    exact = 1 - Fraction(kernel.unstuck_count(), 1 << (n * beta))
    return StuckFraction(exact, 1 - (1 - 2.0 ** -beta) ** n)


@dataclass(frozen=True)
class TraceErrorBreakdown:
    """Exact trace, encoded trace, and how their gap splits.

    ``decoded`` is what the encoded trace would be if no string were stuck.
    ``rounding`` is ``|decoded - exact|`` and ``stuck`` is ``|encoded - decoded|``.
    """

    exact: complex
    encoded: complex
    decoded: complex
    rounding: float
    stuck: float
    rounding_distance: Fraction
    stuck_fraction: Fraction
    rounding_bound: float

    @property
    def total(self) -> float:
        return abs(self.encoded - self.exact)

    @property
    def bound(self) -> float:
        """``E_round + E_stuck`` with ``E_round = ||p_uni - p~||_1`` and
        ``E_stuck = 2 x (stuck fraction)``."""
        return float(self.rounding_distance) + 2 * float(self.stuck_fraction)


def trace_error_breakdown(b: BraidWord, k: int, h: int, beta: int) -> TraceErrorBreakdown:
    n = b.strands
    table = build_encoding_table(n, k, h, beta)
    rho = rep_braid(b, k, h)
    diag = np.diag(rho)
    exact = complex(diag.mean())
    dist = decoded_distribution(table)
    decoded = complex(sum(float(dist[s]) * diag[j] for j, s in enumerate(_path_steps(n, k, h))))
    encoded = encoded_normalized_trace(b, k, h, beta)
    return TraceErrorBreakdown(
        exact=exact,
        encoded=encoded,
        decoded=decoded,
        rounding=abs(decoded - exact),
        stuck=abs(encoded - decoded),
        rounding_distance=rounding_distance(table),
        stuck_fraction=stuck_fraction(n, k, h, beta).exact,
        rounding_bound=rounding_error_bound(n, beta),
    )
