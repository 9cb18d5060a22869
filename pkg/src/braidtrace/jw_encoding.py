"""Bitstring encoding of standard tableaux for one Young diagram.

Box ``t`` goes to the row whose cutoff interval contains register ``r_t``.
Cutoffs are the rounded cumulative row probabilities, and those depend only on
the step, the row and the profile of the diagram built so far.

A crossing on boxes ``(i, i+1)`` in rows ``(j, j')`` pairs those strings with
the ones encoding rows ``(j', j)``, rank for rank in lexicographic order of
``(r_i, r_{i+1})``. Whatever the longer side has left over is stuck and left
untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .braid import BraidWord
from .jones_wenzl import (
    Profile,
    StandardTableau,
    YoungDiagram,
    _check_kr,
    _tableau_rows,
    add_box,
    completion_count,
    empty_profile,
    jw_braid,
    jw_diagonal,
    jw_offdiagonal,
    profile_box_count,
    profile_graph,
    profile_of,
    tableau_count,
)
from .state import (
    EXACT_MODE_MAX_BITS,
    Kernel,
    SparseAmplitudeState,
    apply_word,
    as_registers,
    diagonal_elements,
)


def _ceil_scaled(p: Fraction, beta: int) -> int:
    return -((-p.numerator << beta) // p.denominator)


def row_probability(p: Profile, t: int, j: int, lam: YoungDiagram, *, k: int, r: int) -> Fraction:
    """Probability that box ``t+1`` goes to row ``j`` given profile ``p`` after ``t`` boxes."""
    n = lam.n
    if not 0 <= t < n:
        raise ValueError(f"step {t} outside 0..{n - 1}")
    if not 1 <= j <= r:
        raise ValueError(f"row {j} outside 1..{r}")
    total = completion_count(p, lam, n - t, k=k, r=r)
    if total == 0:
        raise ValueError(f"profile {p} after {t} boxes cannot complete to {lam}")
    q = add_box(p, j, k, r)
    if q is None:
        return Fraction(0)
    return Fraction(completion_count(q, lam, n - t - 1, k=k, r=r), total)


def _support(lam: YoungDiagram, k: int, r: int) -> list[tuple[Profile, int]]:
    graph = profile_graph(k, r)
    start = empty_profile(r)
    out = []
    for t in range(lam.n):
        for p in graph.profiles:
            if graph.walks(start, p, t) and completion_count(p, lam, lam.n - t, k=k, r=r):
                out.append((p, t))
    return out


@dataclass(frozen=True, eq=False)
class RowCutoffTable:
    """Rounded cumulative cutoffs ``C_j = ceil(2^beta F_j)`` per (profile, step).

    Box ``t+1`` goes to row ``j`` iff ``C_{j-1} <= r_{t+1} < C_j`` with ``C_0 = 0``.
    """

    n: int
    k: int
    r: int
    beta: int
    lam: YoungDiagram
    cutoffs: dict[tuple[Profile, int, int], int] = field(repr=False)
    grid: np.ndarray = field(repr=False)
    row_lengths: np.ndarray = field(repr=False)

    @property
    def scale(self) -> int:
        return 1 << self.beta

    def interval(self, p: Profile, t: int, j: int) -> tuple[int, int]:
        lo = 0 if j == 1 else self.cutoffs[(p, t, j - 1)]
        return lo, self.cutoffs[(p, t, j)]

    def states(self) -> list[tuple[Profile, int]]:
        return sorted({(p, t) for p, t, _ in self.cutoffs}, key=lambda s: (s[1], s[0]))

    def to_dict(self) -> dict:
        rows = [{"profile": list(p), "t": t, "j": j, "c": self.cutoffs[(p, t, j)]}
                for p, t in self.states() for j in range(1, self.r + 1)]
        return {"n": self.n, "k": self.k, "r": self.r, "beta": self.beta,
                "lambda": list(self.lam.rows), "cutoffs": rows}


def build_row_cutoffs(lam: YoungDiagram, k: int, r: int, beta: int) -> RowCutoffTable:
    return _build_row_cutoffs(lam, k, r, beta)


@lru_cache(maxsize=256)
def _build_row_cutoffs(lam: YoungDiagram, k: int, r: int, beta: int) -> RowCutoffTable:
    _check_kr(k, r)
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if lam.n < 1 or not tableau_count(lam, k, r):
        raise ValueError(f"{lam} has no admissible tableaux for k={k}, r={r}")
    n = lam.n
    graph = profile_graph(k, r)
    cutoffs: dict[tuple[Profile, int, int], int] = {}
    # unreachable cells keep a single full-width row 1 so decoding stays total
    grid = np.zeros((n, len(graph.profiles), r + 1), dtype=np.int64)
    grid[:, :, 1:] = 1 << beta
    lengths = np.zeros((n, len(graph.profiles), r + 1), dtype=np.int64)
    for p, t in _support(lam, k, r):
        pi = graph.index[p]
        acc = Fraction(0)
        for j in range(1, r + 1):
            acc += row_probability(p, t, j, lam, k=k, r=r)
            c = _ceil_scaled(acc, beta)
            cutoffs[(p, t, j)] = c
            grid[t, pi, j] = c
        last = (t - profile_box_count(p)) // r
        for j in range(r, 0, -1):
            lengths[t, pi, j] = last + sum(p[j - 1:])
    grid.setflags(write=False)
    lengths.setflags(write=False)
    return RowCutoffTable(n, k, r, beta, lam, cutoffs, grid, lengths)


def decode_rows(regs: np.ndarray, table: RowCutoffTable) -> np.ndarray:
    """Row sequence decoded from each row of an ``(N, n)`` register array."""
    kernel = jw_kernel(table)
    regs = np.asarray(regs, dtype=np.int64)
    ctx = np.full(len(regs), kernel.start, dtype=np.int64)
    out = np.empty((len(regs), table.n), dtype=np.int64)
    for t in range(table.n):
        out[:, t] = kernel.row(t, ctx, regs[:, t])
        ctx = kernel.succ[ctx, out[:, t]]
    return out


def decode_tableau(x, table: RowCutoffTable) -> StandardTableau:
    regs = np.array([as_registers(x, table.n, table.beta)])
    return StandardTableau(tuple(int(j) for j in decode_rows(regs, table)[0]))


def decoded_distribution(table: RowCutoffTable) -> dict[tuple[int, ...], Fraction]:
    """Exact probability of each tableau when all bits are uniform."""
    out = {}
    for rows in _tableau_rows(table.lam, table.k, table.r):
        prob = Fraction(1)
        p = empty_profile(table.r)
        for t, j in enumerate(rows):
            lo, hi = table.interval(p, t, j)
            prob *= Fraction(hi - lo, table.scale)
            p = add_box(p, j, table.k, table.r)
        out[rows] = prob
    return out


def rounding_distance(table: RowCutoffTable) -> Fraction:
    uni = Fraction(1, tableau_count(table.lam, table.k, table.r))
    return sum((abs(p - uni) for p in decoded_distribution(table).values()), Fraction(0))


# ---------------------------------------------------------------- crossings


@dataclass(frozen=True)
class MatchingBlock:
    """Pairing between strings encoding rows ``rows`` and ``swapped`` at one crossing.

    Each side is a rectangle ``[lo_a, hi_a) x [lo_b, hi_b)`` of register values
    ``(r_i, r_{i+1})``; the first ``matched`` ranks in lexicographic order pair up.
    """

    rows: tuple[int, int]
    swapped: tuple[int, int]
    side: tuple[tuple[int, int], tuple[int, int]]
    partner_side: tuple[tuple[int, int], tuple[int, int]]

    @staticmethod
    def _size(rect) -> int:
        (a0, a1), (b0, b1) = rect
        return (a1 - a0) * (b1 - b0)

    @property
    def matched(self) -> int:
        return min(self._size(self.side), self._size(self.partner_side))

    @property
    def stuck(self) -> int:
        return self._size(self.side) - self.matched

    def partner(self, ra: int, rb: int) -> tuple[int, int] | None:
        (a0, _), (b0, b1) = self.side
        label = (ra - a0) * (b1 - b0) + (rb - b0)
        if label >= self.matched:
            return None
        (c0, _), (d0, d1) = self.partner_side
        q, m = divmod(label, d1 - d0)
        return c0 + q, d0 + m

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "swapped": list(self.swapped),
                "side": [list(x) for x in self.side], "partner_side": [list(x) for x in self.partner_side],
                "matched": self.matched, "stuck": self.stuck}


@dataclass(frozen=True)
class MatchingTable:
    i: int
    profile: Profile
    blocks: dict[tuple[int, int], MatchingBlock]

    def partner(self, ra: int, rb: int) -> tuple[int, int] | None:
        for block in self.blocks.values():
            (a0, a1), (b0, b1) = block.side
            if a0 <= ra < a1 and b0 <= rb < b1:
                return block.partner(ra, rb)
        return None

    def stuck_count(self) -> int:
        return sum(b.stuck for b in self.blocks.values())

    def to_dict(self) -> dict:
        return {"i": self.i, "profile": list(self.profile),
                "blocks": [self.blocks[key].to_dict() for key in sorted(self.blocks)]}


def build_matching(table: RowCutoffTable, i: int, profile: Profile) -> MatchingTable:
    """Matchings for crossing ``i`` when the first ``i-1`` boxes have profile ``profile``."""
    k, r = table.k, table.r
    if not 1 <= i <= table.n - 1:
        raise ValueError(f"crossing position {i} outside 1..{table.n - 1}")
    if (profile, i - 1, 1) not in table.cutoffs:
        raise ValueError(f"profile {profile} is not reachable after {i - 1} boxes")

    def rect(j1: int, j2: int):
        q = add_box(profile, j1, k, r)
        if q is None or (q, i, 1) not in table.cutoffs or add_box(q, j2, k, r) is None:
            return None
        return table.interval(profile, i - 1, j1), table.interval(q, i, j2)

    blocks = {}
    for j1 in range(1, r + 1):
        for j2 in range(1, r + 1):
            if j1 == j2:
                continue
            side, other = rect(j1, j2), rect(j2, j1)
            if side is None or other is None:
                continue
            if MatchingBlock._size(side) or MatchingBlock._size(other):
                blocks[(j1, j2)] = MatchingBlock((j1, j2), (j2, j1), side, other)
    return MatchingTable(i, profile, blocks)


@lru_cache(maxsize=None)
def _jw_coefficients(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal entries indexed by ``d + k``."""
    diag = np.zeros(2 * k + 1, dtype=complex)
    off = np.zeros(2 * k + 1, dtype=complex)
    for d in range(-(k - 1), k):
        if d:
            diag[d + k] = jw_diagonal(d, k)
            off[d + k] = jw_offdiagonal(d, k)
    return diag, off


class JWKernel(Kernel):
    """Encoded crossing operators for one diagram at one precision.

    The decoding context is the index of the current profile.
    """

    def __init__(self, table: RowCutoffTable):
        self.table = table
        self.n = table.n
        self.beta = table.beta
        graph = profile_graph(table.k, table.r)
        self.num_contexts = len(graph.profiles)
        self.start = graph.index[empty_profile(table.r)]
        # successor[c, j]; inadmissible moves point back at c and are never decoded
        succ = np.array(graph.successor, dtype=np.int64)
        own = np.arange(len(succ))[:, None]
        self.succ = np.where(succ < 0, own, succ)
        self.admissible = succ >= 0

    def row(self, t, ctx, r):
        cuts = self.table.grid[t, ctx]
        return 1 + np.sum(cuts[..., 1:-1] <= np.asarray(r)[..., None], axis=-1)

    def step(self, t, ctx, r):
        return self.succ[ctx, self.row(t, ctx, r)]

    def segment(self, i, ctx, ra, rb):
        ctx, ra, rb = np.broadcast_arrays(np.asarray(ctx, np.int64), np.asarray(ra, np.int64), np.asarray(rb, np.int64))
        tab = self.table
        grid, k = tab.grid, tab.k
        j1 = self.row(i - 1, ctx, ra)
        mid = self.succ[ctx, j1]
        j2 = self.row(i, mid, rb)
        lengths = tab.row_lengths[i - 1]
        col1 = lengths[ctx, j1] + 1
        col2 = lengths[ctx, j2] + 1 + (j2 == j1)
        d = col1 - col2 - (j1 - j2)

        alt = self.succ[ctx, j2]
        has_partner = (j1 != j2) & self.admissible[ctx, j2] & self.admissible[alt, j1]

        lo1, hi1 = grid[i - 1, ctx, j1 - 1], grid[i - 1, ctx, j1]
        lo2, hi2 = grid[i, mid, j2 - 1], grid[i, mid, j2]
        plo1, phi1 = grid[i - 1, ctx, j2 - 1], grid[i - 1, ctx, j2]
        plo2, phi2 = grid[i, alt, j1 - 1], grid[i, alt, j1]
        w2, pw2 = hi2 - lo2, phi2 - plo2
        m = np.minimum((hi1 - lo1) * w2, (phi1 - plo1) * pw2)
        label = (ra - lo1) * w2 + (rb - lo2)
        matched = has_partner & (label < m)
        stuck = has_partner & (label >= m)
        safe = np.maximum(pw2, 1)
        pa = plo1 + label // safe
        pb = plo2 + label % safe

        diag, off = _jw_coefficients(k)
        di = np.clip(d + k, 0, 2 * k)
        stay = np.where(stuck, 1.0 + 0j, diag[di])
        move = np.where(matched, off[di], 0j)
        return stay, move, matched, pa, pb, stuck

    def stuck_pairs(self, i, ctx):
        profile = profile_graph(self.table.k, self.table.r).profiles[int(ctx)]
        if (profile, i - 1, 1) not in self.table.cutoffs:
            return 0
        return build_matching(self.table, i, profile).stuck_count()


def jw_kernel(table: RowCutoffTable) -> JWKernel:
    return _jw_kernel(table.lam, table.k, table.r, table.beta)


@lru_cache(maxsize=64)
def _jw_kernel(lam: YoungDiagram, k: int, r: int, beta: int) -> JWKernel:
    return JWKernel(build_row_cutoffs(lam, k, r, beta))


def apply_encoded_crossing_jw(state: SparseAmplitudeState, i: int, sign: int, table: RowCutoffTable,
                              matching: MatchingTable | None = None) -> SparseAmplitudeState:
    """Apply the encoded ``sigma_i^sign``.

    The pairing is the canonical lexicographic one; a ``matching`` passed in is
    only checked for agreement with the crossing position.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if (state.n, state.beta) != (table.n, table.beta):
        raise ValueError("state and table disagree on n or beta")
    if matching is not None and matching.i != i:
        raise ValueError(f"matching is for crossing {matching.i}, not {i}")
    return apply_word(jw_kernel(table), state, (sign * i,))


def apply_encoded_braid_jw(state: SparseAmplitudeState, b: BraidWord, table: RowCutoffTable) -> SparseAmplitudeState:
    if b.strands != table.n:
        raise ValueError(f"braid has {b.strands} strands, table expects {table.n}")
    return apply_word(jw_kernel(table), state, b.letters)


def stuck_mask_jw(keys: np.ndarray, table: RowCutoffTable, positions=None) -> np.ndarray:
    return jw_kernel(table).stuck_mask(np.asarray(keys), positions)


def encoded_diagonal_jw(starts: np.ndarray, b: BraidWord, table: RowCutoffTable) -> np.ndarray:
    return diagonal_elements(jw_kernel(table), starts, b.letters)


def encoded_normalized_trace_jw(b: BraidWord, lam: YoungDiagram, k: int, r: int, beta: int) -> complex:
    """``2^{-n beta} sum_x <x|U_JW(b)|x>`` by exhaustive summation."""
    if b.strands != lam.n:
        raise ValueError(f"braid has {b.strands} strands but {lam} has {lam.n} boxes")
    if lam.n * beta > EXACT_MODE_MAX_BITS:
        raise ValueError(f"exact mode needs n*beta <= {EXACT_MODE_MAX_BITS}, got {lam.n * beta}")
    return jw_kernel(build_row_cutoffs(lam, k, r, beta)).exhaustive_trace(b.letters)


def stuck_fraction_jw(lam: YoungDiagram, k: int, r: int, beta: int) -> Fraction:
    kernel = jw_kernel(build_row_cutoffs(lam, k, r, beta))
    return 1 - Fraction(kernel.unstuck_count(), 1 << (lam.n * beta))


def exact_normalized_trace_jw(b: BraidWord, lam: YoungDiagram, k: int, r: int) -> complex:
    return complex(np.trace(jw_braid(b, lam, k, r)) / tableau_count(lam, k, r))


def profile_after(rows, k: int, r: int) -> Profile:
    p = empty_profile(r)
    for j in rows:
        p = add_box(p, j, k, r)
        if p is None:
            raise ValueError(f"row sequence {tuple(rows)} is inadmissible")
    return p


__all__ = [
    "MatchingBlock",
    "MatchingTable",
    "RowCutoffTable",
    "apply_encoded_braid_jw",
    "apply_encoded_crossing_jw",
    "build_matching",
    "build_row_cutoffs",
    "decode_rows",
    "decode_tableau",
    "decoded_distribution",
    "encoded_diagonal_jw",
    "encoded_normalized_trace_jw",
    "exact_normalized_trace_jw",
    "jw_kernel",
    "profile_after",
    "profile_of",
    "rounding_distance",
    "row_probability",
    "stuck_fraction_jw",
    "stuck_mask_jw",
]
