"""Jones-Wenzl representation on standard Young tableaux and the HOMFLY value.

A tableau is stored as its row-assignment sequence: ``rows[t]`` is the row
(1-based) receiving box ``t+1``. Walks of this kind are exactly walks on
*profiles* ``(b1-b2, ..., b_{r-1}-b_r)`` of the growing diagram, and the
admissibility bound ``b1 - b_r <= k - r`` is the profile sum bound.

Bases are ordered lexicographically in the row-assignment sequence.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from ._exact import PowerCache
from .braid import BraidWord, exponent_sum

Profile = tuple[int, ...]


def _check_kr(k: int, r: int) -> None:
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if k <= r:
        raise ValueError(f"need k > r, got k={k}, r={r}")


@dataclass(frozen=True)
class YoungDiagram:
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(x) for x in self.rows)
        if any(x <= 0 for x in rows):
            raise ValueError(f"row lengths must be positive: {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"row lengths must be weakly decreasing: {rows}")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    def padded(self, r: int) -> tuple[int, ...]:
        if len(self.rows) > r:
            raise ValueError(f"{self.rows} has more than {r} rows")
        return self.rows + (0,) * (r - len(self.rows))

    def boxes(self):
        """(row, column) pairs, both 1-based."""
        for i, length in enumerate(self.rows, start=1):
            for j in range(1, length + 1):
                yield i, j

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.rows)) + ")"


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(x) for x in self.rows)
        counts: dict[int, int] = {}
        for j in rows:
            if j < 1:
                raise ValueError(f"row indices are 1-based, got {j}")
            if j > 1 and counts.get(j, 0) >= counts.get(j - 1, 0):
                raise ValueError(f"adding a box to row {j} breaks the diagram in {rows}")
            counts[j] = counts.get(j, 0) + 1
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> YoungDiagram:
        r = max(self.rows, default=0)
        return YoungDiagram(tuple(self.rows.count(j) for j in range(1, r + 1)))

    def coordinates(self) -> list[tuple[int, int]]:
        """(row, column) of each box in insertion order, 1-based."""
        counts: dict[int, int] = {}
        out = []
        for j in self.rows:
            counts[j] = counts.get(j, 0) + 1
            out.append((j, counts[j]))
        return out

    def swapped(self, i: int) -> tuple[int, ...]:
        rows = list(self.rows)
        rows[i - 1], rows[i] = rows[i], rows[i - 1]
        return tuple(rows)

    def is_admissible(self, k: int, r: int) -> bool:
        lengths = [0] * r
        for j in self.rows:
            if j > r:
                return False
            lengths[j - 1] += 1
            if lengths[0] - lengths[-1] > k - r:
                return False
        return True


def profile_of(obj, r: int) -> Profile:
    """Consecutive row-length differences ``(b1-b2, ..., b_{r-1}-b_r)``.

    Accepts a :class:`YoungDiagram`, a :class:`StandardTableau` (its final
    shape) or a sequence of row lengths.
    """
    if isinstance(obj, StandardTableau):
        obj = obj.shape
    rows = obj.padded(r) if isinstance(obj, YoungDiagram) else tuple(obj) + (0,) * (r - len(obj))
    return tuple(rows[j] - rows[j + 1] for j in range(r - 1))


def profile_box_count(p: Profile) -> int:
    """Fewest boxes of any diagram with profile ``p`` (no full columns)."""
    return sum((j + 1) * c for j, c in enumerate(p))


def add_box(p: Profile, j: int, k: int, r: int) -> Profile | None:
    """Profile after adding a box to row ``j``; None if inadmissible."""
    c = list(p)
    if j == 1:
        if sum(c) + 1 > k - r:
            return None
        c[0] += 1
        return tuple(c)
    if c[j - 2] == 0:
        return None
    c[j - 2] -= 1
    if j < r:
        c[j - 1] += 1
    return tuple(c)


@lru_cache(maxsize=None)
def allowed_profiles(k: int, r: int) -> tuple[Profile, ...]:
    _check_kr(k, r)
    bound = k - r
    return tuple(p for p in product(range(bound + 1), repeat=r - 1) if sum(p) <= bound)


class ProfileGraph:
    """Directed graph of allowed profiles; an edge adds one box."""

    def __init__(self, k: int, r: int):
        _check_kr(k, r)
        self.k, self.r = k, r
        self.profiles = allowed_profiles(k, r)
        self.index = {p: i for i, p in enumerate(self.profiles)}
        m = len(self.profiles)
        self.successor = [[-1] * (r + 1) for _ in range(m)]
        adj = [[0] * m for _ in range(m)]
        for i, p in enumerate(self.profiles):
            for j in range(1, r + 1):
                q = add_box(p, j, k, r)
                if q is not None:
                    self.successor[i][j] = self.index[q]
                    adj[i][self.index[q]] += 1
        self.powers = PowerCache(adj)

    def walks(self, src: Profile, dst: Profile, steps: int) -> int:
        return self.powers[steps][self.index[src]][self.index[dst]]


@lru_cache(maxsize=None)
def profile_graph(k: int, r: int) -> ProfileGraph:
    return ProfileGraph(k, r)


def completion_count(p: Profile, lam: YoungDiagram, steps: int, *, k: int, r: int) -> int:
    """Admissible box-addition walks of length ``steps`` from ``p`` to lam's profile."""
    graph = profile_graph(k, r)
    target = profile_of(lam, r)
    if p not in graph.index or target not in graph.index:
        return 0
    return graph.walks(p, target, steps)


def empty_profile(r: int) -> Profile:
    return (0,) * (r - 1)


def tableau_count(lam: YoungDiagram, k: int, r: int) -> int:
    """``|T^(lam)_{n,k,r}|`` via profile-graph walks from the empty profile."""
    return completion_count(empty_profile(r), lam, lam.n, k=k, r=r)


def _partitions(n: int, max_parts: int, max_part: int | None = None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _diagrams(n: int, k: int, r: int) -> tuple[YoungDiagram, ...]:
    out = []
    for rows in _partitions(n, r):
        lam = YoungDiagram(rows)
        padded = lam.padded(r)
        if padded[0] - padded[-1] > k - r:
            continue
        if tableau_count(lam, k, r) > 0:
            out.append(lam)
    return tuple(out)


def enumerate_diagrams(n: int, k: int, r: int) -> list[YoungDiagram]:
    """Admissible n-box diagrams, rows in decreasing lexicographic order."""
    _check_kr(k, r)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return list(_diagrams(n, k, r))


@lru_cache(maxsize=None)
def _tableau_rows(lam: YoungDiagram, k: int, r: int) -> tuple[tuple[int, ...], ...]:
    n = lam.n
    graph = profile_graph(k, r)
    target = profile_of(lam, r)
    if target not in graph.index:
        return ()
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def walk(p: Profile):
        left = n - len(prefix)
        if left == 0:
            out.append(tuple(prefix))
            return
        for j in range(1, r + 1):
            q = add_box(p, j, k, r)
            if q is not None and graph.walks(q, target, left - 1):
                prefix.append(j)
                walk(q)
                prefix.pop()

    if graph.walks(empty_profile(r), target, n):
        walk(empty_profile(r))
    return tuple(out)


def enumerate_tableaux(lam: YoungDiagram, k: int, r: int) -> list[StandardTableau]:
    _check_kr(k, r)
    return [StandardTableau(rows) for rows in _tableau_rows(lam, k, r)]


def axial_distance(tab: StandardTableau, i: int) -> int:
    """``c_i - c_{i+1} - (r_i - r_{i+1})`` for boxes i and i+1 (1-based)."""
    if not 1 <= i <= tab.n - 1:
        raise ValueError(f"box index {i} outside 1..{tab.n - 1}")
    coords = tab.coordinates()
    (ri, ci), (rj, cj) = coords[i - 1], coords[i]
    return ci - cj - (ri - rj)


def jw_diagonal(d: int, k: int) -> complex:
    return -cmath.exp(1j * math.pi * (1 - d) / k) * math.sin(math.pi / k) / math.sin(math.pi * d / k)


def jw_offdiagonal(d: int, k: int) -> complex:
    if (d - 1) % k == 0 or (d + 1) % k == 0:
        # |sin(pi d/k)| = sin(pi/k) exactly; keep the zero exact
        return 0j
    ratio = math.sin(math.pi / k) / math.sin(math.pi * d / k)
    inside = 1.0 - ratio * ratio
    if inside < 0:
        if inside < -1e-12:
            raise AssertionError(f"|sin(pi/k)/sin(pi d/k)| > 1 for d={d}, k={k}")
        inside = 0.0
    return -cmath.exp(1j * math.pi / k) * math.sqrt(inside)


def _check_axial(d: int, k: int) -> None:
    if d == 0 or abs(d) > k - 1:
        raise AssertionError(f"axial distance {d} outside the admissible range for k={k}")


def jw_generator(lam: YoungDiagram, k: int, r: int, i: int, sign: int = 1) -> np.ndarray:
    """pi^(lam)_{n,k,r}(sigma_i^sign); columns are images of basis tableaux."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    mat = _jw_generator(lam, k, r, i)
    return mat.copy() if sign == 1 else mat.conj().T


@lru_cache(maxsize=None)
def _jw_generator(lam: YoungDiagram, k: int, r: int, i: int) -> np.ndarray:
    _check_kr(k, r)
    if not 1 <= i <= lam.n - 1:
        raise ValueError(f"generator index {i} outside 1..{lam.n - 1}")
    basis = _tableau_rows(lam, k, r)
    index = {rows: j for j, rows in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, rows in enumerate(basis):
        tab = StandardTableau(rows)
        d = axial_distance(tab, i)
        _check_axial(d, k)
        mat[col, col] = jw_diagonal(d, k)
        off = jw_offdiagonal(d, k)
        swapped = tab.swapped(i)
        row = None if swapped == rows else index.get(swapped)
        if row is not None:
            mat[row, col] = off
        elif abs(off) >= 1e-12:
            raise AssertionError(
                f"swapped tableau of {rows} at {i} is inadmissible but coefficient is {abs(off):.3g}"
            )
    mat.setflags(write=False)
    return mat


def jw_braid(b: BraidWord, lam: YoungDiagram, k: int, r: int) -> np.ndarray:
    dim = tableau_count(lam, k, r)
    out = np.eye(dim, dtype=complex)
    for g in b.letters:
        mat = _jw_generator(lam, k, r, abs(g))
        out = out @ (mat if g > 0 else mat.conj().T)
    return out


def hook_lengths(lam: YoungDiagram) -> dict[tuple[int, int], int]:
    cols = [sum(1 for x in lam.rows if x >= j) for j in range(1, (lam.rows[0] if lam.rows else 0) + 1)]
    return {(i, j): (lam.rows[i - 1] - j) + (cols[j - 1] - i) + 1 for i, j in lam.boxes()}


def schur_weight(lam: YoungDiagram, k: int, r: int, n: int | None = None) -> float:
    """Markov-trace weight of the sector ``lam``."""
    _check_kr(k, r)
    if n is None:
        n = lam.n
    w = (math.sin(math.pi / k) / math.sin(math.pi * r / k)) ** n
    for (i, j), hook in hook_lengths(lam).items():
        w *= math.sin(math.pi * (j - i + r) / k) / math.sin(math.pi * hook / k)
    return w


def sector_distribution(n: int, k: int, r: int) -> list[tuple[YoungDiagram, int, float, float]]:
    """Rows ``(lam, |T^(lam)|, S^(lam), p(lam))`` over admissible diagrams."""
    rows = []
    for lam in enumerate_diagrams(n, k, r):
        size = tableau_count(lam, k, r)
        rows.append((lam, size, schur_weight(lam, k, r, n)))
    total = sum(size * s for _, size, s in rows)
    return [(lam, size, s, size * s / total) for lam, size, s in rows]


@lru_cache(maxsize=None)
def _block_generators(n: int, k: int, r: int) -> tuple[dict[int, np.ndarray], np.ndarray]:
    """Block-diagonal ``pi(sigma_i^{+-1})`` over all diagrams, and the weight diagonal."""
    lams = enumerate_diagrams(n, k, r)
    diag = np.concatenate([np.full(tableau_count(lam, k, r), schur_weight(lam, k, r, n)) for lam in lams])
    gens = {}
    for i in range(1, n):
        full = np.zeros((len(diag), len(diag)), dtype=complex)
        at = 0
        for lam in lams:
            m = _jw_generator(lam, k, r, i)
            full[at:at + len(m), at:at + len(m)] = m
            at += len(m)
        gens[i] = full
        gens[-i] = np.ascontiguousarray(full.conj().T)
    for m in (*gens.values(), diag):
        m.setflags(write=False)
    return gens, diag


def markov_trace_jw(b: BraidWord, k: int, r: int) -> complex:
    _check_kr(k, r)
    gens, diag = _block_generators(b.strands, k, r)
    if not b.letters:
        return complex(diag.sum())
    out = gens[b.letters[0]]
    for g in b.letters[1:]:
        out = out @ gens[g]
    return complex(diag @ np.diagonal(out))


def homfly_prefactor(b: BraidWord, k: int, r: int) -> complex:
    _check_kr(k, r)
    ratio = math.sin(math.pi * r / k) / math.sin(math.pi / k)
    return ratio ** (b.strands - 1) * cmath.exp(-1j * (r + 1) * exponent_sum(b) * math.pi / k)


def homfly_value(b: BraidWord, k: int, r: int) -> complex:
    """Single-variable HOMFLY (sl_r) value of the trace closure at exp(2 pi i/k)."""
    return homfly_prefactor(b, k, r) * markov_trace_jw(b, k, r)


def path_to_rows(steps: Sequence[int]) -> tuple[int, ...]:
    """r=2 bijection: an up step adds to row 1, a down step to row 2."""
    return tuple(1 if s == 0 else 2 for s in steps)


def diagram_for_rung(n: int, h: int) -> YoungDiagram:
    """Two-row diagram whose first-minus-second row length is ``h - 1``."""
    b2, rem = divmod(n - (h - 1), 2)
    if rem or b2 < 0:
        raise ValueError(f"no {n}-box two-row diagram ends on rung {h}")
    return YoungDiagram(tuple(x for x in (b2 + h - 1, b2) if x > 0))
