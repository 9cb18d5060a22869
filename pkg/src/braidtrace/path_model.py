"""Path-model representation of the braid group at t = exp(2 pi i / k).

Basis vectors are walks of ``n`` steps on a ladder with rungs ``1..k-1``
starting at rung 1. The generator sigma_i only looks at steps i and i+1
and the rung ``l`` they start from.

Bases are ordered lexicographically in the step sequence with up < down.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._exact import PowerCache
from .braid import BraidWord, writhe

UP = 0
DOWN = 1


@dataclass(frozen=True)
class LadderPath:
    k: int
    steps: tuple[int, ...]

    def __post_init__(self):
        rung = 1
        for s in self.steps:
            if s not in (UP, DOWN):
                raise ValueError(f"steps must be UP(0) or DOWN(1), got {s!r}")
            rung += 1 if s == UP else -1
            if not 1 <= rung <= self.k - 1:
                raise ValueError(f"path leaves the ladder of {self.k - 1} rungs")

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def rungs(self) -> tuple[int, ...]:
        out = [1]
        for s in self.steps:
            out.append(out[-1] + (1 if s == UP else -1))
        return tuple(out)

    @property
    def end(self) -> int:
        return self.rungs[-1]

    def __str__(self) -> str:
        return "".join("u" if s == UP else "d" for s in self.steps)


def _check_k(k: int) -> None:
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")


def _check_rung(k: int, a: int) -> None:
    if not 1 <= a <= k - 1:
        raise ValueError(f"rung {a} outside 1..{k - 1}")


_LADDERS: dict[int, PowerCache] = {}


def _ladder(k: int) -> PowerCache:
    cache = _LADDERS.get(k)
    if cache is None:
        m = k - 1
        adj = [[int(abs(i - j) == 1) for j in range(m)] for i in range(m)]
        cache = _LADDERS.setdefault(k, PowerCache(adj))
    return cache


def completions(k: int, s: int, a: int, h: int) -> int:
    """Like :func:`path_count` but rungs off the ladder (0 or k) count zero."""
    if not (1 <= a <= k - 1 and 1 <= h <= k - 1) or s < 0:
        return 0
    return _ladder(k)[s][a - 1][h - 1]


def path_count(k: int, s: int, a: int, a2: int) -> int:
    """Number of ``s``-step walks from rung ``a`` to rung ``a2`` (exact)."""
    _check_k(k)
    if s < 0:
        raise ValueError(f"step count must be >= 0, got {s}")
    _check_rung(k, a)
    _check_rung(k, a2)
    return _ladder(k)[s][a - 1][a2 - 1]


def sector_size(n: int, k: int, h: int) -> int:
    """``|Omega_{n,k,h}|``."""
    return completions(k, n, 1, h)


def enumerate_paths(n: int, k: int, h: int) -> list[LadderPath]:
    _check_k(k)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _check_rung(k, h)
    return [LadderPath(k, steps) for steps in _path_steps(n, k, h)]


@lru_cache(maxsize=None)
def _path_steps(n: int, k: int, h: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def walk(prefix: list[int], rung: int):
        left = n - len(prefix)
        if left == 0:
            out.append(tuple(prefix))
            return
        for step, nxt in ((UP, rung + 1), (DOWN, rung - 1)):
            if completions(k, left - 1, nxt, h):
                prefix.append(step)
                walk(prefix, nxt)
                prefix.pop()

    if completions(k, n, 1, h):
        walk([], 1)
    return tuple(out)


@lru_cache(maxsize=None)
def _path_index(n: int, k: int, h: int) -> dict[tuple[int, ...], int]:
    return {steps: i for i, steps in enumerate(_path_steps(n, k, h))}


def bracket_A(k: int) -> complex:
    """``A = i exp(-i pi / 2k)``."""
    return 1j * cmath.exp(-1j * math.pi / (2 * k))


def rung_weight(k: int, l: int) -> float:
    """``lambda_l = sin(pi l / k)``; exactly zero at the ladder ends."""
    if l <= 0 or l >= k:
        return 0.0
    return math.sin(math.pi * l / k)


@dataclass(frozen=True)
class CrossingCoefficients:
    """Action of sigma_i on a two-step segment starting at rung ``l``.

    ``a``/``b``: up-down goes to ``a`` up-down + ``b`` down-up.
    ``c``/``d``: down-up goes to ``c`` down-up + ``d`` up-down.
    ``e``/``f``: phases on up-up and down-down.
    ``b`` and ``d`` are zero where the partner segment would leave the ladder.
    """

    l: int
    k: int
    A: complex
    lam: float
    a: complex
    b: complex
    c: complex
    d: complex
    e: complex
    f: complex

    def block(self) -> np.ndarray:
        """2x2 matrix in the (up-down, down-up) basis, columns are images."""
        return np.array([[self.a, self.d], [self.b, self.c]], dtype=complex)


@lru_cache(maxsize=None)
def crossing_coefficients(l: int, k: int) -> CrossingCoefficients:
    _check_k(k)
    _check_rung(k, l)
    A = bracket_A(k)
    lam = rung_weight(k, l)
    lam_up = rung_weight(k, l + 1)
    lam_dn = rung_weight(k, l - 1)
    off = A * math.sqrt(lam_up * lam_dn) / lam
    return CrossingCoefficients(
        l=l,
        k=k,
        A=A,
        lam=lam,
        a=1 / A + A * lam_up / lam,
        b=off,
        c=1 / A + A * lam_dn / lam,
        d=off,
        e=1 / A,
        f=1 / A,
    )


def generator_matrix(n: int, k: int, h: int, i: int) -> np.ndarray:
    """Matrix of rho_{n,k,h}(sigma_i); columns are images of basis paths."""
    _check_k(k)
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} outside 1..{n - 1}")
    return _generator_matrix(n, k, h, i)


@lru_cache(maxsize=None)
def _generator_matrix(n: int, k: int, h: int, i: int) -> np.ndarray:
    basis = _path_steps(n, k, h)
    index = _path_index(n, k, h)
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, steps in enumerate(basis):
        l = 1 + sum(1 if s == UP else -1 for s in steps[: i - 1])
        co = crossing_coefficients(l, k)
        pair = steps[i - 1 : i + 1]
        if pair == (UP, UP):
            mat[col, col] = co.e
        elif pair == (DOWN, DOWN):
            mat[col, col] = co.f
        else:
            swapped = steps[: i - 1] + pair[::-1] + steps[i + 1 :]
            if pair == (UP, DOWN):
                mat[col, col] = co.a
                off = co.b
            else:
                mat[col, col] = co.c
                off = co.d
            row = index.get(swapped)
            if row is not None:
                mat[row, col] = off
            elif abs(off) > 1e-12:
                raise AssertionError("nonzero coefficient towards a path off the ladder")
    mat.setflags(write=False)
    return mat


def rep_generator(n: int, k: int, h: int, i: int, sign: int = 1) -> np.ndarray:
    """rho_{n,k,h}(sigma_i^sign); the inverse is the conjugate transpose."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    mat = generator_matrix(n, k, h, i)
    return mat.copy() if sign == 1 else mat.conj().T


def rep_braid(b: BraidWord, k: int, h: int) -> np.ndarray:
    """rho_{n,k,h}(b) as the ordered product of generator matrices."""
    n = b.strands
    dim = sector_size(n, k, h)
    out = np.eye(dim, dtype=complex)
    for g in b.letters:
        mat = generator_matrix(n, k, h, abs(g))
        out = out @ (mat if g > 0 else mat.conj().T)
    return out


def sector_weights(n: int, k: int) -> dict[int, float]:
    """``lambda_h |Omega_{n,k,h}|`` for every nonempty sector ``h``."""
    _check_k(k)
    out = {}
    for h in range(1, k):
        size = sector_size(n, k, h)
        if size:
            out[h] = rung_weight(k, h) * size
    return out


@lru_cache(maxsize=None)
def _block_generators(n: int, k: int) -> tuple[dict[int, np.ndarray], np.ndarray]:
    """All sectors at once: block-diagonal ``rho(sigma_i^{+-1})`` keyed by signed
    ``i``, and the diagonal of normalized Markov-trace weights."""
    weights = sector_weights(n, k)
    total = sum(weights.values())
    hs = sorted(weights)
    diag = np.concatenate([np.full(sector_size(n, k, h), rung_weight(k, h) / total) for h in hs])
    gens = {}
    for i in range(1, n):
        blocks = [generator_matrix(n, k, h, i) for h in hs]
        full = np.zeros((len(diag), len(diag)), dtype=complex)
        at = 0
        for m in blocks:
            full[at:at + len(m), at:at + len(m)] = m
            at += len(m)
        gens[i] = full
        gens[-i] = np.ascontiguousarray(full.conj().T)
    for m in (*gens.values(), diag):
        m.setflags(write=False)
    return gens, diag


def markov_trace_path(b: BraidWord, k: int) -> complex:
    _check_k(k)
    gens, diag = _block_generators(b.strands, k)
    if not b.letters:
        return complex(diag.sum())
    out = gens[b.letters[0]]
    for g in b.letters[1:]:
        out = out @ gens[g]
    return complex(diag @ np.diagonal(out))


def jones_prefactor(b: BraidWord, k: int) -> complex:
    """``(-i e^{i pi/2k})^{3w} (-2 cos(pi/k))^{n-1}``."""
    _check_k(k)
    phase = -1j * cmath.exp(1j * math.pi / (2 * k))
    return phase ** (3 * writhe(b)) * (-2 * math.cos(math.pi / k)) ** (b.strands - 1)


def jones_value(b: BraidWord, k: int) -> complex:
    """Jones polynomial of the trace closure at ``t = exp(2 pi i / k)``."""
    return jones_prefactor(b, k) * markov_trace_path(b, k)
