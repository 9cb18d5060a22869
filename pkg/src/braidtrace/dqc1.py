"""One-clean-qubit estimation of normalized traces, Jones and HOMFLY values.

A run picks a sector classically, a uniformly random bitstring ``x`` for the
maximally mixed register, and reads ``<x|U|x>`` off the clean qubit. Three
modes are offered:

``exact``
    sums ``<x|U|x>`` over every bitstring (small registers only);
``monte_carlo``
    averages ``<x|U|x>`` over sampled ``x``;
``shots``
    replaces each matrix element by one +-1 clean-qubit outcome. Even sample
    indices measure the real part, odd ones the imaginary part.

Randomness comes in blocks of :data:`BLOCK_SIZE` samples, each drawn from its
own substream of the seed, so results do not depend on how blocks are spread
over threads.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import jones_wenzl as jw
from . import path_model as pm
from .braid import BraidWord
from .jw_encoding import build_row_cutoffs, jw_kernel
from .jw_encoding import rounding_distance as jw_rounding_distance
from .path_encoding import build_encoding_table, path_kernel, rounding_error_bound
from .path_encoding import rounding_distance as path_rounding_distance
from .state import EXACT_MODE_MAX_BITS, Kernel, diagonal_elements, keys_from_registers

MODES = ("exact", "monte_carlo", "shots")
BLOCK_SIZE = 4096
DEFAULT_SAMPLES = 10_000
THREADS_ENV = "BRAIDTRACE_THREADS"
# exact rounding distances are computed for sectors up to this size
_EXACT_ROUNDING_LIMIT = 20_000


class PrecisionWarning(UserWarning):
    """The rounding bound ``2 n 2^-beta`` is too loose to be useful."""


def default_beta(n: int) -> int:
    return max(4, math.ceil(math.log2(max(n, 1))) + 3)


def check_precision(n: int, beta: int) -> None:
    bound = rounding_error_bound(n, beta)
    if bound > 0.5:
        warnings.warn(f"rounding bound 2n*2^-beta = {bound:.3g} exceeds 0.5; raise beta", PrecisionWarning,
                      stacklevel=3)


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


@dataclass(frozen=True)
class RngConfig:
    """Seed plus the substream rule: block ``b`` uses ``SeedSequence(seed, spawn_key=(b,))``."""

    seed: int = 0
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")

    def generator(self, block: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(block,))))


def as_rng_config(rng) -> RngConfig:
    if isinstance(rng, RngConfig):
        return rng
    if rng is None:
        return RngConfig()
    return RngConfig(int(rng))


@dataclass(frozen=True)
class TraceEstimate:
    value: complex
    std_error: float
    samples: int
    mode: str


@dataclass(frozen=True)
class Mixture:
    """Sectors with their sampling probabilities; the estimated quantity is
    ``scale * sum_s p_s * (normalized trace in sector s)``."""

    kernels: tuple[Kernel, ...]
    probs: tuple[float, ...]
    labels: tuple = ()
    scale: float = 1.0
    rounding: tuple[float, ...] = field(default=())


def _complex_std_error(vals: np.ndarray) -> float:
    m = len(vals)
    if m < 2:
        return 0.0
    return math.sqrt((np.var(vals.real, ddof=1) + np.var(vals.imag, ddof=1)) / m)


def _shot_std_error(outcomes: np.ndarray) -> float:
    m = len(outcomes)
    if m < 2:
        return 0.0
    return math.sqrt(np.var(outcomes, ddof=1) / m)


def _sample_block(mix: Mixture, letters, mode: str, rng_config: RngConfig, block: int, start: int, count: int):
    rng = rng_config.generator(block)
    kernel0 = mix.kernels[0]
    n, beta = kernel0.n, kernel0.beta
    u = rng.random(count)
    regs = rng.integers(0, 1 << beta, size=(count, n), dtype=np.int64)
    shot_u = rng.random(count) if mode == "shots" else None
    cum = np.cumsum(mix.probs)
    sector = np.minimum(np.searchsorted(cum, u * cum[-1], side="right"), len(mix.probs) - 1)
    vals = np.empty(count, dtype=complex)
    for s in np.unique(sector).tolist():
        sel = sector == s
        keys = keys_from_registers(regs[sel], beta)
        vals[sel] = diagonal_elements(mix.kernels[s], keys, letters)
    if mode == "shots":
        real_part = (start + np.arange(count)) % 2 == 0
        mean = np.where(real_part, vals.real, vals.imag)
        outcomes = np.where(shot_u < (1 + mean) / 2, 1.0, -1.0)
        return outcomes, real_part
    return vals, None


def _estimate_mixture(mix: Mixture, letters, mode: str, samples: int, rng_config: RngConfig,
                      threads: int | None) -> TraceEstimate:
    letters = tuple(letters)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "exact":
        bits = mix.kernels[0].n * mix.kernels[0].beta
        if bits > EXACT_MODE_MAX_BITS:
            raise ValueError(f"exact mode needs n*beta <= {EXACT_MODE_MAX_BITS}, got {bits}")
        value = sum(p * k.exhaustive_trace(letters) for p, k in zip(mix.probs, mix.kernels))
        return TraceEstimate(complex(mix.scale * value), 0.0, len(mix.kernels) << bits, mode)
    if samples < 1 or (mode == "shots" and samples < 2):
        raise ValueError(f"need at least {2 if mode == 'shots' else 1} samples, got {samples}")
    size = rng_config.block_size
    blocks = [(b, b * size, min(size, samples - b * size)) for b in range((samples + size - 1) // size)]
    workers = thread_count(threads)

    def run(job):
        return _sample_block(mix, letters, mode, rng_config, *job)

    if workers == 1 or len(blocks) == 1:
        parts = [run(job) for job in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    vals = np.concatenate([p[0] for p in parts])
    if mode == "monte_carlo":
        return TraceEstimate(complex(mix.scale * vals.mean()), mix.scale * _complex_std_error(vals), samples, mode)
    real_part = np.concatenate([p[1] for p in parts])
    re, im = vals[real_part], vals[~real_part]
    value = complex(re.mean() if len(re) else 0.0, im.mean() if len(im) else 0.0)
    err = math.hypot(_shot_std_error(re), _shot_std_error(im))
    return TraceEstimate(mix.scale * value, mix.scale * err, samples, mode)


def estimate_normalized_trace(kernel: Kernel, b: BraidWord, *, mode: str = "monte_carlo",
                              samples: int = DEFAULT_SAMPLES, rng=None, threads: int | None = None) -> TraceEstimate:
    """Estimate ``2^{-n beta} Tr U(b)`` for one encoded sector."""
    if b.strands != kernel.n:
        raise ValueError(f"braid has {b.strands} strands, kernel expects {kernel.n}")
    return _estimate_mixture(Mixture((kernel,), (1.0,)), b.letters, mode, samples, as_rng_config(rng), threads)


# ---------------------------------------------------------------- sectors


def sector_probabilities_h(n: int, k: int) -> dict[int, float]:
    weights = pm.sector_weights(n, k)
    total = sum(weights.values())
    return {h: w / total for h, w in weights.items()}


def sector_probabilities_lambda(n: int, k: int, r: int) -> dict[jw.YoungDiagram, float]:
    return {lam: p for lam, _, _, p in jw.sector_distribution(n, k, r)}


def _draw(probs: dict, rng: np.random.Generator):
    keys = list(probs)
    cum = np.cumsum([probs[x] for x in keys])
    i = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return keys[min(i, len(keys) - 1)]


def sample_sector_h(n: int, k: int, rng: np.random.Generator) -> int:
    return _draw(sector_probabilities_h(n, k), rng)


def sample_sector_lambda(n: int, k: int, r: int, rng: np.random.Generator) -> jw.YoungDiagram:
    return _draw(sector_probabilities_lambda(n, k, r), rng)


# ---------------------------------------------------------------- knot values


@dataclass(frozen=True)
class KnotEstimate:
    """Prefactor times an estimated Markov trace."""

    value: complex
    std_error: float
    systematic_bound: float
    samples: int
    mode: str
    prefactor: complex
    markov_trace: complex
    seed: int
    ancillas: int = 0

    def to_json(self) -> dict:
        def c(z: complex) -> dict:
            return {"re": float(z.real), "im": float(z.imag)}

        return {
            "value": c(self.value),
            "std_error": float(self.std_error),
            "systematic_bound": float(self.systematic_bound),
            "samples": int(self.samples),
            "mode": self.mode,
            "prefactor": c(self.prefactor),
            "markov_trace": c(self.markov_trace),
            "seed": int(self.seed),
        }


def _systematic(mix: Mixture, letters) -> float:
    """``E_round + E_stuck`` for the Markov trace: per sector, the 1-norm rounding
    distance plus twice the stuck probability over the crossings used."""
    positions = sorted({abs(g) for g in letters})
    total = 0.0
    for p, kernel, rounding in zip(mix.probs, mix.kernels, mix.rounding):
        stuck = kernel.stuck_union_bound(positions) if positions else Fraction(0)
        total += p * (rounding + 2 * float(stuck))
    return mix.scale * total


def _jones_mixture(n: int, k: int, beta: int) -> Mixture:
    probs = sector_probabilities_h(n, k)
    kernels, rounding = [], []
    for h in probs:
        table = build_encoding_table(n, k, h, beta)
        kernels.append(path_kernel(table))
        if pm.sector_size(n, k, h) <= _EXACT_ROUNDING_LIMIT:
            rounding.append(float(path_rounding_distance(table)))
        else:
            rounding.append(rounding_error_bound(n, beta))
    return Mixture(tuple(kernels), tuple(probs.values()), tuple(probs), 1.0, tuple(rounding))


def _homfly_mixture(n: int, k: int, r: int, beta: int) -> Mixture:
    rows = jw.sector_distribution(n, k, r)
    kernels, rounding = [], []
    for lam, size, _, _ in rows:
        table = build_row_cutoffs(lam, k, r, beta)
        kernels.append(jw_kernel(table))
        if size <= _EXACT_ROUNDING_LIMIT:
            rounding.append(float(jw_rounding_distance(table)))
        else:
            rounding.append(rounding_error_bound(n, beta))
    # the Markov trace weights S |T| sum to one only up to floating point
    scale = sum(size * s for _, size, s, _ in rows)
    return Mixture(tuple(kernels), tuple(p for *_, p in rows), tuple(lam for lam, *_ in rows), scale, tuple(rounding))


def _validate(b: BraidWord, k: int, beta: int | None, samples: int, mode: str) -> int:
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode != "exact" and samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    beta = default_beta(b.strands) if beta is None else beta
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    check_precision(b.strands, beta)
    return beta


def estimate_jones(b: BraidWord, k: int, beta: int | None = None, samples: int = DEFAULT_SAMPLES, rng=None, *,
                   mode: str = "monte_carlo", threads: int | None = None) -> KnotEstimate:
    """Jones polynomial of the trace closure at ``exp(2 pi i/k)`` via the encoded path model."""
    beta = _validate(b, k, beta, samples, mode)
    cfg = as_rng_config(rng)
    mix = _jones_mixture(b.strands, k, beta)
    est = _estimate_mixture(mix, b.letters, mode, samples, cfg, threads)
    pre = pm.jones_prefactor(b, k)
    return KnotEstimate(
        value=pre * est.value,
        std_error=abs(pre) * est.std_error,
        systematic_bound=abs(pre) * _systematic(mix, b.letters),
        samples=est.samples,
        mode=mode,
        prefactor=pre,
        markov_trace=est.value,
        seed=cfg.seed,
        ancillas=max(1, math.ceil(math.log2(k - 1))),
    )


def estimate_homfly(b: BraidWord, k: int, r: int, beta: int | None = None, samples: int = DEFAULT_SAMPLES, rng=None,
                    *, mode: str = "monte_carlo", threads: int | None = None) -> KnotEstimate:
    """Single-variable HOMFLY value via the encoded Jones-Wenzl representation."""
    if not 2 <= r < k:
        raise ValueError(f"need 2 <= r < k, got r={r}, k={k}")
    beta = _validate(b, k, beta, samples, mode)
    cfg = as_rng_config(rng)
    mix = _homfly_mixture(b.strands, k, r, beta)
    est = _estimate_mixture(mix, b.letters, mode, samples, cfg, threads)
    pre = jw.homfly_prefactor(b, k, r)
    return KnotEstimate(
        value=pre * est.value,
        std_error=abs(pre) * est.std_error,
        systematic_bound=abs(pre) * _systematic(mix, b.letters),
        samples=est.samples,
        mode=mode,
        prefactor=pre,
        markov_trace=est.value,
        seed=cfg.seed,
        ancillas=(r - 1) * max(1, math.ceil(math.log2(b.strands + 1))),
    )


def exact_jones(b: BraidWord, k: int) -> KnotEstimate:
    """Jones value from the full path-model matrices (no encoding)."""
    mt = pm.markov_trace_path(b, k)
    pre = pm.jones_prefactor(b, k)
    return KnotEstimate(pre * mt, 0.0, 0.0, 0, "exact", pre, mt, 0)


def exact_homfly(b: BraidWord, k: int, r: int) -> KnotEstimate:
    mt = jw.markov_trace_jw(b, k, r)
    pre = jw.homfly_prefactor(b, k, r)
    return KnotEstimate(pre * mt, 0.0, 0.0, 0, "exact", pre, mt, 0)


__all__: Sequence[str] = [
    "BLOCK_SIZE",
    "DEFAULT_SAMPLES",
    "KnotEstimate",
    "MODES",
    "PrecisionWarning",
    "RngConfig",
    "TraceEstimate",
    "default_beta",
    "estimate_homfly",
    "estimate_jones",
    "estimate_normalized_trace",
    "exact_homfly",
    "exact_jones",
    "sample_sector_h",
    "sample_sector_lambda",
    "sector_probabilities_h",
    "sector_probabilities_lambda",
    "thread_count",
]
