"""Independent ground truth and verification reports.

The Jones polynomial here comes from the Kauffman bracket, evaluated in the
Temperley-Lieb algebra on non-crossing pairings, with exact integer Laurent
polynomials in the bracket variable ``A``. It shares no code with the path
model. A braid letter ``g > 0`` is a negative crossing (see ``braid``) and
expands as ``A^-1 * 1 + A * E_g``; its inverse as ``A * 1 + A^-1 * E_g``.

The report functions (``relations_check``, ``r2_correspondence_check``,
``invariance_suite``, ``oracle_check``) drive the ``verify`` CLI suites.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

import numpy as np

from .braid import BraidWord, markov_conjugate, markov_stabilize, writhe

MAX_ORACLE_STRANDS = 8
MAX_ORACLE_CROSSINGS = 14


class LaurentPolynomial:
    """Finitely supported integer Laurent polynomial in one variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coeff})

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, int):
            return LaurentPolynomial({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "LaurentPolynomial":
        if m < 0:
            raise ValueError("negative powers are only defined for monomials; use shift()")
        out = LaurentPolynomial.monomial(0)
        for _ in range(m):
            out = out * self
        return out

    def shift(self, s: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e + s: c for e, c in self.coeffs.items()})

    def mirror(self) -> "LaurentPolynomial":
        """Substitute the variable by its inverse."""
        return LaurentPolynomial({-e: c for e, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.monomial(0, other)
        return isinstance(other, LaurentPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __call__(self, z: complex) -> complex:
        return complex(sum(c * z**e for e, c in self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = [f"{c}*A^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(terms)

    def t_coefficients(self) -> dict[Fraction, int]:
        """Coefficients in ``t = A^-4`` (exponents may be half-integers)."""
        return {Fraction(-e, 4): c for e, c in sorted(self.coeffs.items())}

    def at_root_of_unity(self, k: int) -> complex:
        """Evaluate at ``A = exp(-i pi / 2k)``, i.e. ``t = exp(2 pi i / k)``
        with the principal branch ``t^(1/2) = exp(i pi / k)``."""
        return self(cmath.exp(-1j * math.pi / (2 * k)))


@dataclass(frozen=True)
class PlanarPairing:
    """Temperley-Lieb diagram on ``n`` strands.

    Points ``0..n-1`` are on top and ``n..2n-1`` on the bottom (left to
    right); ``partner[p]`` is the point joined to ``p``.
    """

    n: int
    partner: tuple[int, ...]

    def __post_init__(self):
        m = 2 * self.n
        if len(self.partner) != m or sorted(self.partner) != list(range(m)):
            raise ValueError("partner must be a permutation of the 2n boundary points")
        for p, q in enumerate(self.partner):
            if p == q or self.partner[q] != p:
                raise ValueError("partner must be a fixed-point-free involution")
        if not self._noncrossing():
            raise ValueError("pairing is not planar")

    def _noncrossing(self) -> bool:
        # unfold the rectangle boundary into a circle: top left->right, bottom right->left
        n = self.n
        pos = {p: p for p in range(n)}
        pos.update({n + j: 2 * n - 1 - j for j in range(n)})
        chords = {tuple(sorted((pos[p], pos[q]))) for p, q in enumerate(self.partner)}
        for (a, b), (c, d) in product(chords, repeat=2):
            if a < c < b < d:
                return False
        return True

    @classmethod
    def identity(cls, n: int) -> "PlanarPairing":
        partner = [0] * (2 * n)
        for j in range(n):
            partner[j], partner[n + j] = n + j, j
        return cls(n, tuple(partner))

    @classmethod
    def generator(cls, n: int, i: int) -> "PlanarPairing":
        """The cup-cap element ``E_i`` joining strands i and i+1 (1-based)."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} outside 1..{n - 1}")
        partner = list(cls.identity(n).partner)
        a, b = i - 1, i
        partner[a], partner[b] = b, a
        partner[n + a], partner[n + b] = n + b, n + a
        return cls(n, tuple(partner))

    def compose(self, below: "PlanarPairing") -> tuple["PlanarPairing", int]:
        """Stack ``self`` on top of ``below``; returns (diagram, closed loops)."""
        n = self.n
        if below.n != n:
            raise ValueError("strand counts differ")
        top, bot = self.partner, below.partner
        out = [-1] * (2 * n)
        seen_mid = [False] * n

        def follow(point: int, in_top: bool) -> int:
            # point is an index inside the current diagram; return an outer point
            while True:
                if in_top:
                    q = top[point]
                    if q < n:
                        return q
                    seen_mid[q - n] = True
                    point, in_top = q - n, False
                else:
                    q = bot[point]
                    if q >= n:
                        return q
                    seen_mid[q] = True
                    point, in_top = n + q, True

        for p in range(n):
            if out[p] < 0:
                q = follow(p, True)
                out[p], out[q] = q, p
        for p in range(n, 2 * n):
            if out[p] < 0:
                q = follow(p, False)
                out[p], out[q] = q, p
        loops = 0
        for m in range(n):
            if not seen_mid[m]:
                loops += 1
                point, in_top = m, False
                while True:
                    seen_mid[point if not in_top else point - n] = True
                    if in_top:
                        q = top[point]
                        point, in_top = q - n, False
                    else:
                        q = bot[point]
                        point, in_top = n + q, True
                    if not in_top and point == m:
                        break
        return PlanarPairing(n, tuple(out)), loops

    def closure_loops(self) -> int:
        """Number of circles in the trace closure (top j joined to bottom j)."""
        n = self.n
        seen = [False] * (2 * n)
        loops = 0
        for start in range(2 * n):
            if seen[start]:
                continue
            loops += 1
            p = start
            while not seen[p]:
                seen[p] = True
                q = self.partner[p]
                seen[q] = True
                p = q + n if q < n else q - n
        return loops


TLElement = dict[PlanarPairing, LaurentPolynomial]


def loop_value() -> LaurentPolynomial:
    """``delta = -A^2 - A^-2``."""
    return LaurentPolynomial({2: -1, -2: -1})


def _times_generator(elem: TLElement, g: int) -> TLElement:
    n = next(iter(elem)).n
    e = PlanarPairing.generator(n, abs(g))
    scale_id, scale_e = (-1, 1) if g > 0 else (1, -1)
    delta = loop_value()
    out: TLElement = {}
    for diagram, coeff in elem.items():
        term = coeff.shift(scale_id)
        out[diagram] = out.get(diagram, LaurentPolynomial()) + term
        prod_diagram, loops = diagram.compose(e)
        term = coeff.shift(scale_e)
        for _ in range(loops):
            term = term * delta
        out[prod_diagram] = out.get(prod_diagram, LaurentPolynomial()) + term
    return {d: c for d, c in out.items() if c.coeffs}


def temperley_lieb_image(b: BraidWord) -> TLElement:
    elem: TLElement = {PlanarPairing.identity(b.strands): LaurentPolynomial.monomial(0)}
    for g in b.letters:
        elem = _times_generator(elem, g)
    return elem


def kauffman_bracket(b: BraidWord) -> LaurentPolynomial:
    """Bracket of the trace closure, normalized so the unknot is 1."""
    delta = loop_value()
    total = LaurentPolynomial()
    for diagram, coeff in temperley_lieb_image(b).items():
        total = total + coeff * delta ** (diagram.closure_loops() - 1)
    return total


def kauffman_jones(b: BraidWord) -> LaurentPolynomial:
    """Jones polynomial of the trace closure, in the bracket variable ``A``.

    ``V = (-A^3)^(-w) <L>`` with ``t = A^-4``; exponential-time by design.
    """
    if b.strands > MAX_ORACLE_STRANDS or len(b) > MAX_ORACLE_CROSSINGS:
        raise ValueError(
            f"oracle limited to {MAX_ORACLE_STRANDS} strands and "
            f"{MAX_ORACLE_CROSSINGS} crossings, got {b.strands} and {len(b)}"
        )
    w = writhe(b)
    sign = -1 if w % 2 else 1
    return kauffman_bracket(b).shift(-3 * w) * sign


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class Report:
    name: str
    checks: int = 0
    max_deviation: float = 0.0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, deviation: float, tolerance: float, label: str) -> None:
        self.checks += 1
        if deviation > self.max_deviation:
            self.max_deviation = float(deviation)
        if not deviation < tolerance:
            self.violations.append(f"{label}: deviation {deviation:.3e} >= {tolerance:.0e}")

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": self.checks,
            "max_deviation": self.max_deviation,
            "violations": self.violations,
        }


def iter_braid_words(n: int, max_length: int) -> Iterator[BraidWord]:
    """All words on ``n`` strands of length ``0..max_length``, shortest first."""
    letters = [s * g for g in range(1, n) for s in (1, -1)]
    yield BraidWord(n, ())
    for length in range(1, max_length + 1):
        for word in product(letters, repeat=length):
            yield BraidWord(n, word)


def random_braid(n: int, length: int, rng: random.Random) -> BraidWord:
    if n < 2:
        return BraidWord(n, ())
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)))


def oracle_check(braids: Iterable[BraidWord], ks: Iterable[int], tolerance: float = 1e-9) -> Report:
    from .path_model import jones_value

    ks = list(ks)
    report = Report("oracle")
    for b in braids:
        poly = kauffman_jones(b)
        for k in ks:
            dev = abs(jones_value(b, k) - poly.at_root_of_unity(k))
            report.record(dev, tolerance, f"braid [{b}] on {b.strands} strands, k={k}")
    return report


def relations_check(max_strands: int, ks: Iterable[int], rs: Iterable[int] = (2, 3),
                    tol_relation: float = 1e-9, tol_unitary: float = 1e-10) -> Report:
    """Braid relations and unitarity for both representations."""
    from . import jones_wenzl as jw
    from .path_model import generator_matrix, sector_size

    report = Report("relations")

    def check_family(mats: dict[int, np.ndarray], label: str) -> None:
        for i, m in mats.items():
            dev = np.abs(m @ m.conj().T - np.eye(len(m))).max()
            report.record(dev, tol_unitary, f"{label} unitarity sigma_{i}")
        for i in mats:
            for j in mats:
                if j == i + 1:
                    a, b = mats[i], mats[j]
                    dev = np.abs(a @ b @ a - b @ a @ b).max()
                    report.record(dev, tol_relation, f"{label} braid relation {i},{j}")
                elif j >= i + 2:
                    a, b = mats[i], mats[j]
                    dev = np.abs(a @ b - b @ a).max()
                    report.record(dev, tol_relation, f"{label} far commutation {i},{j}")

    ks = list(ks)
    for n in range(2, max_strands + 1):
        for k in ks:
            for h in range(1, k):
                if sector_size(n, k, h):
                    mats = {i: generator_matrix(n, k, h, i) for i in range(1, n)}
                    check_family(mats, f"path n={n} k={k} h={h}")
            for r in rs:
                if k <= r:
                    continue
                for lam in jw.enumerate_diagrams(n, k, r):
                    mats = {i: jw.jw_generator(lam, k, r, i) for i in range(1, n)}
                    check_family(mats, f"JW n={n} k={k} r={r} lam={lam}")
    return report


def r2_correspondence_check(max_strands: int, ks: Iterable[int], tolerance: float = 1e-10,
                            braids: Iterable[BraidWord] = (), trace_tolerance: float = 1e-9) -> Report:
    """Two-row Jones-Wenzl matrices against the path model, and the induced trace/sign relations."""
    from . import jones_wenzl as jw
    from .braid import exponent_sum
    from .path_model import (
        _path_steps,
        generator_matrix,
        jones_prefactor,
        markov_trace_path,
        sector_size,
    )

    report = Report("r2")
    ks = list(ks)
    for n in range(2, max_strands + 1):
        for k in ks:
            if k <= 2:
                continue
            scale = 1j * cmath.exp(1j * 3 * math.pi / (2 * k))
            for h in range(1, k):
                if not sector_size(n, k, h):
                    continue
                lam = jw.diagram_for_rung(n, h)
                tab_index = {rows: j for j, rows in enumerate(jw._tableau_rows(lam, k, 2))}
                perm = [tab_index[jw.path_to_rows(steps)] for steps in _path_steps(n, k, h)]
                for i in range(1, n):
                    rho = generator_matrix(n, k, h, i)
                    pi = jw.jw_generator(lam, k, 2, i)[np.ix_(perm, perm)]
                    dev = np.abs(pi - scale * rho).max()
                    report.record(dev, tolerance, f"n={n} k={k} h={h} sigma_{i}")
    for b in braids:
        for k in ks:
            scale = 1j * cmath.exp(1j * 3 * math.pi / (2 * k))
            mt_jw = jw.markov_trace_jw(b, k, 2)
            mt_path = markov_trace_path(b, k)
            rhs = scale ** exponent_sum(b) * mt_path
            report.record(abs(mt_jw - rhs), trace_tolerance, f"trace relation [{b}] k={k}")
            sign = (-1) ** ((writhe(b) + b.strands - 1) % 2)
            homfly = jw.homfly_prefactor(b, k, 2) * mt_jw
            dev = abs(homfly - sign * jones_prefactor(b, k) * mt_path)
            report.record(dev, trace_tolerance, f"sign relation [{b}] k={k}")
    return report


def random_markov_move(b: BraidWord, rng: random.Random, max_strands: int | None = None) -> BraidWord:
    """One random conjugation or stabilization (or destabilization-free growth)."""
    stabilize = b.strands < 2 or (
        rng.random() < 0.5 and (max_strands is None or b.strands < max_strands)
    )
    if stabilize:
        return markov_stabilize(b, rng.choice((1, -1)))
    conj = random_braid(b.strands, rng.randint(1, 2), rng)
    return markov_conjugate(b, conj)


def invariance_suite(b: BraidWord, k: int, rs: Iterable[int] = (), moves: int = 5,
                     rng: random.Random | None = None, tolerance: float = 1e-9,
                     max_strands: int = 6, report: Report | None = None) -> Report:
    """Apply ``moves`` random Markov moves, checking the Jones and HOMFLY values after each."""
    from .jones_wenzl import homfly_value
    from .path_model import jones_value

    rng = rng or random.Random(0)
    report = report or Report("markov")
    rs = [r for r in rs if k > r]
    v0 = jones_value(b, k)
    h0 = {r: homfly_value(b, k, r) for r in rs}
    current = b
    for step in range(moves):
        current = random_markov_move(current, rng, max_strands)
        label = f"[{b}] -> [{current}] on {current.strands} strands, k={k}, move {step + 1}"
        report.record(abs(jones_value(current, k) - v0), tolerance, "jones " + label)
        for r in rs:
            report.record(abs(homfly_value(current, k, r) - h0[r]), tolerance, f"homfly r={r} " + label)
    return report
