"""Braid words: parsing, printing and the two Markov moves.

A letter ``g > 0`` stands for the generator sigma_g and ``g < 0`` for its
inverse. With every strand oriented downward, sigma_g is a *negative*
crossing of the trace closure, so the writhe is minus the exponent sum.
This is the convention under which the path-model formula for the Jones
value normalizes the unknot to 1, and the Kauffman-bracket oracle is
built to agree with it.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class BraidError(ValueError):
    """Raised for malformed braid text or out-of-range generators."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if isinstance(self.strands, bool) or not isinstance(self.strands, int):
            raise BraidError(f"strand count must be an integer, got {self.strands!r}")
        if self.strands < 1:
            raise BraidError(f"strand count must be >= 1, got {self.strands}")
        letters = tuple(int(g) for g in self.letters)
        for g in letters:
            if g == 0 or abs(g) > self.strands - 1:
                raise BraidError(
                    f"generator {g} out of range for {self.strands} strands "
                    f"(need 1 <= |g| <= {self.strands - 1})"
                )
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        _check_same_strands(self, other)
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-g for g in reversed(self.letters)))

    @property
    def is_identity_word(self) -> bool:
        return not self.letters

    @property
    def max_generator(self) -> int:
        return max((abs(g) for g in self.letters), default=0)


def _check_same_strands(a: BraidWord, b: BraidWord) -> None:
    if a.strands != b.strands:
        raise BraidError(f"strand counts differ: {a.strands} vs {b.strands}")


def parse_braid(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices.

    >>> parse_braid("1 -3 2", 4)
    BraidWord(strands=4, letters=(1, -3, 2))
    """
    letters = []
    for token in text.split():
        try:
            g = int(token)
        except ValueError:
            raise BraidError(f"malformed braid token {token!r}") from None
        letters.append(g)
    return BraidWord(strands, tuple(letters))


def format_braid(b: BraidWord) -> str:
    return " ".join(str(g) for g in b.letters)


def read_braid_file(path: str | Path) -> BraidWord:
    """Read a braid file: a ``strands=<n>`` header line, then the letters.

    Blank lines and ``#`` comments are ignored; letters may span lines.
    """
    strands = None
    body = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if strands is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "strands":
                raise BraidError("braid file must start with a 'strands=<n>' header")
            try:
                strands = int(value)
            except ValueError:
                raise BraidError(f"bad strand count {value.strip()!r}") from None
            continue
        body.append(line)
    if strands is None:
        raise BraidError("braid file has no 'strands=<n>' header")
    return parse_braid(" ".join(body), strands)


def exponent_sum(b: BraidWord) -> int:
    return sum(1 if g > 0 else -1 for g in b.letters)


def writhe(b: BraidWord) -> int:
    """Writhe of the downward-oriented trace closure (minus the exponent sum)."""
    return -exponent_sum(b)


def markov_conjugate(b: BraidWord, a: BraidWord) -> BraidWord:
    """Markov move I: ``a b a^-1``."""
    _check_same_strands(a, b)
    return a * b * a.inverse()


def markov_stabilize(b: BraidWord, sign: int = 1) -> BraidWord:
    """Markov move II: append ``sigma_n^{sign}`` on a new (n+1)-th strand."""
    if sign not in (1, -1):
        raise BraidError(f"sign must be +1 or -1, got {sign}")
    n = b.strands
    return BraidWord(n + 1, b.letters + (sign * n,))


def as_braid(obj, strands: int | None = None) -> BraidWord:
    """Coerce a BraidWord, a braid string or a letter sequence to a BraidWord.

    For strings and sequences without an explicit strand count, the minimal
    number of strands is used.
    """
    if isinstance(obj, BraidWord):
        if strands is not None and strands != obj.strands:
            raise BraidError(f"expected {strands} strands, got {obj.strands}")
        return obj
    if isinstance(obj, str):
        letters: Sequence[int] = parse_braid(obj, 10**9).letters
    elif isinstance(obj, Iterable):
        letters = tuple(int(g) for g in obj)
    else:
        raise BraidError(f"cannot interpret {obj!r} as a braid")
    if strands is None:
        strands = max((abs(g) for g in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))
