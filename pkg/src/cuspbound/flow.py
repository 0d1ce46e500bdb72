"""Exact flow vectors, parabolic block structures and elementary entropy formulas.

Everything here is computed with :class:`fractions.Fraction`; no floats.
Indices in the public API follow the mathematical convention and start at 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

ZERO = Fraction(0)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string. Decimal notation is rejected."""
    token = text.strip().replace("−", "-")
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"not an exact rational (use p/q or an integer): {text!r}")
    value = Fraction(token)
    return value


def parse_vector(text: str) -> list[Fraction]:
    """Parse a comma-separated list of exact rationals."""
    parts = [p for p in text.split(",")]
    if any(not p.strip() for p in parts):
        raise ValueError(f"empty entry in vector {text!r}")
    return [parse_rational(p) for p in parts]


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def positive_part(x: Fraction) -> Fraction:
    return x if x > 0 else ZERO


@dataclass(frozen=True)
class FlowVector:
    """Zero-sum diagonal vector sorted non-increasingly.

    ``original`` keeps the user's raw input and ``applied_sort`` the 1-based
    indices with ``entries[i] == original[applied_sort[i] - 1]`` (after any
    mean projection).
    """

    entries: tuple[Fraction, ...]
    applied_sort: tuple[int, ...] = ()
    original: tuple[Fraction, ...] = ()
    projected: bool = False

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        d = len(entries)
        if d < 2:
            raise ValueError(f"a flow needs at least 2 entries, got {d}")
        total = sum(entries, ZERO)
        if total != 0:
            raise ValueError(f"flow entries must sum to 0 (residual {format_rational(total)})")
        for i in range(d - 1):
            if entries[i] < entries[i + 1]:
                raise ValueError("flow entries must be non-increasing")
        if not self.applied_sort:
            object.__setattr__(self, "applied_sort", tuple(range(1, d + 1)))
        if not self.original:
            object.__setattr__(self, "original", entries)

    @property
    def d(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        """1-based access, ``alpha[i]`` is the i-th exponent."""
        if not 1 <= i <= len(self.entries):
            raise IndexError(f"index {i} outside 1..{len(self.entries)}")
        return self.entries[i - 1]

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def positive_count(self) -> int:
        return sum(1 for e in self.entries if e > 0)

    def positive_sum(self) -> Fraction:
        return sum((e for e in self.entries if e > 0), ZERO)

    def scaled(self) -> tuple[list[int], int]:
        """Return ``(ints, L)`` with ``entries == ints / L`` exactly."""
        L = lcm(*(e.denominator for e in self.entries))
        return [int(e * L) for e in self.entries], L


def canonicalize_flow(raw: Sequence, project: bool = False) -> FlowVector:
    """Sort a raw flow non-increasingly, remembering the permutation.

    With ``project=True`` the exact mean is subtracted first; otherwise a
    non-zero sum is rejected.
    """
    values = [v if isinstance(v, Fraction) else _coerce(v) for v in raw]
    if len(values) < 2:
        raise ValueError(f"a flow needs at least 2 entries, got {len(values)}")
    total = sum(values, ZERO)
    if total != 0:
        if not project:
            raise ValueError(
                f"entries sum to {format_rational(total)}, not 0; pass project=True to subtract the mean"
            )
        mean = total / len(values)
        values = [v - mean for v in values]
    order = sorted(range(len(values)), key=lambda i: -values[i])
    return FlowVector(
        entries=tuple(values[i] for i in order),
        applied_sort=tuple(i + 1 for i in order),
        original=tuple(values),
        projected=total != 0,
    )


def _coerce(v) -> Fraction:
    if isinstance(v, str):
        return parse_rational(v)
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass Fraction, int or 'p/q' strings")
    return Fraction(v)


@dataclass(frozen=True)
class BlockComposition:
    """Ordered block sizes of a standard parabolic subgroup."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("a composition needs at least one block")
        if any(b < 1 for b in blocks):
            raise ValueError(f"block sizes must be positive: {blocks}")

    @classmethod
    def maximal(cls, k: int, d: int) -> BlockComposition:
        if not 1 <= k <= d - 1:
            raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
        return cls((k, d - k))

    @classmethod
    def borel(cls, d: int) -> BlockComposition:
        return cls((1,) * d)

    @classmethod
    def whole(cls, d: int) -> BlockComposition:
        return cls((d,))

    @property
    def d(self) -> int:
        return sum(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def ranges(self) -> list[range]:
        """0-based position ranges of the blocks."""
        out, start = [], 0
        for b in self.blocks:
            out.append(range(start, start + b))
            start += b
        return out

    def block_of(self) -> list[int]:
        """Block number (0-based) of every 0-based position."""
        return [n for n, b in enumerate(self.blocks) for _ in range(b)]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.blocks)) + ")"


def parabolic_pairs(P: BlockComposition) -> frozenset[tuple[int, int]]:
    """1-based index pairs (i, j) whose root spaces lie in ``P``.

    Intra-block pairs appear in both orders; inter-block pairs only with the
    earlier block first.
    """
    owner = P.block_of()
    d = P.d
    pairs = set()
    for i in range(d):
        for j in range(d):
            if i != j and owner[i] <= owner[j]:
                pairs.add((i + 1, j + 1))
    return frozenset(pairs)


def entropy_on_pairs(pairs: Iterable[tuple[int, int]], alpha: Sequence[Fraction]) -> Fraction:
    """Sum of the positive parts of ``alpha_i - alpha_j`` over the pair set."""
    vec = _as_tuple(alpha)
    d = len(vec)
    total = ZERO
    for i, j in pairs:
        if not (1 <= i <= d and 1 <= j <= d):
            raise ValueError(f"pair ({i}, {j}) out of range 1..{d}")
        diff = vec[i - 1] - vec[j - 1]
        if diff > 0:
            total += diff
    return total


def diagonal_entropy(values: Sequence[Fraction]) -> Fraction:
    """Entropy of a diagonal element on the full group of its size.

    Sorts first, then applies the weighted sum ``sum (N + 1 - 2i) x_i``.
    """
    xs = sorted(values, reverse=True)
    N = len(xs)
    return sum(((N + 1 - 2 * i) * x for i, x in enumerate(xs, start=1)), ZERO)


def total_entropy(alpha: FlowVector | Sequence[Fraction]) -> Fraction:
    return diagonal_entropy(_as_tuple(alpha))


def parabolic_entropy_split(P: BlockComposition, beta: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Return ``(levi, unipotent)`` entropy of ``exp(beta)`` on ``P``."""
    vec = _as_tuple(beta)
    if len(vec) != P.d:
        raise ValueError(f"vector of length {len(vec)} does not match composition of {P.d}")
    ranges = P.ranges()
    levi = sum((diagonal_entropy([vec[i] for i in r]) for r in ranges), ZERO)
    unipotent = ZERO
    for a, b in combinations(range(len(ranges)), 2):
        for i in ranges[a]:
            for j in ranges[b]:
                diff = vec[i] - vec[j]
                if diff > 0:
                    unipotent += diff
    return levi, unipotent


def parabolic_entropy(P: BlockComposition, beta: Sequence[Fraction]) -> Fraction:
    levi, unipotent = parabolic_entropy_split(P, beta)
    return levi + unipotent


def project_pi(P: BlockComposition, beta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Replace every block of ``beta`` by its mean."""
    vec = _as_tuple(beta)
    if len(vec) != P.d:
        raise ValueError(f"vector of length {len(vec)} does not match composition of {P.d}")
    out: list[Fraction] = []
    for r in P.ranges():
        mean = sum((vec[i] for i in r), ZERO) / len(r)
        out.extend([mean] * len(r))
    return tuple(out)


def psi_k(k: int, beta: Sequence[Fraction]) -> Fraction:
    """Difference of the mean of the first ``k`` entries and the mean of the rest."""
    vec = _as_tuple(beta)
    d = len(vec)
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    head = sum(vec[:k], ZERO)
    tail = sum(vec[k:], ZERO)
    return head / k - tail / (d - k)


@dataclass(frozen=True)
class LinearFunctional:
    """Linear functional ``sum_i coefficients[i] * lambda_i`` on diagonal vectors."""

    coefficients: tuple[Fraction, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def d(self) -> int:
        return len(self.coefficients)

    def __call__(self, vec: Sequence[Fraction]) -> Fraction:
        v = _as_tuple(vec)
        if len(v) != len(self.coefficients):
            raise ValueError(f"functional of length {self.d} applied to vector of length {len(v)}")
        return sum((c * x for c, x in zip(self.coefficients, v)), ZERO)

    def __add__(self, other: LinearFunctional) -> LinearFunctional:
        return LinearFunctional(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, c: Fraction) -> LinearFunctional:
        return LinearFunctional(tuple(c * a for a in self.coefficients), self.name)

    @classmethod
    def zero(cls, d: int) -> LinearFunctional:
        return cls((ZERO,) * d, "0")

    @classmethod
    def coordinate(cls, i: int, d: int) -> LinearFunctional:
        coeffs = [ZERO] * d
        coeffs[i - 1] = Fraction(1)
        return cls(tuple(coeffs), f"lambda_{i}")

    @classmethod
    def simple_root(cls, k: int, d: int) -> LinearFunctional:
        """``lambda_k - lambda_{k+1}``; on block projections of ``P_k`` it reads off psi_k."""
        if not 1 <= k <= d - 1:
            raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
        coeffs = [ZERO] * d
        coeffs[k - 1] = Fraction(1)
        coeffs[k] = Fraction(-1)
        return cls(tuple(coeffs), f"psi_{k}")

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coefficients, start=1) if c != 0)


def penalized_entropy(P: BlockComposition, beta: Sequence[Fraction], phi: LinearFunctional) -> Fraction:
    """``h(P, exp(beta)) - phi(pi_P(beta))``."""
    return parabolic_entropy(P, beta) - phi(project_pi(P, beta))


def _as_tuple(vec) -> tuple[Fraction, ...]:
    if isinstance(vec, FlowVector):
        return vec.entries
    return tuple(vec)
