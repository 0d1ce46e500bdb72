"""Permutations acting on flows and canonical double-coset representatives."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .flow import BlockComposition, FlowVector, parabolic_entropy, psi_k

DEFAULT_LIMIT = 8


class EnumerationLimitError(ValueError):
    pass


def check_limit(d: int, limit: int | None) -> None:
    limit = DEFAULT_LIMIT if limit is None else limit
    if d > limit:
        raise EnumerationLimitError(
            f"d={d} exceeds the enumeration limit {limit} ({d}! permutations); raise the limit explicitly"
        )


@dataclass(frozen=True, order=True)
class WeylElement:
    """Permutation of ``1..d`` in one-line image notation."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")

    @classmethod
    def identity(cls, d: int) -> WeylElement:
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def parse(cls, text: str) -> WeylElement:
        return cls(tuple(int(p) for p in text.split(",")))

    @property
    def d(self) -> int:
        return len(self.images)

    def __getitem__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: WeylElement) -> WeylElement:
        # (u * w)_i = u_{w_i}, so alpha^(u w) = (alpha^u)^w under the right action
        return WeylElement(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> WeylElement:
        inv = [0] * self.d
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return WeylElement(tuple(inv))

    def __str__(self) -> str:
        return ",".join(map(str, self.images))


def transposition(n: int, d: int) -> WeylElement:
    """Adjacent transposition ``T_n = (n, n+1)``."""
    if not 1 <= n <= d - 1:
        raise ValueError(f"n must satisfy 1 <= n <= d-1 (n={n}, d={d})")
    images = list(range(1, d + 1))
    images[n - 1], images[n] = n + 1, n
    return WeylElement(tuple(images))


def apply_weyl(alpha: FlowVector | Sequence[Fraction], w: WeylElement) -> tuple[Fraction, ...]:
    """``alpha^w`` with ``(alpha^w)_i = alpha_{w_i}``."""
    vec = alpha.entries if isinstance(alpha, FlowVector) else tuple(alpha)
    if len(vec) != w.d:
        raise ValueError(f"flow of dimension {len(vec)} and permutation of degree {w.d}")
    return tuple(vec[j - 1] for j in w.images)


def block_sorted_image(P: BlockComposition, alpha: FlowVector, w: WeylElement) -> tuple[Fraction, ...]:
    """``alpha^w`` with every block of ``P`` sorted non-increasingly."""
    beta = apply_weyl(alpha, w)
    out: list[Fraction] = []
    for r in P.ranges():
        out.extend(sorted((beta[i] for i in r), reverse=True))
    return tuple(out)


def _lex_min_realizer(alpha: FlowVector, target: Sequence[Fraction]) -> WeylElement:
    # smallest unused index carrying the required value, position by position
    pools: dict[Fraction, list[int]] = {}
    for i in range(alpha.d, 0, -1):
        pools.setdefault(alpha[i], []).append(i)
    return WeylElement(tuple(pools[v].pop() for v in target))


@dataclass(frozen=True)
class CosetClass:
    """Double coset ``[w]_P`` with its canonical representative.

    Within each block the values ``alpha_{rep_i}`` are non-increasing and, among
    all permutations producing the same image vector, ``rep`` is the
    lexicographically smallest.
    """

    rep: WeylElement
    parabolic: BlockComposition
    flow: FlowVector

    @property
    def image(self) -> tuple[Fraction, ...]:
        return apply_weyl(self.flow, self.rep)

    def key(self) -> tuple:
        return (self.parabolic.blocks, self.rep.images)

    def __str__(self) -> str:
        return f"[{self.rep}]_{self.parabolic}"


def canonical_rep(P: BlockComposition, alpha: FlowVector, w: WeylElement) -> CosetClass:
    if P.d != alpha.d or w.d != alpha.d:
        raise ValueError("composition, flow and permutation dimensions differ")
    rep = _lex_min_realizer(alpha, block_sorted_image(P, alpha, w))
    return CosetClass(rep, P, alpha)


def enumerate_cosets(P: BlockComposition, alpha: FlowVector, limit: int | None = None) -> tuple[CosetClass, ...]:
    """One :class:`CosetClass` per double coset, sorted by representative.

    Works by running through all of ``S_d`` and bucketing on the block-sorted
    image vector.
    """
    d = alpha.d
    if P.d != d:
        raise ValueError("composition and flow dimensions differ")
    check_limit(d, limit)
    ints, L = alpha.scaled()
    bounds = [(r.start, r.stop) for r in P.ranges()]
    seen: set[tuple] = set()
    for perm in permutations(ints):
        seen.add(tuple(tuple(sorted(perm[a:b], reverse=True)) for a, b in bounds))
    classes = [
        CosetClass(_lex_min_realizer(alpha, [Fraction(x, L) for block in key for x in block]), P, alpha)
        for key in seen
    ]
    classes.sort(key=lambda c: c.rep.images)
    return tuple(classes)


def transposition_delta(k: int, sigma: CosetClass, n: int) -> tuple[Fraction, Fraction]:
    """Closed-form change of ``(h_k, psi_k)`` when ``T_n`` is applied to ``sigma``.

    Requires ``sigma_j = n`` and ``sigma_j' = n + 1`` with ``j <= k < j'``.
    Returns ``(h_k(sigma) - h_k(T_n sigma), psi_k(sigma) - psi_k(T_n sigma))``.
    """
    alpha = sigma.flow
    d = alpha.d
    if sigma.parabolic.blocks != (k, d - k):
        raise ValueError(f"coset is relative to {sigma.parabolic}, expected ({k},{d - k})")
    if not 1 <= n <= d - 1:
        raise ValueError(f"n must satisfy 1 <= n <= d-1 (n={n}, d={d})")
    images = sigma.rep.images
    j = images.index(n) + 1
    jp = images.index(n + 1) + 1
    if not (j <= k < jp):
        raise ValueError(
            f"{n} sits at position {j} and {n + 1} at position {jp}; need j <= {k} < j'"
        )
    if jp != n + k - j + 1:
        raise ValueError(f"representative {sigma.rep} is not block-sorted (j'={jp}, expected {n + k - j + 1})")
    gap = alpha[n] - alpha[n + 1]
    return (jp - j) * gap, Fraction(d, k * (d - k)) * gap


def apply_transposition(sigma: CosetClass, n: int) -> CosetClass:
    """Canonical class of ``T_n sigma``."""
    t = transposition(n, sigma.flow.d)
    return canonical_rep(sigma.parabolic, sigma.flow, t * sigma.rep)


def h_k(k: int, alpha: FlowVector, w: WeylElement) -> Fraction:
    return parabolic_entropy(BlockComposition.maximal(k, alpha.d), apply_weyl(alpha, w))


def psi_k_of(k: int, alpha: FlowVector, w: WeylElement) -> Fraction:
    return psi_k(k, apply_weyl(alpha, w))
