"""Closed-form cusp entropy bounds and the inequality machinery behind them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .flow import (
    ZERO,
    BlockComposition,
    FlowVector,
    LinearFunctional,
    parabolic_entropy,
    psi_k,
    total_entropy,
)
from .hull import edge_slope, reflect_k, tau_sequence
from .weyl import CosetClass, apply_weyl, canonical_rep


# --- minimal parabolic ------------------------------------------------------

def borel_functional(d: int) -> LinearFunctional:
    """Half the sum of all positive roots: coefficient ``(d+1-2i)/2`` on ``lambda_i``."""
    return LinearFunctional(tuple(Fraction(d + 1 - 2 * i, 2) for i in range(1, d + 1)), "phi_B")


def borel_bound(alpha: FlowVector) -> Fraction:
    return total_entropy(alpha) / 2


# --- maximal parabolics -----------------------------------------------------

def _check_small_k(k: int, d: int) -> None:
    if not 1 <= k or 2 * k > d:
        raise ValueError(f"k must satisfy 1 <= k <= d/2 (k={k}, d={d})")


def alternating_sums(k: int, alpha: FlowVector, m: int) -> tuple[Fraction, Fraction]:
    """``(sum_i alpha_{m+2(i-1)}, sum_i alpha_{m+2(i-1)+1})`` over ``i = 1..k``."""
    even = sum((alpha[m + 2 * (i - 1)] for i in range(1, k + 1)), ZERO)
    odd = sum((alpha[m + 2 * (i - 1) + 1] for i in range(1, k + 1)), ZERO)
    return even, odd


def admissible_m(k: int, alpha: FlowVector) -> list[int]:
    """All ``m`` whose alternating sums straddle zero (``even >= 0 >= odd``)."""
    d = alpha.d
    _check_small_k(k, d)
    out = []
    for m in range(1, d - 2 * k + 2):
        even, odd = alternating_sums(k, alpha, m)
        if even >= 0 >= odd:
            out.append(m)
    return out


def compute_m_k(k: int, alpha: FlowVector) -> int:
    """Smallest admissible ``m``; ``1`` for the zero flow."""
    candidates = admissible_m(k, alpha)
    if not candidates:
        raise ArithmeticError(f"no admissible m for k={k} and flow {alpha.entries}")
    return candidates[0]


def eq_bound(k: int, alpha: FlowVector, m: int) -> Fraction:
    """``h(G,a) - k * sum_{i<=m} alpha_i - sum_{i<k} (k-i)(alpha_{m+2i-1} + alpha_{m+2i})``."""
    value = total_entropy(alpha) - k * sum((alpha[i] for i in range(1, m + 1)), ZERO)
    for i in range(1, k):
        value -= (k - i) * (alpha[m + 2 * i - 1] + alpha[m + 2 * i])
    return value


def maximal_parabolic_bound(k: int, alpha: FlowVector) -> Fraction:
    d = alpha.d
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    kt = min(k, d - k)
    return eq_bound(kt, alpha, compute_m_k(kt, alpha))


def maximal_parabolic_coefficient(k: int, alpha: FlowVector, m: int | None = None) -> Fraction:
    """Coefficient ``C_k`` of the functional ``C_k psi_k`` realising the ``P_k`` bound."""
    d = alpha.d
    kt = min(k, d - k)
    if m is None:
        m = compute_m_k(kt, alpha)
    c = edge_slope(kt, d, m + kt - 1)
    if kt != k:
        c = reflect_k(k, alpha).coefficient(c)
    return c


def extremal_coset(k: int, alpha: FlowVector) -> CosetClass:
    """The class ``[tau^s]`` with ``s = m_k + k - 1`` attaining the ``P_k`` bound."""
    d = alpha.d
    kt = min(k, d - k)
    s = compute_m_k(kt, alpha) + kt - 1
    tau = tau_sequence(kt, d)[s - 1]
    if kt != k:
        tau = reflect_k(k, alpha).untilde(tau)
    return canonical_rep(BlockComposition.maximal(k, d), alpha, tau)


def tau_direct_bound(k: int, alpha: FlowVector) -> Fraction:
    """``(h - C_k psi_k)`` evaluated on the extremal coset."""
    coset = extremal_coset(k, alpha)
    beta = coset.image
    return parabolic_entropy(coset.parabolic, beta) - maximal_parabolic_coefficient(k, alpha) * psi_k(k, beta)


def whole_cusp_bound(alpha: FlowVector) -> Fraction:
    return total_entropy(alpha) - alpha.positive_sum()


# --- the functional supported on lambda_1 and lambda_d -----------------------

def valid_m(alpha: FlowVector, m: int) -> bool:
    return 1 <= m <= alpha.d - 1 and alpha[m] >= 0 >= alpha[m + 1]


def default_m(alpha: FlowVector) -> int:
    """Number of strictly positive entries (``1`` for the zero flow)."""
    return alpha.positive_count() or 1


def phi_all(alpha: FlowVector, m: int | None = None) -> LinearFunctional:
    d = alpha.d
    if d < 3:
        raise ValueError("the lambda_1/lambda_d functional needs d >= 3")
    if m is None:
        m = default_m(alpha)
    if not valid_m(alpha, m):
        raise ValueError(f"m={m} does not satisfy alpha_m >= 0 >= alpha_(m+1)")
    z1, zd = phi_all_coefficients(d, m)
    coeffs = [ZERO] * d
    coeffs[0] += z1
    coeffs[-1] += zd
    return LinearFunctional(tuple(coeffs), f"phi_all[m={m}]")


def phi_all_coefficients(d: int, m: int) -> tuple[Fraction, Fraction]:
    scale = Fraction(d - 1, d - 2)
    return scale * (m - 1), -scale * (d - m - 1)


def phi_all_restriction(d: int, k: int, m: int) -> Fraction:
    """Multiple of ``psi_k`` that the functional equals on block-constant vectors of ``P_k``."""
    return Fraction((d - 1) * ((d - 2 * k) * m + d * (k - 1)), d * (d - 2))


def c_coefficient(d: int, k: int, m: int) -> Fraction:
    if not (2 <= k and 2 * k <= d and 1 <= m <= d - 1):
        raise ValueError(f"need 2 <= k <= d/2 and 1 <= m <= d-1 (d={d}, k={k}, m={m})")
    return Fraction((d - 1) * ((d - 2 * k) * m + d * (k - 1)), k * (d - k) * (d - 2))


def check_c_properties(d: int, k: int, m: int) -> tuple[bool, bool, bool, bool]:
    c = c_coefficient(d, k, m)
    return (
        c >= Fraction(d - 1, d - k),
        c <= Fraction(d - 1, k),
        k + c < d,
        k * c >= m,
    )


@dataclass(frozen=True)
class Domination:
    """Two-block composition dominating ``source`` for a lambda_1/lambda_d functional."""

    source: BlockComposition
    merged: BlockComposition
    parabolic: BlockComposition
    coefficient: Fraction
    coefficient_ok: bool


def dominating_maximal_parabolic(Q: BlockComposition, alpha: FlowVector, phi: LinearFunctional) -> Domination:
    d = alpha.d
    if Q.d != d or phi.d != d:
        raise ValueError("dimension mismatch")
    if len(Q) < 2:
        raise ValueError("the whole group has no dominating proper parabolic")
    if any(c != 0 for c in phi.coefficients[1:-1]):
        raise ValueError("functional must be supported on lambda_1 and lambda_d")
    z1, zd = phi.coefficients[0], phi.coefficients[-1]
    if len(Q) == 2:
        return Domination(Q, Q, Q, ZERO, True)
    k1, k3 = Q.blocks[0], Q.blocks[-1]
    k2 = d - k1 - k3
    merged = BlockComposition((k1, k2, k3))
    if k1 <= k3:
        coefficient = zd / (k3 * (k2 + k3))
        ok = -1 <= coefficient <= 0
        P = BlockComposition((k1, d - k1))
    else:
        coefficient = z1 / (k1 * (k1 + k2))
        ok = 0 <= coefficient <= 1
        P = BlockComposition((k1 + k2, k3))
    return Domination(Q, merged, P, coefficient, ok)


def delta_prop_inequalities(k: int, alpha: FlowVector, m: int | None = None) -> Fraction:
    """Gap between the whole-cusp value and the best ``P_k`` value of the functional.

    Uses the two explicit expressions split on ``floor(c)`` (below ``k`` or not).
    """
    d = alpha.d
    if d < 3:
        raise ValueError("needs d >= 3")
    if m is None:
        m = default_m(alpha)
    if not valid_m(alpha, m):
        raise ValueError(f"m={m} does not satisfy alpha_m >= 0 >= alpha_(m+1)")
    c = c_coefficient(d, k, m)
    fl = floor(c)
    frac = c - fl
    a = alpha
    pos = alpha.positive_sum()
    if 1 <= fl <= k - 1:
        value = sum((c * a[i] for i in range(1, k - fl + 1)), ZERO)
        for i in range(1, fl + 1):
            value += (fl + 1 - i) * a[k - fl + 2 * i - 1] + (c - i) * a[k - fl + 2 * i]
    elif k <= fl <= d - k - 1:
        value = sum((k * a[i] for i in range(1, fl - k + 2)), ZERO)
        value += sum(((k - i) * a[fl - k + 1 + 2 * i] for i in range(1, k)), ZERO)
        value += sum(((k + frac - i) * a[fl - k + 2 * i] for i in range(1, k + 1)), ZERO)
    else:
        raise ArithmeticError(f"floor(c)={fl} outside 1..{d - k - 1}")
    return value - pos


def tangent_coset(k: int, alpha: FlowVector, m: int | None = None) -> CosetClass:
    """The class ``[tau^(floor(c)+1)]`` where the functional's ``P_k`` maximum sits."""
    if m is None:
        m = default_m(alpha)
    c = c_coefficient(alpha.d, k, m)
    tau = tau_sequence(k, alpha.d)[floor(c)]
    return canonical_rep(BlockComposition.maximal(k, alpha.d), alpha, tau)


# --- auxiliary inequalities -------------------------------------------------

def _non_increasing(xs: Sequence[Fraction]) -> bool:
    return all(a >= b for a, b in zip(xs, xs[1:]))


def chebyshev_sum_check(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """``sum x_i y_i >= (1/n) sum x * sum y`` for non-increasing sequences."""
    if len(x) != len(y) or not x:
        raise ValueError("sequences must be non-empty and of equal length")
    if not (_non_increasing(x) and _non_increasing(y)):
        raise ValueError("both sequences must be non-increasing")
    n = len(x)
    lhs = n * sum((Fraction(a) * b for a, b in zip(x, y)), ZERO)
    return lhs >= sum(x, ZERO) * sum(y, ZERO)


def v_sequence_sum(s: int, t: int, kappa: Fraction) -> Fraction:
    kappa = Fraction(kappa)
    if t % 2:
        return Fraction(t + 1, 2) * (kappa + s + Fraction(t - 1, 2))
    return (Fraction(t, 2) + s) * (Fraction(t, 2) + kappa)


def v_sequence(s: int, t: int, kappa: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    """Weights ending in ``(.., 1, kappa)``, growing by 1 every two steps, constant head.

    Returns the weights and their sum; the sum is checked against the closed form.
    """
    kappa = Fraction(kappa)
    if s < 1 or t < 2 or not 0 <= kappa < 1:
        raise ValueError(f"need s >= 1, t >= 2, 0 <= kappa < 1 (s={s}, t={t}, kappa={kappa})")
    n = s + t
    v = [ZERO] * (n + 1)
    v[n] = kappa
    v[n - 1] = Fraction(1)
    for i in range(n - 2, s - 1, -1):
        v[i] = v[i + 2] + 1
    for i in range(1, s):
        v[i] = v[s]
    values = tuple(v[1:])
    total = sum(values, ZERO)
    if total != v_sequence_sum(s, t, kappa):
        raise ArithmeticError(f"direct sum {total} differs from closed form {v_sequence_sum(s, t, kappa)}")
    return values, total


def delta_weights(k: int, d: int, m: int) -> tuple[tuple[Fraction, ...], int, int, Fraction]:
    """Weights ``v`` with ``delta = sum v_i alpha_i - sum alpha_i^+``, plus ``(s, t, kappa)``."""
    c = c_coefficient(d, k, m)
    fl = floor(c)
    if fl <= k - 1:
        s, t = k - fl, 2 * fl
    else:
        s, t = fl - k + 1, 2 * k - 1
    values, _ = v_sequence(s, t, c - fl)
    return values, s, t, c - fl


def positive_part_dominance_check(v: Sequence[Fraction], m: int, alpha: FlowVector) -> bool:
    """``sum v_i alpha_i >= sum alpha_i^+`` for non-negative weights under either hypothesis.

    Hypothesis 1: ``m < n``, ``v`` non-increasing and the mean of ``v_i - 1``
    over ``i <= m`` is at least ``sum_{m<i<=n} v_i / (d - m)``.
    Hypothesis 2: ``m >= n``, ``v_i >= 1`` for ``i < n`` and ``sum v >= m``.
    """
    v = [Fraction(x) for x in v]
    d, n = alpha.d, len(v)
    if not 1 <= n <= d:
        raise ValueError(f"need 1 <= len(v) <= d (len={n}, d={d})")
    if any(x < 0 for x in v):
        raise ValueError("weights must be non-negative")
    if not valid_m(alpha, m):
        raise ValueError(f"m={m} does not satisfy alpha_m >= 0 >= alpha_(m+1)")
    if m < n:
        if not _non_increasing(v):
            raise ValueError("hypothesis 1 (m < n) needs non-increasing weights")
        head = sum((x - 1 for x in v[:m]), ZERO) / m
        tail = sum(v[m:], ZERO) / (d - m)
        if head < tail:
            raise ValueError(f"hypothesis 1 (m < n) fails: head mean {head} < tail mean {tail}")
    else:
        if any(x < 1 for x in v[:-1]):
            raise ValueError("hypothesis 2 (m >= n) needs v_i >= 1 for i < n")
        if sum(v, ZERO) < m:
            raise ValueError(f"hypothesis 2 (m >= n) needs sum v >= m (sum={sum(v, ZERO)})")
    return sum((x * alpha[i] for i, x in enumerate(v, start=1)), ZERO) - alpha.positive_sum() >= 0


# --- report -------------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicBound:
    k: int
    m_k: int
    coefficient: Fraction
    bound: Fraction
    witness: CosetClass


@dataclass(frozen=True)
class BoundReport:
    flow: FlowVector
    total: Fraction
    per_k: dict[int, ParabolicBound]
    borel_bound: Fraction
    whole_cusp_bound: Fraction
    phi_all: LinearFunctional | None
    phi_all_m: int | None
    degenerate: bool = field(default=False)


def bound_report(alpha: FlowVector) -> BoundReport:
    d = alpha.d
    per_k = {}
    for k in range(1, d):
        kt = min(k, d - k)
        per_k[k] = ParabolicBound(
            k=k,
            m_k=compute_m_k(kt, alpha),
            coefficient=maximal_parabolic_coefficient(k, alpha),
            bound=maximal_parabolic_bound(k, alpha),
            witness=extremal_coset(k, alpha),
        )
    if d >= 3:
        m = default_m(alpha)
        functional = phi_all(alpha, m)
    else:
        m, functional = None, None
    return BoundReport(
        flow=alpha,
        total=total_entropy(alpha),
        per_k=per_k,
        borel_bound=borel_bound(alpha),
        whole_cusp_bound=whole_cusp_bound(alpha) if d >= 3 else per_k[1].bound,
        phi_all=functional,
        phi_all_m=m,
        degenerate=alpha.is_zero,
    )
