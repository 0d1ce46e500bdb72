"""Brute-force verification by exhausting permutations and parabolic compositions.

Nothing in here uses the closed-form bounds to compute an expected value.
Values are recomputed from the pair-sum entropy and block averages, on an
integer-scaled copy of the flow (the flow times the lcm of its denominators),
and converted back to exact fractions at the end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Iterable, Iterator

from . import bounds, hull
from .flow import ZERO, BlockComposition, FlowVector, LinearFunctional, canonicalize_flow, format_rational
from .weyl import CosetClass, WeylElement, check_limit, enumerate_cosets, transposition_delta, apply_transposition

ALL_PARABOLICS_LIMIT = 7


# --- enumeration ----------------------------------------------------------------

def enumerate_parabolics(d: int, proper_only: bool = False) -> tuple[BlockComposition, ...]:
    """All compositions of ``d``, ordered by number of blocks then lexicographically."""
    out = []
    for cuts in range(d):
        for positions in combinations(range(1, d), cuts):
            edges = (0,) + positions + (d,)
            out.append(BlockComposition(tuple(b - a for a, b in zip(edges, edges[1:]))))
    if proper_only:
        out = [P for P in out if len(P) > 1]
    return tuple(out)


def _block_fillings(values: list[int], blocks: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """0-based index tuples, one per double coset, block by block.

    Indices inside a block increase, so the (sorted) values decrease.  Among
    index choices giving the same values the lexicographically first is kept.
    """
    d = len(values)

    def rec(remaining: tuple[int, ...], b: int, prefix: tuple[int, ...]):
        if b == len(blocks):
            yield prefix
            return
        seen = set()
        for chosen in combinations(remaining, blocks[b]):
            key = tuple(values[i] for i in chosen)
            if key in seen:
                continue
            seen.add(key)
            rest = tuple(i for i in remaining if i not in chosen)
            yield from rec(rest, b + 1, prefix + chosen)

    yield from rec(tuple(range(d)), 0, ())


def expected_coset_count(alpha: FlowVector, P: BlockComposition) -> int:
    """Number of double cosets, counted independently by multiset distributions."""
    mult: dict[Fraction, int] = {}
    for x in alpha.entries:
        mult[x] = mult.get(x, 0) + 1
    counts = list(mult.values())

    def rec(i: int, remaining: tuple[int, ...]) -> int:
        if i == len(P.blocks):
            return 1
        total = 0
        for split in _bounded_compositions(P.blocks[i], remaining):
            total += rec(i + 1, tuple(r - s for r, s in zip(remaining, split)))
        return total

    return rec(0, tuple(counts))


def _bounded_compositions(n: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if n == 0:
            yield ()
        return
    for first in range(min(n, caps[0]) + 1):
        for rest in _bounded_compositions(n - first, caps[1:]):
            yield (first,) + rest


def _scaled(alpha: FlowVector) -> tuple[list[int], int]:
    L = lcm(*(x.denominator for x in alpha.entries))
    return [int(x * L) for x in alpha.entries], L


def _pairs(P: BlockComposition) -> list[tuple[int, int]]:
    owner = P.block_of()
    d = P.d
    return [(i, j) for i in range(d) for j in range(d) if i != j and owner[i] <= owner[j]]


def _block_weights(P: BlockComposition, phi: LinearFunctional) -> tuple[list[int], int]:
    """Integer weights ``W_b`` and scale ``M`` with ``phi(pi_P(beta)) = sum_b W_b S_b / M``."""
    weights = [sum((phi.coefficients[i] for i in r), ZERO) / len(r) for r in P.ranges()]
    M = lcm(*(w.denominator for w in weights))
    return [int(w * M) for w in weights], M


@dataclass(frozen=True)
class _Evaluator:
    P: BlockComposition
    pairs: list
    ranges: list
    weights: list
    M: int

    @classmethod
    def build(cls, P: BlockComposition, phi: LinearFunctional) -> _Evaluator:
        weights, M = _block_weights(P, phi)
        return cls(P, _pairs(P), P.ranges(), weights, M)

    def scaled_value(self, beta: list[int]) -> int:
        """``M * L * (h - phi o pi)`` for the integer-scaled image ``beta``."""
        h = 0
        for i, j in self.pairs:
            x = beta[i] - beta[j]
            if x > 0:
                h += x
        pen = 0
        for w, r in zip(self.weights, self.ranges):
            if w:
                pen += w * sum(beta[i] for i in r)
        return self.M * h - pen


def _coset_from_indices(alpha: FlowVector, P: BlockComposition, indices: tuple[int, ...]) -> CosetClass:
    return CosetClass(WeylElement(tuple(i + 1 for i in indices)), P, alpha)


def brute_values(
    alpha: FlowVector, phi: LinearFunctional, P: BlockComposition, limit: int | None = None
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """``(h - phi)`` on every double coset of ``P``; yields ``(0-based indices, value)``."""
    check_limit(alpha.d, limit)
    vals, L = _scaled(alpha)
    ev = _Evaluator.build(P, phi)
    for idx in _block_fillings(vals, P.blocks):
        beta = [vals[i] for i in idx]
        yield idx, Fraction(ev.scaled_value(beta), ev.M * L)


def brute_max(
    alpha: FlowVector,
    phi: LinearFunctional,
    parabolics: Iterable[BlockComposition],
    limit: int | None = None,
) -> tuple[Fraction, tuple[BlockComposition, CosetClass]]:
    """Exact maximum of ``h(Q, a^w) - phi(pi_Q(alpha^w))`` over the given compositions.

    Ties are broken towards fewer blocks, then lexicographically on
    ``(blocks, representative)``.
    """
    check_limit(alpha.d, limit)
    vals, L = _scaled(alpha)
    best = None  # (numerator, denominator, tie-break key, P, indices)
    for P in parabolics:
        if P.d != alpha.d:
            raise ValueError("composition and flow dimensions differ")
        ev = _Evaluator.build(P, phi)
        den = ev.M * L
        for idx in _block_fillings(vals, P.blocks):
            num = ev.scaled_value([vals[i] for i in idx])
            if best is not None:
                lhs, rhs = num * best[1], best[0] * den
                if lhs < rhs or (lhs == rhs and (len(P), P.blocks, idx) >= best[2]):
                    continue
            best = (num, den, (len(P), P.blocks, idx), P, idx)
    if best is None:
        raise ValueError("no parabolics given")
    num, den, _, P, idx = best
    return Fraction(num, den), (P, _coset_from_indices(alpha, P, idx))


def borel_identity_values(alpha: FlowVector, limit: int | None = None) -> Iterator[Fraction]:
    """``(h - phi_B)`` for every permutation (not just every coset) of the flow."""
    d = alpha.d
    check_limit(d, limit)
    vals, L = _scaled(alpha)
    # phi_B has half-integer coefficients (d + 1 - 2i)/2 on a vector that is its own projection
    coeffs = [d + 1 - 2 * i for i in range(1, d + 1)]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for perm in permutations(vals):
        h = 0
        for i, j in pairs:
            x = perm[i] - perm[j]
            if x > 0:
                h += x
        pen = sum(c * x for c, x in zip(coeffs, perm))
        yield Fraction(2 * h - pen, 2 * L)


def pair_entropy(values: list[Fraction]) -> Fraction:
    """``sum over all ordered pairs of (x_i - x_j)^+``."""
    return sum(((a - b) for a in values for b in values if a > b), ZERO)


# --- hull -------------------------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(points: Iterable[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Strict upper hull (no collinear interior points), left to right, monotone chain."""
    top: dict[Fraction, Fraction] = {}
    for x, y in points:
        if x not in top or y > top[x]:
            top[x] = y
    out: list = []
    for p in sorted(top.items()):
        while len(out) >= 2 and _cross(out[-2], out[-1], p) >= 0:
            out.pop()
        out.append(p)
    return out


def point_cloud(k: int, alpha: FlowVector, limit: int | None = None) -> dict[tuple[Fraction, Fraction], tuple[int, ...]]:
    """``iota`` of every permutation, keyed by point, with the smallest realizing permutation."""
    d = alpha.d
    check_limit(d, limit)
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    vals, L = _scaled(alpha)
    pairs = _pairs(BlockComposition.maximal(k, d))
    memo: dict[tuple, tuple[Fraction, Fraction]] = {}
    cloud: dict[tuple[Fraction, Fraction], tuple[int, ...]] = {}
    for perm in permutations(range(d)):
        beta = [vals[i] for i in perm]
        key = (tuple(sorted(beta[:k])), tuple(sorted(beta[k:])))
        pt = memo.get(key)
        if pt is None:
            h = 0
            for i, j in pairs:
                x = beta[i] - beta[j]
                if x > 0:
                    h += x
            psi = Fraction(sum(beta[:k]), k * L) - Fraction(sum(beta[k:]), (d - k) * L)
            pt = memo[key] = (psi, Fraction(h, L))
        if pt not in cloud:
            cloud[pt] = perm  # permutations come in lexicographic order
    return cloud


def brute_upper_hull(k: int, alpha: FlowVector, limit: int | None = None) -> hull.HullBoundary:
    d = alpha.d
    cloud = point_cloud(k, alpha, limit)
    verts = upper_hull(cloud)
    P = BlockComposition.maximal(k, d)
    points = []
    for pt in verts:
        perm = cloud[pt]
        w = WeylElement(tuple(i + 1 for i in perm))
        points.append(hull.PlanePoint(pt[0], pt[1], _canonical(P, alpha, w)))
    slopes = tuple((b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(verts, verts[1:]))
    widths = tuple(b[0] - a[0] for a, b in zip(verts, verts[1:]))
    return hull.HullBoundary(k=k, flow=alpha, vertices=tuple(points), edge_slopes=slopes, edge_widths=widths)


def _canonical(P: BlockComposition, alpha: FlowVector, w: WeylElement) -> CosetClass:
    # independent of weyl.canonical_rep: sort each block by value, then greedy smallest index
    beta = [alpha[i] for i in w.images]
    target = []
    for r in P.ranges():
        target.extend(sorted((beta[i] for i in r), reverse=True))
    used = [False] * (alpha.d + 1)
    rep = []
    for v in target:
        i = next(i for i in range(1, alpha.d + 1) if not used[i] and alpha[i] == v)
        used[i] = True
        rep.append(i)
    return CosetClass(WeylElement(tuple(rep)), P, alpha)


# --- random flows -------------------------------------------------------------------

def random_flow(
    d: int,
    seed: int,
    max_denominator: int = 10,
    max_numerator: int = 10,
    pool: int | None = None,
) -> FlowVector:
    """Deterministic random flow.

    Draws ``d`` rationals ``p/q`` with ``p`` uniform in ``[-max_numerator,
    max_numerator]`` and ``q`` uniform in ``[1, max_denominator]`` from
    ``random.Random(seed)``, subtracts the exact mean and sorts.  With ``pool``
    the ``d`` entries are instead picked (with replacement) from ``pool`` such
    draws, which produces repeated entries.
    """
    if d < 2 or max_denominator < 1 or max_numerator < 1:
        raise ValueError("need d >= 2 and positive bounds")
    rng = random.Random(seed)

    def draw() -> Fraction:
        return Fraction(rng.randint(-max_numerator, max_numerator), rng.randint(1, max_denominator))

    if pool:
        choices = [draw() for _ in range(pool)]
        raw = [rng.choice(choices) for _ in range(d)]
    else:
        raw = [draw() for _ in range(d)]
    return canonicalize_flow(raw, project=True)


def derive_seeds(seed: int, trials: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(2**32) for _ in range(trials)]


# --- verification report --------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    expected: Fraction
    actual: Fraction
    relation: str = "=="

    @property
    def passed(self) -> bool:
        if self.relation == "==":
            return self.actual == self.expected
        if self.relation == ">=":
            return self.actual >= self.expected
        if self.relation == "<=":
            return self.actual <= self.expected
        raise ValueError(self.relation)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "expected": format_rational(self.expected),
            "actual": format_rational(self.actual),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    flow: FlowVector
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def eq(self, name: str, expected, actual) -> None:
        self.checks.append(Check(name, Fraction(expected), Fraction(actual), "=="))

    def ge(self, name: str, bound, actual) -> None:
        self.checks.append(Check(name, Fraction(bound), Fraction(actual), ">="))

    def flag(self, name: str, ok: bool) -> None:
        self.checks.append(Check(name, Fraction(1), Fraction(int(bool(ok))), "=="))

    def to_dict(self) -> dict:
        return {
            "flow": [format_rational(x) for x in self.flow.entries],
            "meta": self.meta,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def table(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"flow = ({', '.join(format_rational(x) for x in self.flow.entries)})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status}  {c.name.ljust(width)}  expected {c.relation} {format_rational(c.expected)}"
                f"  actual {format_rational(c.actual)}"
            )
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _hull_mismatch(a: hull.HullBoundary, b: hull.HullBoundary) -> int:
    pa, pb = a.points(), b.points()
    return abs(len(pa) - len(pb)) + sum(1 for x, y in zip(pa, pb) if x != y)


def domination_violations(alpha: FlowVector, phi: LinearFunctional, limit: int | None = None) -> int:
    """Count ``(Q, w)`` with ``(h - phi)[w]_Q`` exceeding the value on the chosen two-block ``P``."""
    d = alpha.d
    check_limit(d, limit)
    vals, L = _scaled(alpha)
    bad = 0
    for Q in enumerate_parabolics(d, proper_only=True):
        if len(Q) < 3:
            continue
        P = bounds.dominating_maximal_parabolic(Q, alpha, phi).parabolic
        evq, evp = _Evaluator.build(Q, phi), _Evaluator.build(P, phi)
        k = P.blocks[0]
        for idx in _block_fillings(vals, Q.blocks):
            beta = [vals[i] for i in idx]
            beta_p = sorted(beta[:k], reverse=True) + sorted(beta[k:], reverse=True)
            if evq.scaled_value(beta) * evp.M > evp.scaled_value(beta_p) * evq.M:
                bad += 1
    return bad


def verify_all(alpha: FlowVector, limit: int | None = None, all_parabolics_limit: int = ALL_PARABOLICS_LIMIT) -> VerificationReport:
    """Run the full equality/inequality battery on one flow; failures are recorded, never raised."""
    d = alpha.d
    check_limit(d, limit)
    report = VerificationReport(alpha, meta={"d": d, "degenerate": alpha.is_zero})
    h_G = pair_entropy(list(alpha.entries))
    pos = sum((x for x in alpha.entries if x > 0), ZERO)

    report.eq("entropy.total", h_G, bounds.total_entropy(alpha))

    borel = list(borel_identity_values(alpha, limit))
    report.eq("borel.identity.min", h_G / 2, min(borel))
    report.eq("borel.identity.max", h_G / 2, max(borel))
    report.eq("borel.bound", h_G / 2, bounds.borel_bound(alpha))

    closed = {k: bounds.maximal_parabolic_bound(k, alpha) for k in range(1, d)}
    for k in range(1, d):
        P = BlockComposition.maximal(k, d)
        C = bounds.maximal_parabolic_coefficient(k, alpha)
        phi_k = LinearFunctional.simple_root(k, d).scale(C)
        brute, _ = brute_max(alpha, phi_k, [P], limit)
        boundary = hull.upper_boundary(k, alpha)
        crossing = hull.crossing_edge(boundary)
        report.eq(f"P{k}.bound.brute", brute, closed[k])
        report.eq(f"P{k}.bound.hull", crossing.f, closed[k])
        report.eq(f"P{k}.bound.tau", bounds.tau_direct_bound(k, alpha), closed[k])
        lo, hi = crossing.slope_interval
        report.flag(f"P{k}.coefficient_in_slope_interval", alpha.is_zero or lo <= C <= hi)
        report.eq(f"P{k}.symmetry", closed[d - k], closed[k])
        report.eq(f"P{k}.hull.mismatch", 0, _hull_mismatch(brute_upper_hull(k, alpha, limit), boundary))

        classes = enumerate_cosets(P, alpha, limit)
        report.eq(f"P{k}.coset_count", expected_coset_count(alpha, P), len(classes))

        kt = min(k, d - k)
        # every admissible m gives the same supporting value
        pts = list(point_cloud(k, alpha, limit))
        bad = 0
        for m in bounds.admissible_m(kt, alpha):
            c = bounds.maximal_parabolic_coefficient(k, alpha, m)
            if max(y - c * x for x, y in pts) != closed[k]:
                bad += 1
        report.eq(f"P{k}.admissible_m.mismatch", 0, bad)

        bad = 0
        for sigma in classes:
            before = _plane(k, sigma)
            for n in range(1, d):
                try:
                    dh, dpsi = transposition_delta(k, sigma, n)
                except ValueError:
                    continue
                after = _plane(k, apply_transposition(sigma, n))
                if (before[1] - after[1], before[0] - after[0]) != (dh, dpsi):
                    bad += 1
        report.eq(f"P{k}.transposition.mismatch", 0, bad)

        if k <= d - k:
            bad = 0
            taus = hull.tau_sequence(k, d)
            tau_pts = [_plane(k, hull.iota(k, alpha, t).witness) for t in taus]
            for s in range(1, d):
                _, _, width = hull.slope_budget(k, alpha, s)
                if tau_pts[s - 1][0] - tau_pts[s][0] != width:
                    bad += 1
            report.eq(f"P{k}.slope_budget.mismatch", 0, bad)
        else:
            ctx = hull.reflect_k(k, alpha)
            Pt = BlockComposition.maximal(ctx.k_tilde, d)
            bad = 0
            for sigma in classes:
                psi, h = _plane(k, sigma)
                wt = _canonical(Pt, alpha, ctx.tilde(sigma.rep))
                psit, ht = _plane(ctx.k_tilde, wt)
                if psi != -psit or h - ht != -ctx.K * psit:
                    bad += 1
            report.eq(f"P{k}.reflection.mismatch", 0, bad)

    for k in range(1, d // 2):
        report.ge(f"monotone.P{k}>=P{k + 1}", closed[k + 1], closed[k])
    report.eq("whole_cusp.vs_P1", h_G - pos, closed[1])
    if not alpha.is_zero:
        report.eq("m_1.positive_count", sum(1 for x in alpha.entries if x > 0), bounds.compute_m_k(1, alpha))

    if d == 2:
        report.eq("d2.borel", h_G / 2, bounds.borel_bound(alpha))
        report.eq("d2.P1", h_G / 2, closed[1])
        report.eq("d2.whole_cusp", h_G / 2, bounds.bound_report(alpha).whole_cusp_bound)
    else:
        _phi_all_checks(report, alpha, h_G, pos, limit, all_parabolics_limit)
    return report


def _plane(k: int, sigma: CosetClass) -> tuple[Fraction, Fraction]:
    beta = [sigma.flow[i] for i in sigma.rep.images]
    d = len(beta)
    owner = [0] * k + [1] * (d - k)
    h = sum(
        (beta[i] - beta[j] for i in range(d) for j in range(d) if owner[i] <= owner[j] and beta[i] > beta[j]),
        ZERO,
    )
    psi = sum(beta[:k], ZERO) / k - sum(beta[k:], ZERO) / (d - k)
    return psi, h


def _phi_all_checks(report, alpha, h_G, pos, limit, all_parabolics_limit) -> None:
    d = alpha.d
    target = h_G - pos
    phi = bounds.phi_all(alpha)
    maximal = [BlockComposition.maximal(k, d) for k in range(1, d)]
    value, _ = brute_max(alpha, phi, maximal, limit)
    report.eq("phi_all.max.maximal", target, value)
    if d <= all_parabolics_limit:
        value, (Q, _) = brute_max(alpha, phi, enumerate_parabolics(d, proper_only=True), limit)
        report.eq("phi_all.max.all", target, value)
        report.eq("phi_all.argmax.blocks", 2, len(Q))
        report.eq("phi_all.domination.violations", 0, domination_violations(alpha, phi, limit))
    for Q in enumerate_parabolics(d, proper_only=True):
        if len(Q) >= 3:
            dom = bounds.dominating_maximal_parabolic(Q, alpha, phi)
            report.flag(f"phi_all.certificate.{''.join(map(str, Q.blocks))}", dom.coefficient_ok)

    ms = [m for m in range(1, d) if bounds.valid_m(alpha, m)]
    for k in range(2, d // 2 + 1):
        for m in ms:
            props = bounds.check_c_properties(d, k, m)
            report.flag(f"c_properties.k{k}.m{m}", all(props))
            delta = bounds.delta_prop_inequalities(k, alpha, m)
            phi_m = bounds.phi_all(alpha, m)
            best, _ = brute_max(alpha, phi_m, [BlockComposition.maximal(k, d)], limit)
            report.ge(f"delta.k{k}.m{m}.nonneg", 0, delta)
            report.eq(f"delta.k{k}.m{m}.direct", target - best, delta)
            weights, _, _, _ = bounds.delta_weights(k, d, m)
            weighted = sum((v * alpha[i] for i, v in enumerate(weights, start=1)), ZERO) - pos
            report.eq(f"delta.k{k}.m{m}.weights", weighted, delta)
            report.eq(f"delta.k{k}.m{m}.weight_sum", k * bounds.c_coefficient(d, k, m), sum(weights, ZERO))
