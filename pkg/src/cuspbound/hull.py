"""The ``(psi_k, h_k)``-plane: extremal permutation sequence and upper hull boundary.

For ``k <= d/2`` the upper boundary of the hull of all points
``iota(w) = (psi_k(w), h_k(w))`` is the polyline through ``iota(tau^1), ...,
iota(tau^d)``; edge ``s`` has slope ``k(d-k)/d * s`` and psi-width ``d_s``.
Larger ``k`` is handled by swapping the two blocks (:func:`reflect_k`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .flow import ZERO, BlockComposition, FlowVector, parabolic_entropy_split, psi_k
from .weyl import CosetClass, WeylElement, apply_weyl, canonical_rep, transposition


@dataclass(frozen=True)
class PlanePoint:
    psi: Fraction
    h: Fraction
    witness: CosetClass

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        return (self.psi, self.h)


@dataclass(frozen=True)
class HullBoundary:
    """Upper component of the hull boundary, left to right.

    ``edge_tau_index[e]`` is the index ``s`` of the tau-step realising edge
    ``e`` (in the reduced problem ``min(k, d-k)``); ``collapsed`` lists steps of
    zero width that were merged because of repeated flow entries.
    """

    k: int
    flow: FlowVector
    vertices: tuple[PlanePoint, ...]
    edge_slopes: tuple[Fraction, ...]
    edge_widths: tuple[Fraction, ...]
    edge_tau_index: tuple[int, ...] = ()
    vertex_tau_indices: tuple[tuple[int, ...], ...] = ()
    collapsed: tuple[int, ...] = ()

    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [v.xy for v in self.vertices]

    def value_at(self, psi: Fraction) -> Fraction:
        """Height of the polyline above ``psi`` (must lie within its range)."""
        pts = self.points()
        if not pts[0][0] <= psi <= pts[-1][0]:
            raise ValueError(f"psi={psi} outside [{pts[0][0]}, {pts[-1][0]}]")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= psi <= x1:
                return y0 + (y1 - y0) * (psi - x0) / (x1 - x0)
        return pts[0][1]

    def supporting_value(self, c: Fraction) -> Fraction:
        """``max (h - c * psi)`` over the hull, i.e. over its upper vertices."""
        return max(v.h - c * v.psi for v in self.vertices)


@dataclass(frozen=True)
class CrossingResult:
    f: Fraction
    slope_interval: tuple[Fraction, Fraction]
    vertex_hit: CosetClass | None = None

    @property
    def at_vertex(self) -> bool:
        return self.vertex_hit is not None


def iota(k: int, alpha: FlowVector, w: WeylElement) -> PlanePoint:
    d = alpha.d
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    coset = canonical_rep(BlockComposition.maximal(k, d), alpha, w)
    beta = coset.image
    levi, unipotent = parabolic_entropy_split(coset.parabolic, beta)
    return PlanePoint(psi_k(k, beta), levi + unipotent, coset)


def step_positions(k: int, d: int, s: int) -> tuple[int, ...]:
    """Positions ``j <= k`` that can move along an edge of slope index ``s``."""
    if not 1 <= s <= d - 1:
        raise ValueError(f"s must satisfy 1 <= s <= d-1 (s={s}, d={d})")
    lo = max(k + 1 - s, 1)
    hi = min(d - s, k)
    return tuple(range(lo, hi + 1))


def _complete(head: list[int], d: int) -> WeylElement:
    rest = sorted(set(range(1, d + 1)) - set(head))
    return WeylElement(tuple(head) + tuple(rest))


def _require_small_k(k: int, d: int) -> None:
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    if 2 * k > d:
        raise ValueError(f"k={k} > d/2; use reflect_k to work with k={d - k}")


def tau_closed_form(k: int, d: int) -> tuple[WeylElement, ...]:
    """tau^1 .. tau^d from the explicit description of their first blocks."""
    _require_small_k(k, d)
    seq: list[WeylElement] = []
    for s in range(1, k + 1):
        head = []
        for j in range(1, k + 1):
            head.append(j if j <= k - s + 1 else head[-1] + 2)
        seq.append(_complete(head, d))
    for s in range(1, d - 2 * k + 1):
        seq.append(_complete([(s - 1) + 2 * j for j in range(1, k + 1)], d))
    for s in range(1, k + 1):
        head = [0] * k
        for j in range(k, 0, -1):
            head[j - 1] = d - k + j if j > k - s else head[j] - 2
        seq.append(_complete(head, d))
    return tuple(seq)


def tau_inductive(k: int, d: int) -> tuple[WeylElement, ...]:
    """tau^{s+1} = (prod over j in J_s of T_{tau^s_j}) tau^s, starting at the identity."""
    _require_small_k(k, d)
    seq = [WeylElement.identity(d)]
    for s in range(1, d):
        current = seq[-1]
        for n in sorted(current[j] for j in step_positions(k, d, s)):
            current = transposition(n, d) * current
        head = sorted(current.images[:k])
        seq.append(_complete(head, d))
    return tuple(seq)


def tau_sequence(k: int, d: int) -> tuple[WeylElement, ...]:
    return tau_closed_form(k, d)


def tau_last(k: int, d: int) -> WeylElement:
    """The final element: ``d-k+i`` for ``i <= k`` and ``i-k`` afterwards."""
    return WeylElement(tuple(d - k + i if i <= k else i - k for i in range(1, d + 1)))


def slope_budget(k: int, alpha: FlowVector, s: int) -> tuple[tuple[int, ...], tuple[int, ...], Fraction]:
    """``(J_s, N_s, d_s)``: movable positions, moved values and the psi-width at slope index ``s``."""
    d = alpha.d
    _require_small_k(k, d)
    J = step_positions(k, d, s)
    N = tuple(s + 2 * j - k - 1 for j in J)
    width = Fraction(d, k * (d - k)) * sum((alpha[n] - alpha[n + 1] for n in N), ZERO)
    return J, N, width


def edge_slope(k: int, d: int, s: int) -> Fraction:
    return Fraction(k * (d - k), d) * s


@dataclass(frozen=True)
class ReflectionContext:
    """Swap of the two blocks, relating ``P_k`` for ``k > d/2`` to ``P_{d-k}``."""

    k: int
    flow: FlowVector

    @property
    def d(self) -> int:
        return self.flow.d

    @property
    def k_tilde(self) -> int:
        return self.d - self.k

    @property
    def K(self) -> int:
        return self.k * (self.d - self.k)

    def tilde(self, w: WeylElement) -> WeylElement:
        """Move the last ``d-k`` entries of ``w`` in front of the first ``k``."""
        return WeylElement(w.images[self.k:] + w.images[: self.k])

    def untilde(self, w_tilde: WeylElement) -> WeylElement:
        kt = self.k_tilde
        return WeylElement(w_tilde.images[kt:] + w_tilde.images[:kt])

    def coefficient(self, c_tilde: Fraction) -> Fraction:
        """Slope for ``P_k`` matching slope ``c_tilde`` for ``P_{d-k}``."""
        return self.K - c_tilde

    def point(self, psi_tilde: Fraction, h_tilde: Fraction) -> tuple[Fraction, Fraction]:
        """Map a point of the reduced plane into the ``(psi_k, h_k)``-plane."""
        return -psi_tilde, h_tilde - self.K * psi_tilde


def reflect_k(k: int, alpha: FlowVector) -> ReflectionContext:
    d = alpha.d
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    if 2 * k <= d:
        raise ValueError(f"k={k} <= d/2 needs no reflection")
    return ReflectionContext(k, alpha)


def upper_boundary(k: int, alpha: FlowVector) -> HullBoundary:
    d = alpha.d
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must satisfy 1 <= k <= d-1 (k={k}, d={d})")
    kt = min(k, d - k)
    reflection = reflect_k(k, alpha) if kt != k else None
    P = BlockComposition.maximal(k, d)

    raw: list[PlanePoint] = []
    for tau in tau_sequence(kt, d):
        p = iota(kt, alpha, tau)
        if reflection is None:
            raw.append(p)
        else:
            psi, h = reflection.point(p.psi, p.h)
            raw.append(PlanePoint(psi, h, canonical_rep(P, alpha, reflection.untilde(tau))))

    # runs of coinciding consecutive points, in tau order
    runs: list[list[int]] = [[1]]
    for s in range(2, d + 1):
        if raw[s - 1].xy == raw[runs[-1][0] - 1].xy:
            runs[-1].append(s)
        else:
            runs.append([s])
    collapsed = tuple(s for run in runs for s in run[:-1])
    verts = [raw[run[0] - 1] for run in runs]
    edge_index = [run[-1] for run in runs[:-1]]
    slopes = [edge_slope(kt, d, s) for s in edge_index]
    if reflection is not None:
        slopes = [reflection.coefficient(c) for c in slopes]
    widths = [abs(a.psi - b.psi) for a, b in zip(verts, verts[1:])]
    run_indices = [tuple(r) for r in runs]

    if reflection is None:
        # tau order runs right to left for small k
        verts.reverse()
        slopes.reverse()
        widths.reverse()
        edge_index.reverse()
        run_indices.reverse()
    return HullBoundary(
        k=k,
        flow=alpha,
        vertices=tuple(verts),
        edge_slopes=tuple(slopes),
        edge_widths=tuple(widths),
        edge_tau_index=tuple(edge_index),
        vertex_tau_indices=tuple(run_indices),
        collapsed=collapsed,
    )


def crossing_edge(boundary: HullBoundary) -> CrossingResult:
    """Where the upper boundary meets ``psi = 0`` and the admissible slopes there."""
    verts = boundary.vertices
    if not verts:
        raise ValueError("empty boundary")
    if len(verts) == 1:
        return CrossingResult(verts[0].h, (ZERO, ZERO), verts[0].witness)
    if not verts[0].psi <= 0 <= verts[-1].psi:
        raise ValueError("boundary does not straddle psi = 0")
    slopes = boundary.edge_slopes
    for i, v in enumerate(verts):
        if v.psi == 0:
            left = slopes[i - 1] if i > 0 else slopes[i]
            right = slopes[i] if i < len(slopes) else slopes[i - 1]
            return CrossingResult(v.h, (min(left, right), max(left, right)), v.witness)
    for i, (a, b) in enumerate(zip(verts, verts[1:])):
        if a.psi < 0 < b.psi:
            c = slopes[i]
            return CrossingResult(a.h - c * a.psi, (c, c))
    raise AssertionError("unreachable: straddling boundary without crossing")


def path_to(sigma: CosetClass) -> list[CosetClass]:
    """A path of single transpositions from the identity class to ``sigma``.

    Moves the value at position ``k``, then ``k-1``, ..., up to the target
    value, one adjacent transposition at a time.
    """
    alpha = sigma.flow
    P = sigma.parabolic
    if len(P) != 2:
        raise ValueError("paths are defined for two-block compositions")
    k, d = P.blocks[0], alpha.d
    path = [canonical_rep(P, alpha, WeylElement.identity(d))]
    current = WeylElement.identity(d)
    target = sorted(sigma.rep.images[:k])
    for pos in range(k, 0, -1):
        for n in range(pos, target[pos - 1]):
            current = transposition(n, d) * current
            path.append(canonical_rep(P, alpha, current))
    return path


def image_points(k: int, alpha: FlowVector, classes) -> list[tuple[Fraction, Fraction]]:
    """Plane coordinates of the given coset classes of ``P_k``."""
    out = []
    for c in classes:
        beta = apply_weyl(alpha, c.rep)
        levi, unipotent = parabolic_entropy_split(c.parabolic, beta)
        out.append((psi_k(k, beta), levi + unipotent))
    return out
