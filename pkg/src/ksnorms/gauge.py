"""Gauge-based Henstock-Kurzweil integration on a real interval.

Every sum produced here is a genuine Riemann sum over a tagged partition.
A panel ``[u, w]`` is evaluated with an ``n``-point Gauss-Legendre rule, and
the Chebyshev-Markov-Stieltjes separation property guarantees that node
``x_j`` lies strictly inside ``[u + W_{j-1}, u + W_j]`` where ``W_j`` are the
cumulative weights.  So the rule is the Riemann sum of the partition into
those cells, tagged at the nodes.

Declared singular points ``s`` are covered by a cell ``[s, s + d]`` (or
``[s - d, s]``) tagged at ``s`` itself, where the integrand is taken to be 0.
Shrinking ``d`` is the gauge refinement at ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Gauge",
    "TaggedPartition",
    "HKResult",
    "HKConvergenceError",
    "hk_integrate",
]

_EPS = np.finfo(float).eps


class HKConvergenceError(ArithmeticError):
    """Raised when a depth or evaluation cap is hit before convergence.

    ``last_sums`` holds the last two Riemann sums that were compared.
    """

    def __init__(self, message: str, last_sums: tuple[float, float]):
        super().__init__(f"{message} (last sums: {last_sums[0]!r}, {last_sums[1]!r})")
        self.last_sums = last_sums


@dataclass(frozen=True)
class Gauge:
    """A gauge on ``[a, b]``: a strictly positive radius at every point."""

    radius: Callable[[float], float]

    def __call__(self, x: float) -> float:
        return self.radius(x)

    def is_positive(self, points: Sequence[float]) -> bool:
        return all(self.radius(x) > 0 for x in points)


@dataclass(frozen=True)
class TaggedPartition:
    """Non-overlapping cells ``[lower[j], upper[j]]`` with tags ``tags[j]``."""

    lower: np.ndarray
    upper: np.ndarray
    tags: np.ndarray

    def __len__(self) -> int:
        return len(self.tags)

    def sorted(self) -> "TaggedPartition":
        order = np.argsort(self.lower, kind="stable")
        return TaggedPartition(self.lower[order], self.upper[order], self.tags[order])

    def covers(self, a: float, b: float, atol: float = 0.0) -> bool:
        """True iff the cells tile ``[a, b]`` without gaps or overlaps."""
        p = self.sorted()
        if len(p) == 0:
            return False
        joints = np.abs(p.lower[1:] - p.upper[:-1])
        scale = max(abs(a), abs(b), 1.0)
        slack = atol + 8 * _EPS * scale
        return (
            abs(p.lower[0] - a) <= slack
            and abs(p.upper[-1] - b) <= slack
            and bool(np.all(joints <= slack))
        )

    def tags_inside(self) -> bool:
        return bool(np.all((self.lower <= self.tags) & (self.tags <= self.upper)))

    def is_delta_fine(self, gauge: Gauge) -> bool:
        """Each cell lies in the open ball of radius ``gauge(tag)`` about its tag."""
        for lo, hi, t in zip(self.lower, self.upper, self.tags):
            r = gauge(float(t))
            if not (t - r < lo and hi < t + r):
                return False
        return True

    def riemann_sum(self, f: Callable, zero_at: Sequence[float] = ()) -> float:
        """``sum f(tag) * length``, with ``f`` taken as 0 at the points in ``zero_at``."""
        values = np.zeros(len(self.tags))
        mask = ~np.isin(self.tags, np.asarray(zero_at, dtype=float))
        if mask.any():
            values[mask] = _evaluate(f, self.tags[mask])
        return math.fsum(values * (self.upper - self.lower))

    def fitting_gauge(self, slack: float = 1e-9) -> Gauge:
        """A gauge for which this partition is δ-fine.

        Radius at a tag is the larger distance to its cell's ends, padded by
        ``slack``; points that are not tags get radius ``slack``.
        """
        reach: dict[float, float] = {}
        for lo, hi, t in zip(self.lower, self.upper, self.tags):
            r = max(t - lo, hi - t)
            reach[float(t)] = max(reach.get(float(t), 0.0), r)
        return Gauge(lambda x: reach.get(float(x), 0.0) * (1 + slack) + slack)


@dataclass(frozen=True)
class HKResult:
    value: float
    achieved_tol: float
    refinement_depth: int
    rounds: int = 1
    evaluations: int = 0
    partition: TaggedPartition | None = field(default=None, repr=False)


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(t))) for t in x])


class _Rule:
    """Gauss-Legendre rule on [0, 1] plus the matching tagged cells."""

    def __init__(self, order: int):
        x, w = np.polynomial.legendre.leggauss(order)
        self.nodes = (x + 1) / 2
        self.weights = w / 2
        cum = np.concatenate([[0.0], np.cumsum(self.weights)])
        cum[-1] = 1.0
        self.cells = cum

    def apply(self, f, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (sum f, sum |f|) for each panel."""
        width = hi - lo
        pts = lo[:, None] + width[:, None] * self.nodes[None, :]
        vals = _evaluate(f, pts.ravel()).reshape(pts.shape)
        s = (vals * self.weights).sum(axis=1) * width
        sa = (np.abs(vals) * self.weights).sum(axis=1) * width
        return s, sa

    def partition(self, lo: np.ndarray, hi: np.ndarray) -> TaggedPartition:
        width = (hi - lo)[:, None]
        lower = lo[:, None] + width * self.cells[None, :-1]
        upper = lo[:, None] + width * self.cells[None, 1:]
        upper[:, -1] = hi
        tags = lo[:, None] + width * self.nodes[None, :]
        return TaggedPartition(lower.ravel(), upper.ravel(), tags.ravel())


class _Panels:
    """Accepted panels, stored as their two halves' values."""

    def __init__(self):
        self.lo: list[np.ndarray] = []
        self.hi: list[np.ndarray] = []
        self.val: list[np.ndarray] = []
        self.err: list[np.ndarray] = []

    def add(self, lo, hi, val, err):
        self.lo.append(lo)
        self.hi.append(hi)
        self.val.append(val)
        self.err.append(err)

    def total(self) -> tuple[float, float]:
        if not self.val:
            return 0.0, 0.0
        return math.fsum(np.concatenate(self.val)), math.fsum(np.concatenate(self.err))


_CHUNK = 1 << 16
_WIDTH_FLOOR = 1e-10


def _converge(f, rule, lo, hi, share_per_length, max_depth, accepted, stats, budget):
    """Bisect panels until the coarse and halved rules agree within their share."""
    coarse, _ = rule.apply(f, lo, hi)
    stats["evaluations"] += lo.size * rule.nodes.size
    depth = 0
    while lo.size:
        if depth > max_depth:
            raise _CapReached(f"panel bisection exceeded depth {max_depth}")
        next_lo, next_hi, next_coarse = [], [], []
        for start in range(0, lo.size, _CHUNK):
            pl, ph = lo[start : start + _CHUNK], hi[start : start + _CHUNK]
            pc = coarse[start : start + _CHUNK]
            mid = 0.5 * (pl + ph)
            left, left_abs = rule.apply(f, pl, mid)
            right, right_abs = rule.apply(f, mid, ph)
            stats["evaluations"] += 2 * pl.size * rule.nodes.size
            if stats["evaluations"] > budget:
                raise _CapReached(f"evaluation budget {budget} exhausted")
            fine = left + right
            err = np.abs(fine - pc)
            floor = 64 * _EPS * (left_abs + right_abs)
            ok = (err <= share_per_length * (ph - pl)) | (err <= floor)
            # Panels this narrow only see evaluation noise; stop there.
            ok |= (ph - pl) <= _WIDTH_FLOOR * np.maximum(np.abs(pl), np.abs(ph))
            ok |= ~((pl < mid) & (mid < ph))
            accepted.add(np.stack([pl[ok], mid[ok]]), np.stack([mid[ok], ph[ok]]),
                         fine[ok], err[ok])
            bad = ~ok
            next_lo += [pl[bad], mid[bad]]
            next_hi += [mid[bad], ph[bad]]
            next_coarse += [left[bad], right[bad]]
        lo = np.concatenate(next_lo) if next_lo else np.empty(0)
        hi = np.concatenate(next_hi) if next_hi else np.empty(0)
        coarse = np.concatenate(next_coarse) if next_coarse else np.empty(0)
        if lo.size:
            depth += 1
    stats["depth"] = max(stats["depth"], depth)


class _CapReached(Exception):
    pass


@dataclass
class _SingularCell:
    point: float
    side: int  # +1 covers [point, point + d], -1 covers [point - d, point]
    radius: float

    def span(self, radius: float) -> tuple[float, float]:
        if self.side > 0:
            return self.point, self.point + radius
        return self.point - radius, self.point


def hk_integrate(
    f: Callable,
    a: float,
    b: float,
    tol: float = 1e-8,
    singularities: Sequence[float] = (),
    *,
    breakpoints: Sequence[float] = (),
    max_depth: int = 40,
    max_evaluations: int = 50_000_000,
    order: int = 32,
    keep_partition: bool = False,
) -> HKResult:
    """Henstock-Kurzweil integral of ``f`` over ``[a, b]`` by gauge refinement.

    Parameters
    ----------
    f : callable
        Integrand; vectorized callables are used directly, scalar ones are
        mapped point by point.
    a, b : float
        Interval ends, ``a < b``.
    tol : float
        Requested accuracy.
    singularities : sequence of float
        Points where ``f`` may blow up.  The integrand is treated as 0 there
        and the gauge radius at each such point is shrunk round by round.
    breakpoints : sequence of float
        Points where ``f`` may jump; panels never straddle them.
    max_depth : int
        Cap on both panel bisection depth and singular-gauge rounds.
    max_evaluations : int
        Cap on integrand evaluations.
    order : int
        Gauss-Legendre order of the panel rule.
    keep_partition : bool
        Attach the final δ-fine tagged partition to the result.

    Returns
    -------
    HKResult
        ``value`` is the last Riemann sum; ``achieved_tol`` bounds the
        accepted local discrepancies plus the last change between rounds.

    Raises
    ------
    HKConvergenceError
        When a depth or evaluation cap is reached first.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rule = _Rule(order)
    length = b - a
    share_per_length = 0.25 * tol / length
    stats = {"depth": 0, "evaluations": 0}

    sing = sorted({float(s) for s in singularities if a <= s <= b})
    cuts = [float(c) for c in breakpoints if a < c < b]
    breaks = sorted(set([a, b] + sing + cuts))
    cells: list[_SingularCell] = []
    seeds_lo, seeds_hi = [], []
    for left, right in zip(breaks[:-1], breaks[1:]):
        gap = right - left
        lo, hi = left, right
        if left in sing:
            cells.append(_SingularCell(left, +1, gap / 4))
            lo = left + gap / 4
        if right in sing:
            cells.append(_SingularCell(right, -1, gap / 4))
            hi = right - gap / 4
        edges = np.linspace(lo, hi, 9)
        seeds_lo.append(edges[:-1])
        seeds_hi.append(edges[1:])

    accepted = _Panels()
    last_pair = (math.nan, math.nan)

    def run(lo, hi):
        try:
            _converge(f, rule, lo, hi, share_per_length, max_depth, accepted, stats,
                      max_evaluations)
        except _CapReached as exc:
            raise HKConvergenceError(str(exc), last_pair) from None

    run(np.concatenate(seeds_lo), np.concatenate(seeds_hi))
    total, err_sum = accepted.total()
    rounds = 1
    if cells:
        sums = [total]
        diffs: list[float] = []
        factors: list[float] = []
        fit: dict = {}
        while True:
            if rounds > max_depth:
                raise HKConvergenceError(
                    f"singular gauge not settled after {max_depth} rounds",
                    (sums[-2], sums[-1]),
                )
            factor = _shrink_factor(diffs, factors, tol, fit)
            new_lo, new_hi = [], []
            for cell in cells:
                smaller = cell.radius / factor
                outer_lo, outer_hi = cell.span(cell.radius)
                inner_lo, inner_hi = cell.span(smaller)
                if cell.side > 0:
                    piece = (inner_hi, outer_hi)
                else:
                    piece = (outer_lo, inner_lo)
                if not piece[0] < piece[1]:
                    raise HKConvergenceError(
                        f"gauge at singular point {cell.point} below float resolution",
                        (sums[-2] if len(sums) > 1 else math.nan, sums[-1]),
                    )
                new_lo.append(piece[0])
                new_hi.append(piece[1])
                cell.radius = smaller
            last_pair = (sums[-2] if len(sums) > 1 else math.nan, sums[-1])
            run(np.array(new_lo), np.array(new_hi))
            total, err_sum = accepted.total()
            rounds += 1
            diffs.append(total - sums[-1])
            factors.append(factor)
            sums.append(total)
            if abs(diffs[-1]) < 0.5 * tol:
                err_sum += abs(diffs[-1])
                break

    partition = None
    if keep_partition:
        partition = _assemble(rule, accepted, cells)
    return HKResult(
        value=total,
        achieved_tol=err_sum,
        refinement_depth=stats["depth"],
        rounds=rounds,
        evaluations=stats["evaluations"],
        partition=partition,
    )


def _shrink_factor(diffs: list[float], factors: list[float], tol: float,
                   state: dict) -> float:
    """Halve the singular radius, or jump once the tail looks like a power law.

    A jump needs three consecutive halvings whose differences share a sign
    and decay at a consistent ratio.  The exponent fitted from that ratio is
    kept and predicts how far to shrink so the remaining tail drops below
    ``tol / 8``; it is dropped as soon as a new difference contradicts it.
    """
    alpha = state.get("alpha")
    if alpha is not None and len(diffs) >= 2:
        d_prev, d_last = diffs[-2:]
        f_prev, f_last = factors[-2:]
        predicted = (f_prev**alpha - 1) / (1 - f_last**-alpha)
        if d_prev * d_last <= 0 or abs(math.log(d_prev / d_last / predicted)) > 0.2:
            alpha = state["alpha"] = None
            return 2.0
    if alpha is None:
        if len(diffs) < 3 or any(c != 2.0 for c in factors[-3:]):
            return 2.0
        d1, d2, d3 = diffs[-3:]
        if not (d1 * d2 > 0 and d2 * d3 > 0):
            return 2.0
        q1, q2 = d1 / d2, d2 / d3
        if q1 <= 1 or q2 <= 1 or abs(math.log(q1) - math.log(q2)) > 0.1 * math.log(q2):
            return 2.0
        alpha = state["alpha"] = math.log2(q2)
    tail = abs(diffs[-1]) / (factors[-1] ** alpha - 1)
    target = tol / 8
    if tail <= target:
        return 2.0
    return float(min(max((tail / target) ** (1 / alpha), 2.0), 2.0**16))


def _assemble(rule: _Rule, accepted: _Panels, cells: list[_SingularCell]) -> TaggedPartition:
    parts = []
    for lo, hi in zip(accepted.lo, accepted.hi):
        parts.append(rule.partition(lo.ravel(), hi.ravel()))
    lower = [p.lower for p in parts]
    upper = [p.upper for p in parts]
    tags = [p.tags for p in parts]
    for cell in cells:
        lo, hi = cell.span(cell.radius)
        lower.append(np.array([lo]))
        upper.append(np.array([hi]))
        tags.append(np.array([cell.point]))
    return TaggedPartition(np.concatenate(lower), np.concatenate(upper), np.concatenate(tags))
