"""Tagged intervals, tagged partitions, gauges, and fineness machinery.

A gauge is a strictly positive function delta(x) on an interval.  A tagged
partition {(x_i, [u_{i-1}, u_i])} is delta-fine when every cell satisfies
x_i - u_{i-1} < delta(x_i) and u_i - x_i < delta(x_i).  Fine partitions
always exist on a compact interval (Cousin's lemma); `cousin_partition`
constructs one by deterministic bisection and `random_delta_fine_partition`
by seeded randomized bisection.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DepthExceeded, InvalidGauge

__all__ = [
    "Interval",
    "TaggedInterval",
    "TaggedPartition",
    "Gauge",
    "is_delta_fine",
    "cousin_partition",
    "random_delta_fine_partition",
]

#: Default bisection depth limit.  2**-64 is below the spacing of doubles on
#: [0, 1], so hitting it means the gauge demands unrepresentable cells.
DEFAULT_MAX_DEPTH = 64

#: Slack allowed between the accumulated cell lengths and the domain length.
_LENGTH_SUM_ULPS = 8

_PERMUTATIONS = np.array(list(itertools.permutations(range(3))), dtype=np.intp)


@dataclass(frozen=True)
class Interval:
    """A nondegenerate compact interval [a, b]."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    def __contains__(self, x: float) -> bool:
        return self.a <= x <= self.b


@dataclass(frozen=True)
class TaggedInterval:
    """A cell [u, v] with an evaluation point (tag) inside it.

    Tags may sit on either endpoint: shared endpoints between adjacent
    cells carry zero length, so sums are unaffected.
    """

    tag: float
    cell: Interval

    def __post_init__(self) -> None:
        if not math.isfinite(self.tag):
            raise ValueError(f"tag must be finite, got {self.tag}")
        if not self.cell.a <= self.tag <= self.cell.b:
            raise ValueError(
                f"tag {self.tag} outside cell [{self.cell.a}, {self.cell.b}]"
            )

    @property
    def length(self) -> float:
        return self.cell.length


@dataclass(frozen=True)
class Gauge:
    """A strictly positive fineness rule delta(x).

    `delta` may be any callable on floats; array-capable callables are
    exploited for speed but not required.
    """

    delta: Callable

    def __call__(self, x: float) -> float:
        d = float(self.delta(x))
        if not (math.isfinite(d) and d > 0.0):
            raise InvalidGauge(f"gauge returned {d} at x={x}")
        return d

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate the gauge on an array of points, validating positivity."""
        try:
            out = np.asarray(self.delta(xs), dtype=float)
            if out.shape != xs.shape:
                out = np.broadcast_to(out, xs.shape)
        except (TypeError, ValueError):
            out = np.array([float(self.delta(float(x))) for x in xs])
        if not np.all(np.isfinite(out) & (out > 0.0)):
            bad = xs[~(np.isfinite(out) & (out > 0.0))]
            raise InvalidGauge(f"gauge non-positive or non-finite at x={bad[0]}")
        return out


class TaggedPartition:
    """An ordered, exactly-abutting tagged partition of a compact interval.

    Cells are held as flat arrays (tags, lefts, rights) so million-cell
    partitions stay cheap; `cells` materializes TaggedInterval views on
    demand.  Instances are immutable after construction.
    """

    __slots__ = ("domain", "tags", "lefts", "rights")

    def __init__(self, domain: Interval, tags, lefts, rights) -> None:
        tags = np.ascontiguousarray(tags, dtype=float)
        lefts = np.ascontiguousarray(lefts, dtype=float)
        rights = np.ascontiguousarray(rights, dtype=float)
        if not (tags.ndim == 1 and tags.shape == lefts.shape == rights.shape):
            raise ValueError("tags, lefts, rights must be equal-length 1-d arrays")
        if tags.size == 0:
            raise ValueError("partition must contain at least one cell")
        if not np.all(np.isfinite(tags)):
            raise ValueError("tags must be finite")
        if not np.all(lefts < rights):
            raise ValueError("every cell must have positive length")
        if not np.all((lefts <= tags) & (tags <= rights)):
            raise ValueError("every tag must lie inside its cell")
        if lefts[0] != domain.a or rights[-1] != domain.b:
            raise ValueError("partition must span the domain exactly")
        if not np.all(rights[:-1] == lefts[1:]):
            raise ValueError("consecutive cells must abut exactly")
        total = math.fsum(rights - lefts)
        slack = _LENGTH_SUM_ULPS * math.ulp(max(abs(total), abs(domain.length)))
        if abs(total - domain.length) > slack:
            raise ValueError(
                f"cell lengths sum to {total}, domain length is {domain.length}"
            )
        for arr in (tags, lefts, rights):
            arr.setflags(write=False)
        self.domain = domain
        self.tags = tags
        self.lefts = lefts
        self.rights = rights

    @classmethod
    def from_cells(
        cls, cells: Sequence[TaggedInterval], domain: Interval | None = None
    ) -> "TaggedPartition":
        cells = list(cells)
        if not cells:
            raise ValueError("partition must contain at least one cell")
        if domain is None:
            domain = Interval(cells[0].cell.a, cells[-1].cell.b)
        return cls(
            domain,
            [c.tag for c in cells],
            [c.cell.a for c in cells],
            [c.cell.b for c in cells],
        )

    @property
    def lengths(self) -> np.ndarray:
        return self.rights - self.lefts

    @property
    def cells(self) -> list[TaggedInterval]:
        return list(self)

    def __len__(self) -> int:
        return self.tags.size

    def __iter__(self) -> Iterator[TaggedInterval]:
        for t, u, v in zip(self.tags, self.lefts, self.rights):
            yield TaggedInterval(float(t), Interval(float(u), float(v)))

    def __repr__(self) -> str:
        return (
            f"TaggedPartition({len(self)} cells on "
            f"[{self.domain.a}, {self.domain.b}])"
        )


def is_delta_fine(p: TaggedPartition, g: Gauge) -> bool:
    """True iff tag - left < delta(tag) and right - tag < delta(tag), all cells."""
    d = g.eval_many(p.tags)
    return bool(np.all(p.tags - p.lefts < d) and np.all(p.rights - p.tags < d))


def _build_fine(
    domain: Interval,
    g: Gauge,
    max_depth: int,
    rng: np.random.Generator | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shared bisection engine behind both partition constructors.

    Keeps a frontier of pending cells per depth level.  A cell [u, v] is
    accepted as soon as one of its candidate tags {u, mid, v} covers it
    (both one-sided gaps below delta(candidate)); otherwise it is bisected.
    With rng=None the bisection point is the exact midpoint and candidates
    are tried in the fixed order (left, mid, right); with an rng the split
    point is uniform in the middle half and the candidate order is a
    per-cell random permutation.
    """
    U = np.array([domain.a])
    V = np.array([domain.b])
    acc_t: list[np.ndarray] = []
    acc_u: list[np.ndarray] = []
    acc_v: list[np.ndarray] = []

    for depth in range(max_depth + 1):
        if U.size == 0:
            break
        span = V - U
        if rng is None:
            M = 0.5 * (U + V)
            order = np.broadcast_to(_PERMUTATIONS[0], (U.size, 3))
        else:
            M = U + span * rng.uniform(0.25, 0.75, U.size)
            order = _PERMUTATIONS[rng.integers(0, 6, U.size)]
        candidates = np.stack([U, M, V], axis=1)
        rows = np.arange(U.size)

        tag = np.empty(U.size)
        taken = np.zeros(U.size, dtype=bool)
        for slot in range(3):
            c = candidates[rows, order[:, slot]]
            d = g.eval_many(c)
            ok = ~taken & (c - U < d) & (V - c < d)
            tag[ok] = c[ok]
            taken |= ok

        if taken.any():
            acc_t.append(tag[taken])
            acc_u.append(U[taken])
            acc_v.append(V[taken])
        pending = ~taken
        if not pending.any():
            U = V = np.empty(0)
            break
        if depth == max_depth:
            raise DepthExceeded(
                f"{int(pending.sum())} cells still unacceptable at depth "
                f"{max_depth}; gauge is finer than float spacing allows"
            )
        Up, Vp, Mp = U[pending], V[pending], M[pending]
        splittable = (Mp > Up) & (Mp < Vp)
        if not splittable.all():
            raise DepthExceeded(
                "bisection reached adjacent floats without acceptance; "
                "gauge is unrepresentable there"
            )
        U = np.concatenate([Up, Mp])
        V = np.concatenate([Mp, Vp])

    tags = np.concatenate(acc_t)
    lefts = np.concatenate(acc_u)
    rights = np.concatenate(acc_v)
    idx = np.argsort(lefts, kind="stable")
    return tags[idx], lefts[idx], rights[idx]


def cousin_partition(
    domain: Interval, g: Gauge, max_depth: int = DEFAULT_MAX_DEPTH
) -> TaggedPartition:
    """Deterministic delta-fine partition by recursive bisection.

    Accepts a subinterval as soon as one of the candidate tags
    {left, midpoint, right} (tried in that order) satisfies the two
    one-sided fineness inequalities; otherwise bisects at the midpoint.
    Identical inputs yield identical output.

    Raises DepthExceeded when `max_depth` is reached with cells still
    unacceptable.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    tags, lefts, rights = _build_fine(domain, g, max_depth, None)
    return TaggedPartition(domain, tags, lefts, rights)


def random_delta_fine_partition(
    domain: Interval, g: Gauge, seed: int, max_depth: int = DEFAULT_MAX_DEPTH
) -> TaggedPartition:
    """Seeded randomized delta-fine partition.

    Randomness enters through bisection points (uniform in the middle half
    of each cell) and through the per-cell candidate-tag order.  The result
    is deterministic for a fixed seed.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    rng = np.random.default_rng(seed)
    tags, lefts, rights = _build_fine(domain, g, max_depth, rng)
    return TaggedPartition(domain, tags, lefts, rights)
