"""Empirical checkers for the three Riemann-sum convergence criteria.

Criterion 1 probes variable-index sums  sum f_{j(x_i)}(x_i) |I_i|  with
per-tag index thresholds; criterion 2 probes fixed-index sums against a
2*eps band; criterion 3 compares the two limits.  The underlying theorems
quantify over all fine partitions and all admissible index choices; these
checkers sample both and report violations, so they are falsifiers and
evidence gatherers, not provers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import IndexBelowQ, LengthMismatch, NonFiniteValue
from .integrator import RealFunction, _dot, _random_partition, riemann_sum
from .partition import (
    DEFAULT_MAX_DEPTH,
    Gauge,
    Interval,
    TaggedPartition,
    cousin_partition,
)

__all__ = [
    "IntegrandFamily",
    "IndexSelector",
    "CriterionReport",
    "variable_index_sum",
    "check_criterion1",
    "check_criterion2",
    "check_criterion3",
]


@dataclass(frozen=True)
class IntegrandFamily:
    """An indexed sequence of integrands f_j with pointwise limit.

    member(j) returns the j-th integrand.  member_at, when provided, is a
    vectorized shortcut (index_array, x_array) -> values used to keep
    variable-index sums cheap; it must agree with member pointwise.
    """

    member: Callable[[int], RealFunction]
    limit: RealFunction
    domain: Interval
    member_at: Optional[Callable] = None


@dataclass(frozen=True)
class IndexSelector:
    """Per-point index threshold: beyond threshold(x) a property kicks in."""

    threshold: Callable


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of a sampling run against one criterion's inequality."""

    alpha: float
    epsilon: float
    trials: int
    violations: int
    worst_deviation: float
    passed: bool


def _indices_array(indices, n: int) -> np.ndarray:
    arr = np.asarray(indices)
    if arr.ndim != 1 or arr.size != n:
        raise LengthMismatch(f"expected {n} indices, got shape {arr.shape}")
    if not np.all(arr >= 1):
        raise ValueError("indices must be positive integers")
    return arr


def variable_index_sum(
    fam: IntegrandFamily,
    indices: Sequence[int],
    p: TaggedPartition,
    compensated: bool = False,
) -> float:
    """sum of f_{indices[i]}(tag_i) * |I_i| in cell order.

    With all indices equal to j this reduces bitwise to
    riemann_sum(member(j), p).
    """
    idx = _indices_array(indices, len(p))
    if fam.member_at is not None:
        values = np.asarray(fam.member_at(idx, p.tags), dtype=float)
    else:
        values = np.empty(len(p))
        for j in np.unique(idx):
            sel = idx == j
            fj = fam.member(int(j))
            sub = p.tags[sel]
            try:
                vals = np.asarray(fj(sub), dtype=float)
                if vals.shape != sub.shape:
                    vals = np.broadcast_to(vals, sub.shape)
            except (TypeError, ValueError):
                vals = np.array([float(fj(float(x))) for x in sub])
            values[sel] = vals
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue("family member non-finite at a tag")
    return _dot(values, p.lengths, compensated)


def _thresholds(sel: IndexSelector, tags: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(sel.threshold(tags))
        if out.shape != tags.shape:
            out = np.broadcast_to(out, tags.shape)
    except (TypeError, ValueError):
        out = np.array([sel.threshold(float(x)) for x in tags])
    out = out.astype(np.int64)
    if not np.all(out >= 1):
        raise ValueError("selector thresholds must be positive")
    return out


def check_criterion1(
    fam: IntegrandFamily,
    gf,
    sel: IndexSelector,
    alpha1: float,
    eps: float,
    trials: int,
    index_headroom: int,
    seed: int,
    index_draws: int = 1,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> CriterionReport:
    """Sample the variable-index inequality |alpha1 - sum| < eps.

    Draws `trials` random fine partitions for gf.at(eps); for each,
    `index_draws` admissible index vectors with indices uniform in
    (threshold(tag), threshold(tag) + index_headroom].  A clean report is
    evidence for the criterion whose conclusion is that the limit function
    integrates to alpha1.
    """
    if eps <= 0.0 or trials < 1 or index_headroom < 1 or index_draws < 1:
        raise ValueError("eps > 0, trials >= 1, index_headroom >= 1 required")
    gauge = gf.at(eps)
    violations = 0
    worst = 0.0
    total = 0
    for i in range(trials):
        p = _random_partition(fam.domain, gauge, [seed, 1, i], max_depth)
        thr = _thresholds(sel, p.tags)
        rng = np.random.default_rng([seed, 2, i])
        for _ in range(index_draws):
            idx = thr + rng.integers(1, index_headroom + 1, size=len(p))
            s = variable_index_sum(fam, idx, p)
            dev = abs(alpha1 - s)
            worst = max(worst, dev)
            violations += dev >= eps
            total += 1
    return CriterionReport(
        alpha=alpha1,
        epsilon=eps,
        trials=total,
        violations=violations,
        worst_deviation=worst,
        passed=violations == 0,
    )


def check_criterion2(
    fam: IntegrandFamily,
    gauge_for: Callable[[int], Gauge],
    alpha2: float,
    eps: float,
    q: int,
    j_list: Sequence[int],
    trials: int,
    seed: int,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> CriterionReport:
    """Sample the fixed-index inequality |alpha2 - sum| < 2*eps.

    Each j in j_list must exceed q (IndexBelowQ otherwise) and gets its own
    gauge via gauge_for(j), following the per-index gauge construction; the
    acceptance band is 2*eps, the bound the triangle inequality yields.
    """
    if eps <= 0.0 or trials < 1:
        raise ValueError("eps > 0 and trials >= 1 required")
    for j in j_list:
        if j <= q:
            raise IndexBelowQ(f"index {j} not above q = {q}")
    violations = 0
    worst = 0.0
    total = 0
    for jn, j in enumerate(j_list):
        gauge = gauge_for(int(j))
        fj = fam.member(int(j))
        parts = [cousin_partition(fam.domain, gauge, max_depth)]
        parts += [
            _random_partition(fam.domain, gauge, [seed, 3, jn, t], max_depth)
            for t in range(trials)
        ]
        for p in parts:
            s = riemann_sum(fj, p)
            dev = abs(alpha2 - s)
            worst = max(worst, dev)
            violations += dev >= 2.0 * eps
            total += 1
    return CriterionReport(
        alpha=alpha2,
        epsilon=eps,
        trials=total,
        violations=violations,
        worst_deviation=worst,
        passed=violations == 0,
    )


def check_criterion3(alpha1: float, alpha2: float, tol: float) -> bool:
    """True iff the two limits agree within tol: then limit and integral
    interchange, i.e. the integral of the limit equals the limit of the
    integrals."""
    if tol < 0.0:
        raise ValueError("tol must be >= 0")
    return abs(alpha1 - alpha2) <= tol
