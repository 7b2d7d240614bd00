"""Product spectra and the exact information-complexity engine.

The d-variate eigenvalues are all products of univariate eigenvalues,
one factor per coordinate.  The minimal number of linear functionals
needed to cut the initial error by a factor eps is the smallest n whose
top-n eigenvalue sum reaches (1 - eps^2) times the exact trace.

The engine enumerates product eigenvalues in non-increasing order with a
max-heap over multi-indices, generating each index exactly once: from
index z, coordinate i may be incremented only if every later coordinate
still sits at index 1.  Values are handled as sums of logarithms so the
ordering survives arbitrarily small products; partial sums are
accumulated in linear space with compensated summation.

A result is *certified* when the coordinate truncation mass plus a
rounding allowance provably cannot move the integer answer.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BudgetExceededError,
    DivergenceError,
    DomainError,
    GridSizeError,
    IrreducibleTailError,
)
from .numutil import CompensatedSum
from .spectra import Spectrum, TruncatedView

_DEFAULT_N_MAX = 10_000_000
_DEFAULT_HEAP_BYTES = 2 << 30
_BRUTE_GRID_CAP = 10_000_000


@dataclass(frozen=True)
class Budget:
    """Resource limits for one complexity computation."""

    n_max: int = _DEFAULT_N_MAX
    heap_bytes: int = _DEFAULT_HEAP_BYTES

    def heap_entries(self, d: int) -> int:
        # rough per-entry footprint: heap slot + float + d-tuple of small ints
        return max(1024, self.heap_bytes // (120 + 16 * d))


@dataclass(frozen=True)
class ComplexityResult:
    """Exact (or bracketed) information complexity at one (eps, d) point."""

    epsilon: float
    d: int
    n: int
    partial_sum: float
    trace: float
    certified: bool
    pops: int
    n_low: int
    n_high: int

    def to_record(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "d": self.d,
            "n": self.n,
            "certified": self.certified,
            "partial_sum": self.partial_sum,
            "trace": self.trace,
            "pops": self.pops,
        }


@dataclass(frozen=True)
class ProductProblem:
    """Ordered list of univariate spectra defining a tensor-product problem."""

    coordinates: Tuple[Spectrum, ...]

    def __post_init__(self):
        coords = tuple(self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if not coords:
            raise DomainError("a product problem needs at least one coordinate")

    @property
    def d(self) -> int:
        return len(self.coordinates)

    def log_trace_d(self) -> float:
        return math.fsum(math.log(c.trace()) for c in self.coordinates)

    def trace_d(self) -> float:
        """Product of coordinate traces (inf when outside double range)."""
        lt = self.log_trace_d()
        return math.exp(lt) if lt < 709.0 else math.inf

    def log_power_sum_d(self, tau: float) -> float:
        total = 0.0
        for k, c in enumerate(self.coordinates, start=1):
            try:
                total += math.log(c.power_sum(tau))
            except DivergenceError as exc:
                raise DivergenceError(
                    f"power sum diverges at tau={tau} in coordinate {k}",
                    tau_min=exc.tau_min,
                    coordinate=k,
                ) from exc
        return total

    def power_sum_d(self, tau: float) -> float:
        lp = self.log_power_sum_d(tau)
        return math.exp(lp) if lp < 709.0 else math.inf

    def power_sum_d_exact(self, tau: float) -> bool:
        return all(c.power_sum_exact(tau) for c in self.coordinates)

    def log_leading(self) -> float:
        return math.fsum(math.log(c.leading()) for c in self.coordinates)

    def normalized_log_trace(self) -> float:
        """ln of trace / leading-eigenvalue, the scale-free problem size."""
        return math.fsum(
            math.log(c.trace()) - math.log(c.leading()) for c in self.coordinates
        )

    def normalized_trace(self) -> float:
        """trace / leading-eigenvalue as a direct product.

        A direct product keeps exactly-representable traces exact (one
        rounding per factor), where exp(sum of logs) would not; callers
        must guard against overflow via normalized_log_trace first.
        """
        out = 1.0
        for c in self.coordinates:
            out *= c.trace() / c.leading()
        return out


def _coordinate_tables(
    views: Sequence[TruncatedView],
) -> Tuple[list, list]:
    """Per-coordinate normalized log eigenvalue accessors and lengths."""
    logb = []
    lengths = []
    for view in views:
        src = view.source
        base = src.log_eigenvalue(1)
        if view.length <= 4096:
            table = [src.log_eigenvalue(j) - base for j in range(1, view.length + 1)]
            logb.append(table.__getitem__)  # 0-based
        else:
            logb.append(lambda j0, s=src, b=base: s.log_eigenvalue(j0 + 1) - b)
        lengths.append(view.length)
    return logb, lengths


def _stream_normalized(
    views: Sequence[TruncatedView],
    log_floor: float,
    max_entries: int,
) -> Iterator[Tuple[tuple, float]]:
    """Yield (multi-index, log normalized value) in non-increasing order.

    Only indices whose value is >= exp(log_floor) are visited; children
    below the floor are pruned, which is safe because values are
    non-increasing along every successor edge.
    """
    logb, lengths = _coordinate_tables(views)
    d = len(views)
    start = (1,) * d
    heap = [(-0.0, start)]
    while heap:
        neg, z = heapq.heappop(heap)
        logv = -neg
        yield z, logv
        # last coordinate sitting above index 1 (0-based); successors may
        # only increment positions at or after it
        first = 0
        for i in range(d - 1, -1, -1):
            if z[i] > 1:
                first = i
                break
        for i in range(first, d):
            ji = z[i]
            if ji >= lengths[i]:
                continue
            child_log = logv - logb[i](ji - 1) + logb[i](ji)
            if child_log < log_floor:
                continue
            if len(heap) >= max_entries:
                raise BudgetExceededError(
                    "enumeration heap exceeded its memory budget",
                    n_lower=0,
                )
            heapq.heappush(heap, (-child_log, z[:i] + (ji + 1,) + z[i + 1 :]))


def top_eigenvalues(
    problem: ProductProblem,
    n_max: int,
    floor: float = 0.0,
    views: Optional[Sequence[TruncatedView]] = None,
    budget: Optional[Budget] = None,
) -> Iterator[Tuple[tuple, float]]:
    """Stream the largest product eigenvalues in non-increasing order.

    Stops after ``n_max`` items or once values drop below ``floor``.
    Each multi-index is produced exactly once.
    """
    if views is None:
        views = [c.truncate(1e-9) for c in problem.coordinates]
    budget = budget or Budget()
    log_scale = problem.log_leading()
    if floor > 0.0:
        log_floor = math.log(floor) - log_scale
    else:
        log_floor = -math.inf
    count = 0
    for z, logv in _stream_normalized(
        views, log_floor, budget.heap_entries(problem.d)
    ):
        if count >= n_max:
            return
        value = math.exp(logv + log_scale) if logv + log_scale > -745.0 else 0.0
        if floor > 0.0 and value < floor:
            return
        yield z, value
        count += 1


def _hash_set_stream(
    views: Sequence[TruncatedView],
    log_floor: float,
    max_entries: int,
) -> Iterator[Tuple[tuple, float]]:
    """Reference enumeration using a visited set instead of the successor
    rule; kept for cross-checking the deduplication logic in tests."""
    logb, lengths = _coordinate_tables(views)
    d = len(views)
    start = (1,) * d
    heap = [(-0.0, start)]
    seen = {start}
    while heap:
        neg, z = heapq.heappop(heap)
        logv = -neg
        yield z, logv
        for i in range(d):
            ji = z[i]
            if ji >= lengths[i]:
                continue
            child = z[:i] + (ji + 1,) + z[i + 1 :]
            if child in seen:
                continue
            child_log = logv - logb[i](ji - 1) + logb[i](ji)
            if child_log < log_floor:
                continue
            if len(heap) >= max_entries:
                raise BudgetExceededError("hash-set enumeration out of memory")
            seen.add(child)
            heapq.heappush(heap, (-child_log, child))


def _reduced_views(problem: ProductProblem, tol_per_coord: float) -> list:
    """Truncate every coordinate; drop coordinates that reduce to a single
    eigenvalue with no tail (they only rescale the problem).  Coordinates
    whose declared tail cannot meet the budget keep all their values and
    carry the irreducible tail into the certification mass."""
    views = []
    for c in problem.coordinates:
        try:
            view = c.truncate(tol_per_coord)
        except IrreducibleTailError:
            view = TruncatedView(c, len(c.values), c.tail)
        if view.length == 1 and view.tail_mass == 0.0:
            continue
        views.append(view)
    return views


def _truncation_mass(views: Sequence[TruncatedView], log_trace_norm: float) -> float:
    """Upper bound on the normalized product mass lost to truncation."""
    if not views:
        return 0.0
    log_kept = 0.0
    for view in views:
        src = view.source
        a = src.trace() / src.leading()
        tail = view.tail_mass / src.leading()
        kept = max(a - tail, 1e-300)
        log_kept += math.log(kept / a)
    t_norm = math.exp(log_trace_norm) * (1.0 - math.exp(min(log_kept, 0.0)))
    return max(t_norm, 0.0)


def info_complexity(
    problem: ProductProblem,
    epsilon: float,
    budget: Optional[Budget] = None,
    tol_rel: Optional[float] = None,
) -> ComplexityResult:
    """Exact n^avg(eps, d): minimal n with top-n sum >= (1 - eps^2) * trace.

    The decision is made against the exact closed-form trace; truncation
    and rounding are accounted for so that a certified result is a proof
    about the integer answer.  Uncertified results carry the bracketing
    interval [n_low, n_high] and report the conservative (larger) end.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    budget = budget or Budget()
    d = problem.d
    eps2 = epsilon * epsilon
    log_t_norm = problem.normalized_log_trace()
    log_scale = problem.log_leading()

    def _scaled(x: float) -> float:
        ls = log_scale
        if x <= 0.0 or not math.isfinite(ls):
            return 0.0
        lv = math.log(x) + ls
        return math.exp(lv) if lv < 709.0 else math.inf

    if log_t_norm > 690.0:
        # The curse lower bound alone exceeds any realistic budget.
        raise BudgetExceededError(
            "normalized trace overflows double range; "
            "n is astronomically large (curse of dimensionality)",
            n_lower=budget.n_max,
        )
    trace_norm = problem.normalized_trace()
    threshold = (1.0 - eps2) * trace_norm
    rounding = 1e-12 * trace_norm
    if threshold <= 0.0:
        return ComplexityResult(
            epsilon=epsilon, d=d, n=0, partial_sum=0.0, trace=_scaled(trace_norm),
            certified=True, pops=0, n_low=0, n_high=0,
        )

    tol = tol_rel if tol_rel is not None else min(1e-3 * (1.0 - eps2), 1e-6) / d
    total_pops = 0
    last = None
    prev_t_mass = math.inf
    for _attempt in range(24):
        views = _reduced_views(problem, tol)
        t_mass = _truncation_mass(views, log_t_norm)
        if t_mass >= 0.95 * prev_t_mass and last is not None:
            break  # irreducible declared tails; refinement cannot help
        prev_t_mass = t_mass
        outcome = _accumulate(views, threshold, t_mass, rounding,
                              budget, total_pops, d, eps2)
        total_pops = outcome["pops"]
        if outcome["crossed"]:
            n = outcome["n"]
            margin_prev = threshold - outcome["partial_prev"]
            certified = margin_prev > t_mass + rounding
            result = ComplexityResult(
                epsilon=epsilon, d=d, n=n,
                partial_sum=_scaled(outcome["partial"]),
                trace=_scaled(trace_norm),
                certified=certified, pops=total_pops,
                n_low=outcome["n_low"] if outcome["n_low"] else n,
                n_high=n,
            )
            if certified:
                return result
            last = result
        else:
            # Kept mass cannot reach the threshold: answer not bracketable
            # above, so everything rides on shrinking the truncation.
            last = ComplexityResult(
                epsilon=epsilon, d=d, n=outcome["n"],
                partial_sum=_scaled(outcome["partial"]),
                trace=_scaled(trace_norm),
                certified=False, pops=total_pops,
                n_low=outcome["n_low"] if outcome["n_low"] else outcome["n"],
                n_high=outcome["n"],
            )
        if t_mass > 0.0:
            margin = threshold - outcome.get("partial_prev", 0.0)
            shrink = 0.1 * max(margin, rounding) / t_mass if t_mass else 0.5
            tol *= min(0.5, max(shrink, 1e-6))
        else:
            break
    return last


_POP_CUTOVER = 60_000  # heap pops spent before switching to the dense engine


def _accumulate(views, threshold, t_mass, rounding, budget, pops_used, d, eps2):
    """Run the ordered enumeration until the partial sum crosses the
    threshold, restarting with a lower value floor when the floor was hit
    before the crossing.  Small answers come out of the lazy best-first
    heap; once the pop count shows the answer is large, the work moves to
    the vectorized fold engine (same certification semantics)."""
    if not views:
        # every coordinate degenerated to a single atom: one eigenvalue
        # carries the whole (normalized) trace
        return {
            "crossed": True, "n": 1, "partial": 1.0, "partial_prev": 0.0,
            "n_low": 1, "pops": pops_used,
        }
    max_entries = budget.heap_entries(d)
    # Initial value floor, lowered geometrically whenever the enumeration
    # runs dry before the partial sum reaches the threshold.  Starting near
    # eps^2 and stepping in small factors keeps the final floor close to the
    # n-th eigenvalue, which bounds the fan-out of pushed-but-unpopped
    # children (the heap size) by a modest multiple of n.
    log_floor = max(min(-8.0, math.log(eps2) - 2.0), -64.0)
    pops = pops_used
    cutover = pops_used + min(_POP_CUTOVER, budget.n_max)
    while True:
        acc = CompensatedSum()
        prev = 0.0
        n = 0
        n_low = 0
        crossed = False
        too_big = False
        try:
            for _z, logv in _stream_normalized(views, log_floor, max_entries):
                pops += 1
                if pops > cutover:
                    too_big = True
                    break
                prev = acc.value
                acc.add(math.exp(logv) if logv > -745.0 else 0.0)
                n += 1
                if not n_low and acc.value + t_mass + rounding >= threshold:
                    n_low = n
                if acc.value >= threshold:
                    crossed = True
                    break
        except BudgetExceededError:
            too_big = True
        if crossed:
            return {
                "crossed": True, "n": n, "partial": acc.value,
                "partial_prev": prev, "n_low": n_low, "pops": pops,
            }
        if too_big:
            return _accumulate_dense(views, threshold, t_mass, rounding,
                                     budget, pops, log_floor)
        if log_floor < -744.0:
            return {
                "crossed": False, "n": n, "partial": acc.value,
                "partial_prev": prev, "n_low": n_low, "pops": pops,
            }
        log_floor = max(log_floor - 4.0, -745.0)


def _dense_fold(views, floor, max_entries):
    """Materialize every normalized product eigenvalue >= floor.

    Coordinate arrays are combined pairwise; any value < floor in an
    intermediate product is dropped, which is safe because the remaining
    factors are all <= 1.  Raises the budget error when an intermediate
    exceeds max_entries.
    """
    prod = None
    for view in views:
        v = view.source.dense_values(floor, view.length)
        if len(v) > max_entries:
            raise BudgetExceededError(
                "dense enumeration exceeded its memory budget"
            )
        if prod is None:
            prod = v
            continue
        if len(v) == 1:
            continue  # only the (normalized) leading 1 survives the floor
        counts = np.searchsorted(-v, -(floor / prod), side="right")
        total = int(counts.sum())
        if total > max_entries:
            raise BudgetExceededError(
                "dense enumeration exceeded its memory budget"
            )
        cum = np.cumsum(counts)
        idx = np.arange(total, dtype=np.int64) - np.repeat(cum - counts, counts)
        prod = np.repeat(prod, counts) * v[idx]
    return prod


def _accumulate_dense(views, threshold, t_mass, rounding, budget, pops, log_floor):
    """Fold/sort/scan engine for answers too large for the lazy heap.

    Partial sums near the decision boundary are recomputed with exact
    summation (math.fsum) so certification is as strong as in the heap
    path; the bulk prefix uses numpy's pairwise cumsum only to locate the
    neighborhood of the crossing.
    """
    # the fold's transient arrays cost ~4x the entry count, so budget for that
    max_entries = max(budget.heap_bytes // 32, 1 << 20)
    floor = math.exp(max(log_floor, -700.0))
    while True:
        prod = _dense_fold(views, floor, max_entries)
        reached = float(np.sum(prod)) >= threshold * (1.0 + 1e-9)
        if reached or floor <= 1e-300:
            break
        if len(prod) > budget.n_max:
            # everything >= floor is materialized, so these are exactly the
            # top len(prod) values: the crossing provably lies beyond n_max
            raise BudgetExceededError(
                "answer exceeds the enumeration budget",
                n_lower=len(prod), pops=pops + len(prod),
            )
        # small steps: the materialized count grows like a power of 1/floor,
        # so overshooting the crossing floor is what costs memory
        floor = max(floor * math.exp(-2.0), 1e-300)
    prod[::-1].sort()  # descending
    pops += len(prod)
    outcome = _scan_sorted(prod, threshold, t_mass, rounding, budget.n_max)
    if outcome["crossed"] is None:
        raise BudgetExceededError(
            "answer exceeds the enumeration budget",
            n_lower=outcome["n"], pops=pops,
        )
    outcome["pops"] = pops
    return outcome


def _scan_sorted(values, threshold, t_mass, rounding, n_cap):
    """Find the crossing point of a descending value array exactly.

    numpy's cumsum only locates the neighborhood; the decision itself is
    made with exact summation so that results certified against the
    rounding bound really are proofs.  crossed=None signals that the
    crossing lies beyond n_cap.
    """
    cs = np.cumsum(values)
    # start far enough before the cumsum estimate that its sequential
    # rounding drift cannot hide the true crossing point
    drift = 4.0 * len(values) * 2.3e-16 * max(threshold, 1.0)
    start = int(np.searchsorted(cs, threshold - drift))
    start = min(start, max(int(np.searchsorted(cs, threshold)) - 8, 0))
    acc = CompensatedSum()
    acc.add(math.fsum(values[:start]))
    prev = acc.value
    n = start
    n_low = 0
    if start:
        lo_guess = int(np.searchsorted(cs, threshold - t_mass - rounding))
        if lo_guess < start - 8:
            n_low = lo_guess + 1  # cumsum is ample here; margins are huge
    for v in values[start:]:
        if n >= n_cap:
            return {"crossed": None, "n": n, "partial": acc.value,
                    "partial_prev": prev, "n_low": n_low}
        prev = acc.value
        acc.add(float(v))
        n += 1
        if not n_low and acc.value + t_mass + rounding >= threshold:
            n_low = n
        if acc.value >= threshold:
            return {"crossed": True, "n": n, "partial": acc.value,
                    "partial_prev": prev, "n_low": n_low}
    return {"crossed": False, "n": n, "partial": acc.value,
            "partial_prev": prev, "n_low": n_low}


def brute_force_complexity(
    problem: ProductProblem,
    epsilon: float,
    per_coord_cap: int = 1_000_000,
    grid_cap: int = _BRUTE_GRID_CAP,
) -> ComplexityResult:
    """Oracle engine: materialize every truncated product, sort, scan.

    Shares the decision and certification semantics of info_complexity
    but is limited to small d by the grid cap.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    if per_coord_cap < 1:
        raise DomainError("per_coord_cap must be positive")
    d = problem.d
    eps2 = epsilon * epsilon

    log_t_norm = problem.normalized_log_trace()
    trace_norm = problem.normalized_trace()
    threshold = (1.0 - eps2) * trace_norm
    rounding = 1e-12 * trace_norm
    log_scale = problem.log_leading()
    scale = math.exp(log_scale) if log_scale < 709.0 else math.inf

    if threshold <= 0.0:
        return ComplexityResult(
            epsilon=epsilon, d=d, n=0, partial_sum=0.0,
            trace=trace_norm * scale, certified=True, pops=0, n_low=0, n_high=0,
        )

    if 2 ** min(d, 60) > grid_cap:
        raise GridSizeError(
            f"product grid would exceed {grid_cap} entries at d={d}"
        )

    def lengths_at(tol):
        out = []
        for c in problem.coordinates:
            try:
                length = c.truncate(tol).length
            except IrreducibleTailError:
                length = len(c.values)
            out.append(min(length, per_coord_cap))
        return out

    def grid_size(lengths):
        size = 1
        for m in lengths:
            size *= m
        return size

    tol = 0.01 / d  # coarse first pass; the margin drives refinement below
    while grid_size(lengths_at(tol)) > grid_cap:
        tol *= 4.0
        if tol > 0.5:
            raise GridSizeError(
                f"no truncation below tol=0.5 fits {grid_cap} grid entries"
            )
    pops = 0
    result = None
    prev_lengths = None
    for _attempt in range(24):
        lengths = lengths_at(tol)
        if grid_size(lengths) > grid_cap or lengths == prev_lengths:
            break  # certification needs a grid the cap cannot hold
        prev_lengths = lengths
        grids = [
            c.dense_values(1e-300, m)
            for c, m in zip(problem.coordinates, lengths)
        ]
        prod = grids[0]
        for arr in grids[1:]:
            prod = np.multiply.outer(prod, arr).ravel()
        order = np.sort(prod)[::-1]
        pops += len(order)

        log_kept = math.fsum(
            math.log(max(float(np.sum(g)) / (c.trace() / c.leading()), 1e-300))
            for g, c in zip(grids, problem.coordinates)
        )
        t_mass = max(trace_norm * (1.0 - math.exp(min(log_kept, 0.0))), 0.0)

        outcome = _scan_sorted(order, threshold, t_mass, rounding, len(order))
        if outcome["crossed"]:
            n = outcome["n"]
            margin = threshold - outcome["partial_prev"]
            certified = margin > t_mass + rounding
            result = ComplexityResult(
                epsilon=epsilon, d=d, n=n,
                partial_sum=outcome["partial"] * scale,
                trace=trace_norm * scale, certified=certified, pops=pops,
                n_low=outcome["n_low"] if outcome["n_low"] else n, n_high=n,
            )
            if certified:
                return result
            # jump straight to a tolerance that makes the total truncation
            # mass comfortably smaller than the observed margin
            need = max(margin, rounding) / (8.0 * trace_norm * d)
        else:
            result = ComplexityResult(
                epsilon=epsilon, d=d, n=len(order),
                partial_sum=outcome["partial"] * scale,
                trace=trace_norm * scale, certified=False, pops=pops,
                n_low=outcome["n_low"] if outcome["n_low"] else len(order),
                n_high=len(order),
            )
            need = tol * 0.0625  # kept mass below threshold: just add length
        if t_mass <= 0.0:
            break
        tol = max(min(need, tol * 0.25), 1e-16)
    return result
