"""Gauss-map singularities, the creativity and uniqueness verdicts, and the
construction of the creator function b with a'(t) = b(t) theta'(t).

The underlying conditions are exact-zero conditions on smooth functions; a
numerical tool can only certify tolerance-banded versions of them on a
finite grid.  All verdicts produced here are therefore labeled with the
grid and tolerances used.  Zero tests are banded relative to the largest
magnitude each quantity attains on the grid, so the verdicts are invariant
under rescaling the input family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import ExpressionAst, evaluate, unparse
from .family import LineFamily

EPS_SING = 1e-9       # |theta'| band for "singular point of the Gauss map"
EPS_CRE = 1e-7        # |a^(j)| band for "derivative vanishes"
EPS_STAR = 1e-6       # normalized residual bound for a' = b theta'
QUOTIENT_COND = 1e-6  # |theta'| level at which the quotient a'/theta' is trusted
LHOPITAL_DEPTH = 4
ROOT_WIDTH = 1e-12
MIN_GRID_N = 16
FLAT_LABEL = "flat-to-order-4"

CREATIVE = "creative"
NOT_CREATIVE = "not_creative"
INCONCLUSIVE = "inconclusive"
UNIQUE = "unique"
NON_UNIQUE = "non_unique"


class UndefinedCreatorError(ValueError):
    """The creator has no value at (or too near) an unresolved singular point."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"creator undefined at t = {t!r}")


class InvalidCreatorError(ValueError):
    """A user-supplied creator violates a' = b theta' on the grid."""

    def __init__(self, t: float, residual: float):
        self.t = t
        self.residual = residual
        super().__init__(
            f"user creator violates a' = b*theta' at t = {t!r} "
            f"(normalized residual {residual!r} > {EPS_STAR})"
        )


@dataclass(frozen=True)
class SingularPoint:
    """A parameter where the Gauss map stalls, with its local resolution data.

    ``theta_derivative_order`` is the smallest j >= 1 with theta^(j) != 0
    (None when theta' is flat through order 4).  ``b_limit`` is the
    L'Hopital value a^(j)/theta^(j) when the point is resolvable.
    """

    t: float
    theta_derivative_order: int | None
    a_prime_at: float
    resolvable: bool
    b_limit: float | None


@dataclass(frozen=True)
class UniquenessVerdict:
    verdict: str
    flat_intervals: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class CreativityReport:
    verdict: str
    witnesses: tuple[SingularPoint, ...]
    creator: "CreatorFunction | None"
    notes: str


def parameter_grid(domain: tuple[float, float], n: int) -> np.ndarray:
    return np.linspace(domain[0], domain[1], n)


@dataclass(frozen=True)
class _GridScan:
    ts: np.ndarray
    theta_prime: np.ndarray
    a_prime: np.ndarray
    scale_theta: float
    scale_a: float
    cell: float        # nominal cell (domain length / grid_n), used in tolerances
    delta_flat: float  # minimum span of a run of singular cells to call it flat


def _scan(family: LineFamily, grid_n: int) -> _GridScan:
    ts = parameter_grid(family.domain, grid_n)
    tp = np.empty(grid_n)
    ap = np.empty(grid_n)
    for i, t in enumerate(ts):
        tp[i], ap[i] = _first_derivatives(family, float(t))
    scale_theta = float(np.max(np.abs(tp))) or 1.0
    scale_a = float(np.max(np.abs(ap))) or 1.0
    length = family.domain[1] - family.domain[0]
    cell = length / grid_n
    delta_flat = cell * max(3.0, grid_n / 100.0)
    return _GridScan(ts, tp, ap, scale_theta, scale_a, cell, delta_flat)


def _first_derivatives(family: LineFamily, t: float) -> tuple[float, float]:
    c, s, a = family.coeff_jets(t, 1)
    return c.coeffs[0] * s.coeffs[1] - s.coeffs[0] * c.coeffs[1], a.coeffs[1]


def grid_profile(family: LineFamily, grid_n: int) -> dict[str, float]:
    """Grid-derived quantities entering the tolerance bands (for reporting)."""
    scan = _scan(family, grid_n)
    return {
        "scale_theta": scan.scale_theta,
        "scale_a": scan.scale_a,
        "cell": scan.cell,
        "delta_flat": scan.delta_flat,
    }


def _singular_runs(scan: _GridScan) -> list[tuple[int, int]]:
    """Maximal index runs [start, end] where |theta'| sits inside the band."""
    mask = np.abs(scan.theta_prime) <= EPS_SING * scan.scale_theta
    runs: list[tuple[int, int]] = []
    start = None
    for i, flagged in enumerate(mask):
        if flagged and start is None:
            start = i
        elif not flagged and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _is_flat_run(scan: _GridScan, run: tuple[int, int]) -> bool:
    span = scan.ts[run[1]] - scan.ts[run[0]]
    return span >= scan.delta_flat * (1.0 - 1e-9)


# -- root refinement ---------------------------------------------------------

def _theta_prime(family: LineFamily, t: float) -> float:
    return _first_derivatives(family, t)[0]


def _bisect_root(family: LineFamily, lo: float, hi: float,
                 f_lo: float, f_hi: float) -> float:
    while hi - lo > ROOT_WIDTH:
        mid = 0.5 * (lo + hi)
        f_mid = _theta_prime(family, mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _minimize_abs(family: LineFamily, lo: float, hi: float) -> tuple[float, float]:
    """Ternary search for the minimum of |theta'| on [lo, hi]."""
    while hi - lo > ROOT_WIDTH * 0.1:
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if abs(_theta_prime(family, m1)) <= abs(_theta_prime(family, m2)):
            hi = m2
        else:
            lo = m1
    t = 0.5 * (lo + hi)
    return t, abs(_theta_prime(family, t))


# -- derivative scales and point classification -------------------------------

_SCALE_GRID_N = 129


def _derivative_scales(family: LineFamily) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Grid maxima of |theta^(j)| and |a^(j)| for j = 1..4 (coarse grid).

    Bands the zero tests in the L'Hopital classification the same way the
    first-order scales band the singularity test.
    """
    ts = parameter_grid(family.domain, _SCALE_GRID_N)
    th = [0.0] * LHOPITAL_DEPTH
    aa = [0.0] * LHOPITAL_DEPTH
    for t in ts:
        tpj = family.theta_prime_jet(float(t), LHOPITAL_DEPTH - 1)
        aj = family.a_jet(float(t), LHOPITAL_DEPTH)
        for j in range(LHOPITAL_DEPTH):
            th[j] = max(th[j], abs(tpj.coeffs[j]))
            aa[j] = max(aa[j], abs(aj.coeffs[j + 1]))
    return (tuple(v if v > 0.0 else 1.0 for v in th),
            tuple(v if v > 0.0 else 1.0 for v in aa))


def _classify_point(family: LineFamily, t0: float,
                    th_scales: tuple[float, ...], a_scales: tuple[float, ...]) -> SingularPoint:
    theta_derivs = family.theta_prime_jet(t0, LHOPITAL_DEPTH - 1).coeffs  # theta'..theta''''
    a_derivs = family.a_jet(t0, LHOPITAL_DEPTH).coeffs[1:]                # a'..a''''
    order = None
    for j in range(1, LHOPITAL_DEPTH + 1):
        if abs(theta_derivs[j - 1]) > EPS_SING * th_scales[j - 1]:
            order = j
            break
    a_prime_at = float(a_derivs[0])
    if order is None:
        return SingularPoint(float(t0), None, a_prime_at, False, None)
    lower_vanish = all(
        abs(a_derivs[i - 1]) <= EPS_CRE * a_scales[i - 1] for i in range(1, order)
    )
    if not lower_vanish:
        return SingularPoint(float(t0), order, a_prime_at, False, None)
    b_limit = float(a_derivs[order - 1] / theta_derivs[order - 1])
    return SingularPoint(float(t0), order, a_prime_at, True, b_limit)


def _a_flat_through_depth(family: LineFamily, t0: float, a_scales: tuple[float, ...]) -> bool:
    a_derivs = family.a_jet(t0, LHOPITAL_DEPTH).coeffs[1:]
    return all(abs(a_derivs[i]) <= EPS_CRE * a_scales[i] for i in range(LHOPITAL_DEPTH))


# -- singular point search -----------------------------------------------------

_TANGENTIAL_TRIGGER = 1e-3  # relative |theta'| level that prompts a local minimization


def find_gauss_singular_points(family: LineFamily, grid_n: int) -> tuple[SingularPoint, ...]:
    """Locate and classify the parameters where theta' vanishes.

    Sign changes of theta' are refined by bisection to width 1e-12;
    grid points inside the singularity band are flagged directly, and
    tangential roots (no sign change) are caught by minimizing |theta'|
    over the bracketing cells.  A run of banded points long enough to
    count as a flat interval is reported as one point at its midpoint.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    scan = _scan(family, grid_n)
    ts, tp = scan.ts, scan.theta_prime
    band = EPS_SING * scan.scale_theta
    mask = np.abs(tp) <= band
    candidates: list[float] = []

    for i in range(grid_n - 1):
        if tp[i] * tp[i + 1] < 0.0:
            candidates.append(_bisect_root(family, float(ts[i]), float(ts[i + 1]),
                                           float(tp[i]), float(tp[i + 1])))

    for start, end in _singular_runs(scan):
        if _is_flat_run(scan, (start, end)):
            candidates.append(float(0.5 * (ts[start] + ts[end])))
            continue
        best = start + int(np.argmin(np.abs(tp[start:end + 1])))
        lo = float(ts[max(best - 1, 0)])
        hi = float(ts[min(best + 1, grid_n - 1)])
        t_min, _ = _minimize_abs(family, lo, hi)
        candidates.append(t_min)

    trigger = _TANGENTIAL_TRIGGER * scan.scale_theta
    for i in range(1, grid_n - 1):
        w = abs(tp[i])
        if mask[i] or w > trigger:
            continue
        if not (w < abs(tp[i - 1]) and w < abs(tp[i + 1])):
            continue
        if tp[i - 1] * tp[i] < 0.0 or tp[i] * tp[i + 1] < 0.0:
            continue  # already handled as a sign change
        t_min, value = _minimize_abs(family, float(ts[i - 1]), float(ts[i + 1]))
        if value <= band:
            candidates.append(t_min)

    merge_radius = 0.5 * (family.domain[1] - family.domain[0]) / (grid_n - 1)
    accepted: list[float] = []
    for t0 in sorted(candidates):
        if accepted and t0 - accepted[-1] <= merge_radius:
            if abs(_theta_prime(family, t0)) < abs(_theta_prime(family, accepted[-1])):
                accepted[-1] = t0
            continue
        accepted.append(t0)

    th_scales, a_scales = _derivative_scales(family)
    return tuple(_classify_point(family, t0, th_scales, a_scales) for t0 in accepted)


# -- uniqueness ----------------------------------------------------------------

def assess_uniqueness(family: LineFamily, grid_n: int) -> UniquenessVerdict:
    """Uniqueness verdict: unique iff regular points are dense at grid resolution."""
    if grid_n < MIN_GRID_N:
        raise ValueError(f"grid_n must be >= {MIN_GRID_N}, got {grid_n}")
    scan = _scan(family, grid_n)
    mask = np.abs(scan.theta_prime) <= EPS_SING * scan.scale_theta
    unmet = bool(np.any(mask[:-1] & mask[1:]))
    flats = tuple(
        (float(scan.ts[start]), float(scan.ts[end]))
        for start, end in _singular_runs(scan)
        if _is_flat_run(scan, (start, end))
    )
    if not unmet:
        return UniquenessVerdict(UNIQUE, ())
    if flats:
        return UniquenessVerdict(NON_UNIQUE, flats)
    return UniquenessVerdict(INCONCLUSIVE, ())


# -- creator --------------------------------------------------------------------

class CreatorFunction:
    """Evaluation recipe for b(t): the plain quotient a'/theta' away from
    singular parameters, L'Hopital limits (linearly blended into the
    quotient) near resolved ones, constant fills on flat intervals, or a
    validated user expression overriding everything."""

    def __init__(self, family: LineFamily, grid_n: int, scale_theta: float,
                 resolved: tuple[tuple[float, float, float], ...],
                 unresolved_ts: tuple[float, ...],
                 flat_intervals: tuple[tuple[float, float, float], ...],
                 user_expr: ExpressionAst | None = None):
        self.family = family
        self.grid_n = grid_n
        self.scale_theta = scale_theta
        self.resolved = resolved            # (t0, b_limit, blend radius)
        self.unresolved_ts = unresolved_ts
        self.flat_intervals = flat_intervals  # (lo, hi, fill value)
        self.user_expr = user_expr

    @property
    def kind(self) -> str:
        return "user" if self.user_expr is not None else "canonical"

    def __call__(self, t: float) -> float:
        if self.user_expr is not None:
            return evaluate(self.user_expr, t)
        for lo, hi, fill in self.flat_intervals:
            if lo - 1e-12 <= t <= hi + 1e-12:
                return fill
        nearest = None
        for t0, b_limit, radius in self.resolved:
            d = abs(t - t0)
            if d <= radius and (nearest is None or d < nearest[0]):
                nearest = (d, b_limit, radius)
        tp, ap = _first_derivatives(self.family, t)
        band = EPS_SING * self.scale_theta
        if nearest is not None:
            d, b_limit, radius = nearest
            if abs(tp) <= band:
                return b_limit
            lam = d / radius
            return lam * (ap / tp) + (1.0 - lam) * b_limit
        if abs(tp) > band:
            return ap / tp
        # theta' is banded here but t missed every recorded zone.  Flat
        # bounds are grid-resolution, so extend the nearest fill across one
        # cell before declaring the creator undefined.
        if self.flat_intervals:
            lo, hi, fill = min(self.flat_intervals,
                               key=lambda iv: max(iv[0] - t, t - iv[1], 0.0))
            cell = (self.family.domain[1] - self.family.domain[0]) / (self.grid_n - 1)
            if max(lo - t, t - hi, 0.0) <= cell:
                return fill
        bad = t
        if self.unresolved_ts:
            bad = min(self.unresolved_ts, key=lambda t0: abs(t - t0))
        raise UndefinedCreatorError(float(bad))

    def __repr__(self) -> str:
        if self.user_expr is not None:
            return f"CreatorFunction(user {unparse(self.user_expr)!r})"
        return (f"CreatorFunction(canonical, {len(self.resolved)} resolved singular, "
                f"{len(self.flat_intervals)} flat)")


def _blend_radius(family: LineFamily, t0: float, others: list[float],
                  scale_theta: float, cell: float) -> float:
    """Blend radius around a resolved singular point, grown until the raw
    quotient at the edge is conditioned (|theta'| above the quotient band)."""
    lo, hi = family.domain
    cap = 0.25 * (hi - lo)
    for other in others:
        if other != t0:
            cap = min(cap, 0.5 * abs(other - t0))
    r = min(1e-3 * cell, cap)
    threshold = QUOTIENT_COND * scale_theta
    while r < cap:
        stable = True
        for probe in (t0 - r, t0 + r):
            if lo <= probe <= hi and abs(_theta_prime(family, probe)) <= threshold:
                stable = False
        if stable:
            break
        r = min(2.0 * r, cap)
    return r


def _flat_fills(scan: _GridScan, flat_runs: list[tuple[int, int]]) -> list[tuple[float, float, float]]:
    """Constant fill per flat run, extended from the nearest non-flat boundary."""
    fills: list[tuple[float, float, float]] = []
    for start, end in flat_runs:
        if start > 0:
            i = start - 1  # prefer the left boundary
        elif end < len(scan.ts) - 1:
            i = end + 1
        else:
            i = None  # the whole domain is flat: any creator works, use 0
        fill = 0.0 if i is None else float(scan.a_prime[i] / scan.theta_prime[i])
        fills.append((float(scan.ts[start]), float(scan.ts[end]), fill))
    return fills


def _assemble_canonical(family: LineFamily, grid_n: int, scan: _GridScan,
                        isolated: tuple[SingularPoint, ...],
                        flat_runs: list[tuple[int, int]]) -> CreatorFunction:
    flats = _flat_fills(scan, flat_runs)
    all_ts = [p.t for p in isolated]
    resolved = tuple(
        (p.t, p.b_limit, _blend_radius(family, p.t, all_ts, scan.scale_theta, scan.cell))
        for p in isolated if p.resolvable
    )
    unresolved = tuple(p.t for p in isolated if not p.resolvable)
    return CreatorFunction(family, grid_n, scan.scale_theta,
                           resolved, unresolved, tuple(flats))


def creator_at(family: LineFamily, t: float, singulars: list[SingularPoint] | tuple[SingularPoint, ...],
               grid_n: int = 1001) -> float:
    """Creator value at one parameter given the classified singular points."""
    family.require_in_domain(t)
    scan = _scan(family, grid_n)
    all_ts = [p.t for p in singulars]
    resolved = tuple(
        (p.t, p.b_limit, _blend_radius(family, p.t, all_ts, scan.scale_theta, scan.cell))
        for p in singulars if p.resolvable
    )
    unresolved = tuple(p.t for p in singulars if not p.resolvable)
    creator = CreatorFunction(family, grid_n, scan.scale_theta, resolved, unresolved, ())
    return creator(t)


def star_residual(family: LineFamily, creator: CreatorFunction,
                  ts: np.ndarray) -> tuple[float, float]:
    """Max normalized residual of a' = b theta' over ts, with its location."""
    worst, worst_t = 0.0, float(ts[0])
    for t in ts:
        tp, ap = _first_derivatives(family, float(t))
        res = abs(ap - creator(float(t)) * tp) / (1.0 + abs(ap))
        if res > worst:
            worst, worst_t = res, float(t)
    return worst, worst_t


# -- creativity -----------------------------------------------------------------

def assess_creativity(family: LineFamily, grid_n: int) -> CreativityReport:
    """Creativity verdict with witnesses and, when creative, the canonical creator."""
    if grid_n < MIN_GRID_N:
        raise ValueError(f"grid_n must be >= {MIN_GRID_N}, got {grid_n}")
    scan = _scan(family, grid_n)
    runs = _singular_runs(scan)
    flat_runs = [run for run in runs if _is_flat_run(scan, run)]
    flat_bounds = [(float(scan.ts[s]), float(scan.ts[e])) for s, e in flat_runs]

    notes: list[str] = []
    fatal = False
    undecided = False

    witnesses: list[SingularPoint] = []
    fills = _flat_fills(scan, flat_runs)
    for (start, end), (lo, hi, fill) in zip(flat_runs, fills):
        segment = np.abs(scan.a_prime[start:end + 1])
        worst = start + int(np.argmax(segment))
        a_ok = bool(segment[worst - start] <= EPS_CRE * scan.scale_a)
        witnesses.append(SingularPoint(
            t=float(0.5 * (lo + hi) if a_ok else scan.ts[worst]),
            theta_derivative_order=None,
            a_prime_at=float(scan.a_prime[worst]),
            resolvable=a_ok,
            b_limit=fill if a_ok else None,
        ))
        if not a_ok:
            fatal = True
            notes.append(
                f"theta' vanishes on [{lo!r}, {hi!r}] "
                f"but a' does not (|a'| = {segment[worst - start]!r} at t = {scan.ts[worst]!r})"
            )

    def in_flat(t: float) -> bool:
        return any(lo - 1e-12 <= t <= hi + 1e-12 for lo, hi in flat_bounds)

    _, a_scales = _derivative_scales(family)
    isolated = tuple(p for p in find_gauss_singular_points(family, grid_n)
                     if not in_flat(p.t))
    for point in isolated:
        witnesses.append(point)
        if point.resolvable:
            continue
        if point.theta_derivative_order is None and _a_flat_through_depth(family, point.t, a_scales):
            undecided = True
            notes.append(
                f"theta' and a' both vanish through order {LHOPITAL_DEPTH} at t = {point.t!r}; "
                "smoothness of b cannot be decided at this depth"
            )
        else:
            fatal = True
            notes.append(
                f"a' vanishes to lower order than theta' at t = {point.t!r} "
                "(the quotient a'/theta' diverges)"
            )

    creator = None
    if fatal:
        verdict = NOT_CREATIVE
    elif undecided:
        verdict = INCONCLUSIVE
    else:
        verdict = CREATIVE
        creator = _assemble_canonical(family, grid_n, scan, isolated, flat_runs)
        worst, worst_t = star_residual(family, creator, scan.ts)
        if worst > EPS_STAR:
            verdict = INCONCLUSIVE
            creator = None
            undecided = True
            notes.append(
                f"assembled creator misses the defining relation at t = {worst_t!r} "
                f"(normalized residual {worst!r} > {EPS_STAR})"
            )
        elif flat_runs:
            notes.append(
                f"creator under-determined on {len(flat_runs)} flat interval(s); "
                "canonical constant fill applied (any smooth b works there)"
            )

    lead = {
        CREATIVE: "an envelope exists (the family is creative)",
        NOT_CREATIVE: "no envelope exists (the family is not creative)",
        INCONCLUSIVE: "envelope existence undecided at this grid and tolerance",
    }[verdict]
    notes.append(
        f"certified at grid_n = {grid_n} on [{family.domain[0]}, {family.domain[1]}] "
        f"with eps_sing = {EPS_SING}, eps_cre = {EPS_CRE}, eps_star = {EPS_STAR}, "
        f"L'Hopital depth {LHOPITAL_DEPTH}"
    )
    witnesses.sort(key=lambda p: p.t)
    return CreativityReport(verdict, tuple(witnesses), creator, "; ".join([lead] + notes))


def build_creator(family: LineFamily, report: CreativityReport,
                  user_b: ExpressionAst | None = None) -> CreatorFunction:
    """The canonical creator from the report, or a validated user override."""
    if report.verdict != CREATIVE:
        raise ValueError(f"cannot build a creator for a {report.verdict} family")
    assert report.creator is not None
    if user_b is None:
        return report.creator
    creator = CreatorFunction(family, report.creator.grid_n, report.creator.scale_theta,
                              (), (), (), user_expr=user_b)
    ts = parameter_grid(family.domain, report.creator.grid_n)
    for t in ts:
        tp, ap = _first_derivatives(family, float(t))
        res = abs(ap - creator(float(t)) * tp) / (1.0 + abs(ap))
        if res > EPS_STAR:
            raise InvalidCreatorError(float(t), res)
    return creator
