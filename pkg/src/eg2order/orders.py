"""Grid-based comparison of system lifetimes in the usual stochastic,
failure rate, reversed failure rate and likelihood ratio orders.

Each comparator returns a :class:`DominanceVerdict` for the ordered pair
``(A, B)``.  ``FIRST`` means ``A`` is the larger lifetime in the requested
order:

==========  ==========================================
order       ``A`` dominates ``B`` when
==========  ==========================================
st          survival_A >= survival_B
fr          hazard_A <= hazard_B
rf          reversed_hazard_A >= reversed_hazard_B
lr          density_A / density_B is nondecreasing
==========  ==========================================
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from eg2order._backend import kernels
from eg2order.core import DomainError
from eg2order.majorization import ParamMatrix
from eg2order.systems import (
    ComponentSet,
    SystemKind,
    evaluate,
    homogeneous_rhazard,
    homogeneous_series_log_ratio,
)

DEFAULT_TOL = 1e-10
# points where both survivals are below this are numerically dead and skipped
DEAD_TAIL = 1e-14
CROSSING_WIDTH = 1e-8
# an lr ratio whose slope changes sign more often than this is reported Inconclusive
_MAX_CLEAN_TURNS = 4


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class GridSpec:
    x_min: float = 1e-2
    x_max: float = 1e2
    count: int = 4096
    spacing: Spacing = Spacing.LOG

    def __post_init__(self):
        object.__setattr__(self, "spacing", Spacing(getattr(self.spacing, "value", self.spacing)))
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or not 0 < self.x_min < self.x_max:
            raise ValueError(f"grid needs 0 < x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    def points(self):
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.x_min, self.x_max, self.count)
        return np.linspace(self.x_min, self.x_max, self.count)

    def refined(self, factor=2):
        return GridSpec(self.x_min, self.x_max, self.count * factor, self.spacing)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max,
                "count": self.count, "spacing": self.spacing.value}


DEFAULT_GRID = GridSpec()


class Relation(enum.Enum):
    FIRST = "FirstDominates"
    SECOND = "SecondDominates"
    EQUAL = "Equal"
    CROSSING = "Crossing"
    INCONCLUSIVE = "Inconclusive"

    @property
    def conclusive(self):
        return self in (Relation.FIRST, Relation.SECOND, Relation.EQUAL)

    def swapped(self):
        return {Relation.FIRST: Relation.SECOND, Relation.SECOND: Relation.FIRST}.get(self, self)


@dataclass(frozen=True)
class DominanceVerdict:
    relation: Relation
    crossings: tuple
    max_violation: float
    grid_used: GridSpec
    order: str = "st"

    def __post_init__(self):
        assert (self.relation is Relation.CROSSING) == bool(self.crossings)


def _refine(diff_at, lo, hi, sign_lo, rel_width):
    while hi - lo > rel_width * lo:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if diff_at(mid) * sign_lo > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _sign_changes(xs, d, allow):
    sig = np.flatnonzero(np.abs(d) > allow)
    if sig.size < 2:
        return []
    s = np.sign(d[sig])
    flips = np.flatnonzero(s[1:] != s[:-1])
    return [(sig[k], sig[k + 1], s[k]) for k in flips]


def _pointwise_verdict(xs, d, allow, diff_at, grid, order, rel_width=CROSSING_WIDTH):
    pos = d > allow
    neg = d < -allow
    if not pos.any() and not neg.any():
        return DominanceVerdict(Relation.EQUAL, (), float(np.max(np.abs(d), initial=0.0)), grid, order)
    if not neg.any():
        return DominanceVerdict(Relation.FIRST, (), float(max(0.0, -np.min(d))), grid, order)
    if not pos.any():
        return DominanceVerdict(Relation.SECOND, (), float(max(0.0, np.max(d))), grid, order)
    crossings = tuple(_refine(diff_at, xs[a], xs[b], sgn, rel_width)
                      for a, b, sgn in _sign_changes(xs, d, allow))
    return DominanceVerdict(Relation.CROSSING, crossings,
                            float(min(np.max(d), -np.min(d))), grid, order)


def _one(cs, x):
    return evaluate(cs, np.array([x]))


def _survival_diff(A, B, kind):
    def diff_at(x):
        return float(_one(A, x).sf(kind)[0] - _one(B, x).sf(kind)[0])
    return diff_at


def compare_st(A: ComponentSet, B: ComponentSet, kind, grid: GridSpec = None, tol=DEFAULT_TOL):
    """Usual stochastic order from pointwise survival differences."""
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    xs = grid.points()
    sa, sb = evaluate(A, xs).sf(kind), evaluate(B, xs).sf(kind)
    live = ~((sa < DEAD_TAIL) & (sb < DEAD_TAIL))
    d = (sa - sb)[live]
    return _pointwise_verdict(xs[live], d, np.full(d.shape, tol),
                              _survival_diff(A, B, kind), grid, "st")


def compare_fr(A: ComponentSet, B: ComponentSet, kind, grid: GridSpec = None, tol=DEFAULT_TOL):
    """Failure rate order; ``A`` dominates when its hazard is the smaller one."""
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    xs = grid.points()
    ga, gb = evaluate(A, xs), evaluate(B, xs)
    live = ~((ga.sf(kind) < DEAD_TAIL) & (gb.sf(kind) < DEAD_TAIL))
    ha, hb = np.exp(ga.log_hazard(kind)), np.exp(gb.log_hazard(kind))
    d = (hb - ha)[live]
    allow = tol * np.maximum(1.0, np.maximum(ha, hb))[live]

    def diff_at(x):
        return float(np.exp(_one(B, x).log_hazard(kind))[0] - np.exp(_one(A, x).log_hazard(kind))[0])

    return _pointwise_verdict(xs[live], d, allow, diff_at, grid, "fr")


def _rhazard(cs, kind, xs):
    if cs.is_homogeneous():
        if kind is SystemKind.PARALLEL:
            return homogeneous_rhazard(cs, xs)
        # a common-(theta, phi) series system is one component with the summed alpha
        total = float(np.sum(cs.alphas))
        return np.exp(kernels.component_terms(cs.thetas[0], cs.phis[0], total, xs)[3])
    return np.exp(evaluate(cs, xs).log_rhazard(kind))


def compare_rf(A: ComponentSet, B: ComponentSet, grid: GridSpec = None, tol=DEFAULT_TOL,
               kind=SystemKind.PARALLEL):
    """Reversed failure rate order; ``A`` dominates when its reversed hazard is larger.

    Systems with common (theta, phi) use closed forms that avoid the
    cancellation in ``log pdf - log cdf``; anything else falls back to it.
    """
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    xs = grid.points()
    ra, rb = _rhazard(A, kind, xs), _rhazard(B, kind, xs)
    d = ra - rb
    allow = tol * np.maximum(1.0, np.maximum(ra, rb))

    def diff_at(x):
        p = np.array([x])
        return float(_rhazard(A, kind, p)[0] - _rhazard(B, kind, p)[0])

    return _pointwise_verdict(xs, d, allow, diff_at, grid, "rf")


def log_density_ratio(A: ComponentSet, B: ComponentSet, kind, xs):
    """``log f_A - log f_B`` on ``xs`` plus a per-point rounding scale."""
    kind = SystemKind.parse(kind)
    xs = np.asarray(xs, dtype=float)
    if (kind is SystemKind.SERIES and A.is_homogeneous() and B.is_homogeneous()
            and np.isclose(A.thetas[0], B.thetas[0], rtol=1e-12, atol=0)
            and np.isclose(A.phis[0], B.phis[0], rtol=1e-12, atol=0)):
        ratio = homogeneous_series_log_ratio(A, B, xs)
        return ratio, np.maximum(1.0, np.abs(ratio))
    la, lb = evaluate(A, xs).log_pdf(kind), evaluate(B, xs).log_pdf(kind)
    if not (np.all(np.isfinite(la)) and np.all(np.isfinite(lb))):
        raise DomainError("density ratio undefined: a density vanishes on the grid")
    return la - lb, np.maximum(1.0, np.maximum(np.abs(la), np.abs(lb)))


def compare_lr(A: ComponentSet, B: ComponentSet, kind, grid: GridSpec = None, tol=DEFAULT_TOL):
    """Likelihood ratio order from the monotonicity of ``log f_A - log f_B``."""
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    xs = grid.points()
    ratio, scale = log_density_ratio(A, B, kind, xs)
    steps = np.diff(ratio)
    allow = tol * np.maximum(scale[1:], scale[:-1])
    spread = np.abs(ratio - ratio[0])
    if np.all(spread <= tol * scale):
        return DominanceVerdict(Relation.EQUAL, (), float(np.max(spread)), grid, "lr")
    if np.all(steps >= -allow):
        return DominanceVerdict(Relation.FIRST, (), float(max(0.0, -np.min(steps))), grid, "lr")
    if np.all(steps <= allow):
        return DominanceVerdict(Relation.SECOND, (), float(max(0.0, np.max(steps))), grid, "lr")
    turns = _sign_changes(xs[:-1], steps, allow)
    violation = float(min(np.max(steps), -np.min(steps)))
    if not turns or len(turns) > _MAX_CLEAN_TURNS:
        return DominanceVerdict(Relation.INCONCLUSIVE, (), violation, grid, "lr")
    # the ratio peaks or bottoms out between these grid points
    crossings = tuple((float(xs[a]), float(xs[b + 1])) for a, b, _ in turns)
    return DominanceVerdict(Relation.CROSSING, crossings, violation, grid, "lr")


@dataclass(frozen=True)
class AuditReport:
    verdicts: dict
    flags: tuple = field(default_factory=tuple)

    @property
    def ok(self):
        return not self.flags


# stronger order -> weaker orders it implies
_IMPLIES = {"lr": ("fr", "rf", "st"), "fr": ("st",), "rf": ("st",)}


def implication_audit(A: ComponentSet, B: ComponentSet, kind, grid: GridSpec = None,
                      tol=DEFAULT_TOL):
    """Run every comparator and flag any verdict that breaks lr => fr, rf => st."""
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    verdicts = {
        "lr": compare_lr(A, B, kind, grid, tol),
        "fr": compare_fr(A, B, kind, grid, tol),
        "rf": compare_rf(A, B, grid, tol, kind=kind),
        "st": compare_st(A, B, kind, grid, tol),
    }
    flags = []
    for strong, weaker in _IMPLIES.items():
        rel = verdicts[strong].relation
        if rel not in (Relation.FIRST, Relation.SECOND):
            continue
        for weak in weaker:
            got = verdicts[weak].relation
            if got not in (rel, Relation.EQUAL):
                flags.append(f"{strong} {rel.value} but {weak} {got.value}")
    return AuditReport(verdicts, tuple(flags))


class SchurClass(enum.Enum):
    CONVEX = "ConvexEvidence"
    CONCAVE = "ConcaveEvidence"
    NEITHER = "Neither"
    BOTH = "Both"


@dataclass(frozen=True)
class SchurEvidence:
    min_pair_product: float
    max_pair_product: float
    classification: SchurClass


def _gradient(f, z, steps):
    g = np.empty_like(z)
    for i in range(z.size):
        up, dn = z.copy(), z.copy()
        up[i] += steps[i]
        dn[i] -= steps[i]
        g[i] = (f(up) - f(dn)) / (2.0 * steps[i])
    return g


def _steps(z, h):
    if h is not None:
        return np.full(z.shape, float(h))
    return 1e-5 * np.maximum(1.0, np.abs(z))


def schur_pair_condition(f: Callable, z, h: Optional[float] = None, tol=1e-9):
    """Sign evidence for Schur convexity of ``f`` at ``z``.

    Evaluates ``(z_i - z_j)(df/dz_i - df/dz_j)`` over all pairs with central
    differences.  ``f`` maps a parameter vector to a float; bind any fixed
    abscissa with a closure.
    """
    z = np.asarray(z, dtype=float)
    g = _gradient(f, z, _steps(z, h))
    i, j = np.triu_indices(z.size, k=1)
    prods = (z[i] - z[j]) * (g[i] - g[j])
    lo = float(prods.min()) if prods.size else 0.0
    hi = float(prods.max()) if prods.size else 0.0
    convex, concave = lo >= -tol, hi <= tol
    if convex and concave:
        cls = SchurClass.BOTH
    elif convex:
        cls = SchurClass.CONVEX
    elif concave:
        cls = SchurClass.CONCAVE
    else:
        cls = SchurClass.NEITHER
    return SchurEvidence(lo, hi, cls)


def _matrix_functional(kind, x, phi):
    xs = np.array([x], dtype=float)

    def psi(entries):
        cs = ComponentSet.from_arrays(entries[2:], phi, entries[:2])
        g = evaluate(cs, xs)
        if kind is SystemKind.SERIES:
            return float(np.exp(g.log_sf_series[0]))
        return float(np.exp(g.log_cdf_parallel[0]))

    return psi


def chain_pair_condition(A: ParamMatrix, kind, x, phi=2.0, h: Optional[float] = None):
    """``sum_rows (a_r2 - a_r1)(dpsi/da_r2 - dpsi/da_r1)`` for a 2 x 2 ``A``.

    ``psi`` is the series survival or parallel cdf at ``x`` seen as a function
    of the four matrix entries.  A value <= 0 for every matrix of the relevant
    class is what makes ``psi`` monotone along T-transform chains.
    """
    kind = SystemKind.parse(kind)
    if A.n != 2:
        raise ValueError("only defined for 2 x 2 matrices")
    z = np.concatenate([A.alphas, A.thetas]).astype(float)
    g = _gradient(_matrix_functional(kind, x, phi), z, _steps(z, h))
    a = z.reshape(2, 2)
    d = g.reshape(2, 2)
    return float(np.sum((a[:, 1] - a[:, 0]) * (d[:, 1] - d[:, 0])))


def find_crossings(A: ComponentSet, B: ComponentSet, kind, grid: GridSpec = None,
                   tol=DEFAULT_TOL, rel_width=1e-10):
    """Sorted abscissae where ``survival_A - survival_B`` changes sign."""
    kind = SystemKind.parse(kind)
    grid = grid or DEFAULT_GRID
    xs = grid.points()
    sa, sb = evaluate(A, xs).sf(kind), evaluate(B, xs).sf(kind)
    d = sa - sb
    diff_at = _survival_diff(A, B, kind)
    out = []
    for a, b, sgn in _sign_changes(xs, d, np.full(d.shape, tol)):
        lo, hi = _refine(diff_at, xs[a], xs[b], sgn, rel_width)
        out.append(0.5 * (lo + hi))
    return sorted(out)
