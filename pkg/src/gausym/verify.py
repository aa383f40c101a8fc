"""Inequality and identity checks on rearranged gradients.

Each check compares two curves over a common grid on (0, 1) and reports
the worst signed violation against a tolerance.  The default tolerance
model budgets first-order quadrature error against the cell count and
finite-difference error against the derivative grid:

    tol(N, M) = 5 * sup|grad f| / sqrt(N) + 10 * sup_interior(surrogate) / M

where the surrogate is the profile-derivative-times-isoperimetric-profile
curve and its sup is estimated over s in [0.05, 0.95] (the raw sup can
diverge toward the endpoints).  Tolerances double for non-smooth fields.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, IntervalError, NonSmoothFieldError
from .fields import ScalarField, gradient_norm
from .gaussian import GaussianGrid, equal_measure_grid, iso_profile
from .majorize import DEFAULT_NORM_FAMILY, RINorm, ri_norm
from .rearrange import (
    GridCurve,
    Profile,
    derivative_bin_count,
    lebesgue_rearrangement,
)
from .symmetrize import symmetrized_field

VIOLATION_FLOOR = 1e-12


@dataclass(frozen=True)
class IneqReport:
    """Outcome of one check: LHS/RHS curves, worst violation, verdict."""

    check_name: str
    field_label: str
    dim: int
    N: int
    M: int
    s_grid: np.ndarray
    lhs_curve: np.ndarray
    rhs_curve: np.ndarray
    max_violation: float
    tolerance: float
    passed: bool
    runtime_ms: int
    extra: dict = dc_field(default_factory=dict)

    def entry(self) -> dict:
        """Flat report-schema entry (curves are emitted separately)."""
        return {
            "name": self.check_name,
            "field": self.field_label,
            "dim": self.dim,
            "N": self.N,
            "M": self.M,
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
        }


class _Pipeline:
    """Shared per-(field, grid, M) data: rearrangements and surrogate."""

    def __init__(self, field: ScalarField, grid: GaussianGrid, M: int):
        if M < 8:
            raise DomainError(f"s-grid needs M >= 8, got {M}")
        self.field = field
        self.grid = grid
        self.M = M
        reps = grid.representatives
        vals = np.abs(field(reps))
        order = np.argsort(-vals, kind="stable")
        K = grid.num_cells
        knots = np.concatenate(([0.0], np.arange(1, K + 1) / K))
        self.p = Profile(knots, vals[order])
        self.grad_values = gradient_norm(field, reps)
        self.grads_by_level = self.grad_values[order]
        self.grad_prof = lebesgue_rearrangement(
            np.column_stack((grid.measures, self.grad_values))
        )
        self.m_d = derivative_bin_count(self.p, M, min_block=K // grid.cells_per_axis)
        # Jump representation of the surrogate measure (-dp) * I: each jump
        # of the step profile carries I evaluated at the center of the
        # stretch it stands for (capped at the derivative-bin width), so a
        # genuine isolated drop after a flat keeps its own location while
        # dense jumps get the unbiased midpoint.  Surrogate samples are
        # bin averages of this measure: averaging the product directly
        # keeps the samples inside the range of (-p)' * I even where both
        # factors vary quickly within a bin.
        jumps = self.p.values[:-1] - self.p.values[1:]
        interior = self.p.knots[1:-1]
        positive = jumps > 0.0
        self._jump_at = interior[positive]
        self._jump_size = jumps[positive]
        prev = np.concatenate(([0.0], self._jump_at[:-1]))
        shift = 0.5 * np.minimum(self._jump_at - prev, 1.0 / self.m_d)
        self._mass_cum = np.concatenate(
            ([0.0], np.cumsum(self._jump_size * iso_profile(self._jump_at - shift)))
        )
        edges = np.arange(self.m_d + 1) / self.m_d
        edge_vals = self.surrogate_cumulative(edges)
        self.surr = GridCurve(
            (np.arange(self.m_d) + 0.5) / self.m_d,
            (edge_vals[1:] - edge_vals[:-1]) * self.m_d,
        )
        self.surr_prof = lebesgue_rearrangement(self.surr.samples())
        self.t_grid = np.arange(1, M + 1) / M

    def surrogate_cumulative(self, t) -> np.ndarray:
        """Exact integral over (0, t] of the jump-weighted surrogate."""
        idx = np.searchsorted(self._jump_at, np.asarray(t, dtype=float), side="right")
        return self._mass_cum[idx]

    def tolerance(self, override: Optional[float]) -> float:
        if override is not None:
            return float(override)
        c1 = 5.0 * float(np.max(self.grad_values))
        interior = self.surr.values[(self.surr.s >= 0.05) & (self.surr.s <= 0.95)]
        c2 = 10.0 * (float(np.max(interior)) if interior.size else 0.0)
        tol = c1 / math.sqrt(self.grid.cells_per_axis) + c2 / self.M
        return tol if self.field.smooth else 2.0 * tol


def _finish(
    name: str,
    pipe: _Pipeline,
    s_grid: np.ndarray,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tol: float,
    equality: bool,
    t_start: float,
    extra: Optional[dict] = None,
    fold_violation: Optional[float] = None,
) -> IneqReport:
    diff = lhs - rhs
    violation = float(np.max(np.abs(diff))) if equality else float(np.max(diff))
    if fold_violation is not None:
        violation = max(violation, fold_violation)
    return IneqReport(
        check_name=name,
        field_label=pipe.field.label,
        dim=pipe.grid.dim,
        N=pipe.grid.cells_per_axis,
        M=len(s_grid),
        s_grid=s_grid,
        lhs_curve=lhs,
        rhs_curve=rhs,
        max_violation=violation,
        tolerance=tol,
        passed=bool(violation <= tol),
        runtime_ms=int(round((time.perf_counter() - t_start) * 1000.0)),
        extra=extra or {},
    )


def check_polya_szego(
    field: ScalarField,
    grid: GaussianGrid,
    M: int = 4096,
    tol: Optional[float] = None,
    equality: bool = False,
) -> IneqReport:
    """Cumulative gradient rearrangement of the symmetrized field against
    that of the field itself: LHS(t) <= RHS(t) on the t-grid.

    Equality mode (for fields already decreasing in x1) bounds |LHS-RHS|.
    """
    if not field.smooth:
        raise NonSmoothFieldError(f"check needs a smooth field, got {field.label!r}")
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    fo = symmetrized_field(pipe.p, dim=grid.dim, interpolation="linear", n_bins=pipe.m_d)
    sym_grad = gradient_norm(fo, grid.representatives)
    sym_prof = lebesgue_rearrangement(np.column_stack((grid.measures, sym_grad)))
    lhs = sym_prof.cumulative(pipe.t_grid)
    rhs = pipe.grad_prof.cumulative(pipe.t_grid)
    return _finish("dos", pipe, pipe.t_grid, lhs, rhs, pipe.tolerance(tol), equality, t0)


def check_reformulated(
    field: ScalarField,
    grid: GaussianGrid,
    M: int = 4096,
    tol: Optional[float] = None,
    equality: bool = False,
) -> IneqReport:
    """Cumulative comparison of the rearranged surrogate (-f*)' * I against
    the rearranged gradient: LHS(t) <= RHS(t) on the t-grid."""
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    lhs = pipe.surr_prof.cumulative(pipe.t_grid)
    rhs = pipe.grad_prof.cumulative(pipe.t_grid)
    return _finish("uno", pipe, pipe.t_grid, lhs, rhs, pipe.tolerance(tol), equality, t0)


def check_norm_inequality(
    field: ScalarField,
    grid: GaussianGrid,
    norms: Sequence[RINorm] = DEFAULT_NORM_FAMILY,
    M: int = 4096,
    tol: Optional[float] = None,
) -> list[IneqReport]:
    """Norm-by-norm domination of the rearranged surrogate by the
    rearranged gradient across the implemented r.i. family."""
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    tol_value = pipe.tolerance(tol)
    reports = []
    for X in norms:
        t_norm = time.perf_counter()
        lhs = np.array([ri_norm(pipe.surr_prof, X)])
        rhs = np.array([ri_norm(pipe.grad_prof, X)])
        reports.append(
            _finish(
                f"norm:{X.label}",
                pipe,
                np.array([1.0]),
                lhs,
                rhs,
                tol_value,
                False,
                t_norm if reports else t0,
            )
        )
    return reports


def _level_cut_gradient_integral(pipe: _Pipeline, levels: np.ndarray) -> np.ndarray:
    """Integral of |grad f| over {|f| > level} for each level, exact on
    grid data (cells ordered by decreasing |f|)."""
    counts = np.searchsorted(-pipe.p.values, -levels, side="left")
    gcum = np.concatenate(
        ([0.0], np.cumsum(pipe.grads_by_level * pipe.grid.cell_measure))
    )
    return gcum[counts]


def check_mazya_talenti(
    field: ScalarField,
    grid: GaussianGrid,
    M: int = 4096,
    tol: Optional[float] = None,
) -> IneqReport:
    """Level-set gradient bound in cumulative form: for every grid t, the
    integral of (-f*)' * I over (0, t] must stay below the integral of
    |grad f| over the super-level set {|f| > f*(t)}.

    The pointwise (differentiated) form is noise-dominated on discrete
    data, so it is additionally checked only on coarse bins where the
    profile drops by more than 10x the median single-cell drop; its worst
    violation is folded into the verdict.
    """
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    lhs = pipe.surrogate_cumulative(pipe.t_grid)
    rhs = _level_cut_gradient_integral(pipe, pipe.p(pipe.t_grid))

    K = pipe.p.num_pieces
    bins = max(8, min(M, K // 16))
    edges = np.arange(bins + 1) / bins
    l_edge = pipe.surrogate_cumulative(edges)
    r_edge = _level_cut_gradient_integral(pipe, pipe.p(edges))
    drops = pipe.p(edges[:-1]) - pipe.p(edges[1:])
    positive = pipe._jump_size
    value_range = float(pipe.p.values[0] - pipe.p.values[-1])
    if positive.size:
        # strictly decreasing at scale, yet still resolved: a bin losing
        # more than 10% of the whole range is not a derivative estimate
        eligible = (drops > 10.0 * float(np.median(positive))) & (
            drops <= 0.1 * value_range
        )
    else:
        eligible = np.zeros(bins, bool)
    extra = {"pointwise_eligible_bins": int(np.count_nonzero(eligible))}
    fold = None
    if np.any(eligible):
        lhs_slope = (l_edge[1:] - l_edge[:-1])[eligible] * bins
        rhs_slope = (r_edge[1:] - r_edge[:-1])[eligible] * bins
        fold = float(np.max(lhs_slope - rhs_slope))
        extra["pointwise_violation"] = fold
    return _finish(
        "mt", pipe, pipe.t_grid, lhs, rhs, pipe.tolerance(tol), False, t0, extra, fold
    )


def validate_intervals(intervals) -> np.ndarray:
    arr = np.asarray(intervals, dtype=float).reshape(-1, 2)
    if arr.size == 0:
        raise IntervalError("need at least one interval")
    if np.any(arr[:, 0] < 0.0) or np.any(arr[:, 1] > 1.0):
        raise IntervalError("intervals must lie within [0, 1]")
    if np.any(arr[:, 0] >= arr[:, 1]):
        raise IntervalError("each interval needs a < b")
    if np.any(arr[1:, 0] < arr[:-1, 1]):
        raise IntervalError("intervals must be disjoint and ordered")
    return arr


def check_interval_bound(
    field: ScalarField,
    grid: GaussianGrid,
    intervals,
    M: int = 4096,
    tol: Optional[float] = None,
) -> IneqReport:
    """Surrogate mass on a finite union E of disjoint intervals against the
    gradient rearrangement integrated over (0, |E|).

    Checked in running form: every truncation E intersected with (0, t] is
    itself a finite union, so the comparison holds along the whole curve,
    with t = 1 giving the bound for E itself.
    """
    arr = validate_intervals(intervals)
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    a, b = arr[:, 0], arr[:, 1]
    t = pipe.t_grid
    clamped = np.clip(t[None, :], a[:, None], b[:, None])
    lhs = np.sum(pipe.surr.cumulative(clamped) - pipe.surr.cumulative(a)[:, None], axis=0)
    cut = np.sum(np.maximum(np.minimum(t[None, :], b[:, None]) - a[:, None], 0.0), axis=0)
    rhs = pipe.grad_prof.cumulative(cut)
    extra = {"intervals": arr.tolist(), "total_length": float(np.sum(b - a))}
    return _finish(
        "interval", pipe, pipe.t_grid, lhs, rhs, pipe.tolerance(tol), False, t0, extra
    )


def check_orlicz_equality(
    field: ScalarField,
    grid: GaussianGrid,
    c_grid: Optional[np.ndarray] = None,
    M: int = 4096,
    tol: Optional[float] = None,
) -> IneqReport:
    """Change-of-variables identity tested as an equality over the hinge
    family: for each threshold c, the uniform-grid integral of
    (surrogate - c)+ must match the Gaussian-grid integral of
    (|grad of the symmetrized field| - c)+."""
    if not field.smooth:
        raise NonSmoothFieldError(f"check needs a smooth field, got {field.label!r}")
    t0 = time.perf_counter()
    pipe = _Pipeline(field, grid, M)
    if c_grid is None:
        c_grid = np.linspace(0.0, float(np.max(pipe.surr.values)), 256)
    c_grid = np.asarray(c_grid, dtype=float)
    fo = symmetrized_field(pipe.p, dim=grid.dim, interpolation="linear", n_bins=pipe.m_d)
    sym_grad = gradient_norm(fo, grid.representatives)
    lhs = np.mean(np.maximum(pipe.surr.values[None, :] - c_grid[:, None], 0.0), axis=1)
    rhs = (
        np.sum(np.maximum(sym_grad[None, :] - c_grid[:, None], 0.0), axis=1)
        * grid.cell_measure
    )
    return _finish(
        "orlicz", pipe, c_grid, lhs, rhs, pipe.tolerance(tol), True, t0,
        {"c_max": float(c_grid[-1])},
    )


_CONVERGENT_CHECKS = {
    "uno": check_reformulated,
    "dos": check_polya_szego,
    "mt": check_mazya_talenti,
}


@dataclass(frozen=True)
class ConvergenceStudy:
    check_name: str
    Ns: tuple
    violations: tuple
    empirical_order: float
    nonincreasing: bool

    @property
    def passed(self) -> bool:
        return self.nonincreasing


def convergence_study(
    field: ScalarField,
    checks: Sequence[str],
    Ns: Sequence[int],
    M: int = 4096,
    dim: int = 1,
) -> list[ConvergenceStudy]:
    """Refinement study: rerun checks over increasing per-axis cell counts
    and fit the empirical decay order of the positive violations.

    Violations must not increase along refinement beyond a factor-1.5
    slack; violations at or below the round-off floor count as converged,
    and fewer than two positive entries give order +inf.
    """
    Ns = tuple(int(n) for n in Ns)
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise DomainError("refinement cell counts must be strictly increasing")
    unknown = [c for c in checks if c not in _CONVERGENT_CHECKS]
    if unknown:
        raise DomainError(
            f"convergence study supports {sorted(_CONVERGENT_CHECKS)}, got {unknown}"
        )
    grids = [equal_measure_grid(dim, n) for n in Ns]
    studies = []
    for name in checks:
        run = _CONVERGENT_CHECKS[name]
        violations = tuple(run(field, g, M=M).max_violation for g in grids)
        positive = [max(v, 0.0) for v in violations]
        nonincreasing = all(
            later <= max(1.5 * earlier, VIOLATION_FLOOR)
            for earlier, later in zip(positive, positive[1:])
        )
        fit_pts = [
            (math.log(n), math.log(v)) for n, v in zip(Ns, positive) if v > VIOLATION_FLOOR
        ]
        if len(fit_pts) < 2:
            order = math.inf
        else:
            xs, ys = zip(*fit_pts)
            order = -float(np.polyfit(xs, ys, 1)[0])
        studies.append(ConvergenceStudy(name, Ns, violations, order, nonincreasing))
    return studies
