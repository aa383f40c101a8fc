"""Distribution functions and decreasing rearrangements.

Rearrangements are taken of |f| throughout (super-level sets {|f| > t}).
A Profile is the nonincreasing right-continuous step function on (0, 1]
produced by sorting sampled values against their measures; a GridCurve
holds raw samples on a uniform grid (difference quotients, surrogates)
that need not be monotone and become Profiles only after a Lebesgue
rearrangement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, WeightSumError
from .fields import ScalarField, gradient_norm
from .gaussian import GaussianGrid

_KNOT_SNAP = 1e-12


@dataclass(frozen=True)
class Profile:
    """Nonincreasing step function on (0, 1].

    ``values[k]`` is taken on the half-open interval (knots[k], knots[k+1]];
    evaluation at 0 returns the right limit values[0].  Construction
    asserts the monotonicity invariant, snapping violations within
    round-off and rejecting anything larger.
    """

    knots: np.ndarray  # length K+1, knots[0] = 0, knots[-1] = 1, increasing
    values: np.ndarray  # length K, nonincreasing

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float).copy()
        values = np.asarray(self.values, dtype=float).copy()
        if knots.ndim != 1 or values.ndim != 1 or len(knots) != len(values) + 1:
            raise DomainError("profile needs K+1 knots for K values")
        if len(values) == 0:
            raise DomainError("profile needs at least one piece")
        if abs(knots[0]) > _KNOT_SNAP or abs(knots[-1] - 1.0) > _KNOT_SNAP:
            raise DomainError("profile knots must start at 0 and end at 1")
        knots[0] = 0.0
        knots[-1] = 1.0
        if np.any(np.diff(knots) <= 0.0):
            raise DomainError("profile knots must be strictly increasing")
        scale = 1.0 + float(np.max(np.abs(values)))
        if np.any(np.diff(values) > _KNOT_SNAP * scale):
            raise DomainError("profile values must be nonincreasing")
        values = np.minimum.accumulate(values)
        knots.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    @property
    def num_pieces(self) -> int:
        return len(self.values)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.knots)

    @property
    def sup(self) -> float:
        return float(self.values[0])

    def __call__(self, s) -> np.ndarray:
        s_arr = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.knots, s_arr, side="left") - 1
        idx = np.clip(idx, 0, self.num_pieces - 1)
        out = self.values[idx]
        return out if s_arr.ndim else float(out)

    def cumulative(self, t) -> np.ndarray:
        """Exact integral over (0, t] of the step function."""
        t_arr = np.asarray(t, dtype=float)
        edges = np.concatenate(([0.0], np.cumsum(self.values * self.widths)))
        idx = np.clip(np.searchsorted(self.knots, t_arr, side="left") - 1, 0, self.num_pieces - 1)
        out = edges[idx] + self.values[idx] * (t_arr - self.knots[idx])
        return out if t_arr.ndim else float(out)

    def total_integral(self) -> float:
        return float(np.sum(self.values * self.widths))

    def super_level_measure(self, level: float) -> float:
        """Lebesgue measure of {s : profile(s) > level}; exact on knot data."""
        count = np.searchsorted(-self.values, -level, side="left")
        return float(self.knots[count])

    def scaled(self, factor: float) -> "Profile":
        if factor < 0:
            raise DomainError("scaling factor must be nonnegative")
        return Profile(self.knots, self.values * factor)

    @classmethod
    def constant(cls, c: float) -> "Profile":
        return cls(np.array([0.0, 1.0]), np.array([abs(float(c))]))

    @classmethod
    def from_function(cls, g, K: int) -> "Profile":
        """Step approximation sampling a nonincreasing g at midpoints."""
        knots = np.arange(K + 1) / K
        vals = np.asarray(g((np.arange(K) + 0.5) / K), dtype=float)
        return cls(knots, vals)


@dataclass(frozen=True)
class GridCurve:
    """Samples of a function at midpoints (j+1/2)/M of a uniform grid."""

    s: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if s.shape != values.shape or s.ndim != 1:
            raise DomainError("grid curve needs matching 1-d s and values")
        s.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return len(self.s)

    def integral(self) -> float:
        return float(np.mean(self.values))

    def cumulative(self, t) -> np.ndarray:
        """Integral over (0, t] of the bin-constant extension of the samples."""
        m = self.size
        edges = np.arange(m + 1) / m
        cum = np.concatenate(([0.0], np.cumsum(self.values) / m))
        t_arr = np.asarray(t, dtype=float)
        out = np.interp(t_arr, edges, cum)
        return out if t_arr.ndim else float(out)

    def samples(self) -> np.ndarray:
        """(weight, value) pairs with equal weights 1/M."""
        return np.column_stack((np.full(self.size, 1.0 / self.size), self.values))


def distribution_function(field: ScalarField, grid: GaussianGrid, level: float) -> float:
    """Gaussian measure of {|f| > level}, sampled on grid representatives."""
    vals = np.abs(field(grid.representatives))
    return float(np.count_nonzero(vals > level) * grid.cell_measure)


def _profile_from_weighted(values: np.ndarray, weights: np.ndarray) -> Profile:
    order = np.argsort(-values, kind="stable")  # ties keep cell order
    sorted_vals = values[order]
    knots = np.concatenate(([0.0], np.cumsum(weights[order])))
    knots[-1] = 1.0
    return Profile(knots, sorted_vals)


def decreasing_rearrangement(field: ScalarField, grid: GaussianGrid) -> Profile:
    """Decreasing rearrangement of |f| with respect to the Gaussian measure.

    Sorts |f| over the equal-measure cells (stable, ties by cell index),
    so the result is equimeasurable with the sampled |f| by construction.
    """
    vals = np.abs(field(grid.representatives))
    return _profile_from_weighted(vals, grid.measures)


def lebesgue_rearrangement(samples) -> Profile:
    """Decreasing rearrangement of weighted samples on (0, 1).

    ``samples`` is a sequence of (weight, value) pairs; weights must be
    positive and sum to 1 within 1e-12.
    """
    arr = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise WeightSumError("samples must be nonempty (weight, value) pairs")
    weights, values = arr[:, 0], arr[:, 1]
    if np.any(weights <= 0.0):
        raise WeightSumError("weights must be positive")
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-12:
        raise WeightSumError(f"weights sum to {total!r}, expected 1 within 1e-12")
    return _profile_from_weighted(values, weights)


def derivative_bin_count(p: Profile, M: int, min_block: int = 1) -> int:
    """Largest derivative-grid size <= M whose bins average over at least
    two value blocks of the profile.

    Sorted |f| values cluster in blocks: symmetric fields tie in exact
    pairs, fields constant along extra axes tie in whole columns, and on
    a dim-dimensional grid a level set of a smooth field crosses about
    one shell of cells, so ``min_block`` should be the shell size
    N^(dim-1).  Difference quotients on bins finer than a block alternate
    between zero and spikes.
    """
    K = p.num_pieces
    # levels an ulp apart (imperfect float symmetry of mirrored cells)
    # count as tied
    tol = 1e-12 * (1.0 + abs(float(p.values[0])))
    distinct = 1 + int(np.count_nonzero(np.diff(p.values) < -tol))
    block = max(K / distinct, float(min_block))
    divisor = 1 if block < 1.5 else int(np.ceil(2.0 * block))
    return max(8, min(M, K // divisor))


def neg_derivative(p: Profile, M: int) -> GridCurve:
    """Difference-quotient samples of (-p)' on the uniform M-grid.

    Uses symmetric quotients across bin edges j/M, so the samples at
    midpoints (j+1/2)/M integrate exactly to the total decrease of p.
    Nonincreasing input makes them nonnegative; round-off is clamped to 0.
    Flat stretches give 0.
    """
    if M < 8:
        raise DomainError(f"derivative grid needs M >= 8, got {M}")
    edges = np.arange(M + 1) / M
    pv = p(edges)
    quotients = np.maximum((pv[:-1] - pv[1:]) * M, 0.0)
    return GridCurve((np.arange(M) + 0.5) / M, quotients)


def equimeasurability_gap(field: ScalarField, grid: GaussianGrid, A) -> float:
    """|integral of A(|f|) over the grid - integral of A(f*) over (0,1)|.

    Both sides sum the same multiset of values, so the gap is pure
    round-off.  ``A`` is any callable Young function.
    """
    vals = np.abs(field(grid.representatives))
    lhs = float(np.sum(A(vals)) * grid.cell_measure)
    p = decreasing_rearrangement(field, grid)
    rhs = float(np.sum(A(p.values) * p.widths))
    return abs(lhs - rhs)


def gradient_rearrangement(field: ScalarField, grid: GaussianGrid) -> Profile:
    """Decreasing rearrangement of |grad f| under the Gaussian measure."""
    vals = gradient_norm(field, grid.representatives)
    return _profile_from_weighted(vals, grid.measures)
