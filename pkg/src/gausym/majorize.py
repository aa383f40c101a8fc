"""Young functions, Orlicz integrals, partial-sum majorization, and
rearrangement-invariant norms on profiles.

The "all Young functions" quantifier of the comparison principle is
realized by the hinge family (t-c)+ on a finite c-grid: hinges are the
extreme rays characterizing partial-sum domination between nonincreasing
profiles.  The "any r.i. norm" quantifier is realized by a finite family
spanning the standard scale: Lp, a Lorentz lambda-norm, a Marcinkiewicz
maximal norm, and an Orlicz (Luxemburg) norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BracketingError, InvalidParameterError
from .rearrange import GridCurve, Profile

EXPSQ_DEFAULT_CAP = 20.0
HINGE_GRID_SIZE = 256


@dataclass(frozen=True)
class YoungFunction:
    """Convex nondecreasing A on [0, inf) with A(0) = 0.

    Kinds: power(p >= 1) t^p; hinge(c >= 0) max(t-c, 0);
    expsq(T) exp(min(t, T)^2) - 1, truncated to stay finite in double
    precision (default T = 20).
    """

    kind: str
    param: float

    def __call__(self, t):
        x = np.abs(np.asarray(t, dtype=float))
        if self.kind == "power":
            return x**self.param
        if self.kind == "hinge":
            return np.maximum(x - self.param, 0.0)
        capped = np.minimum(x, self.param)
        return np.expm1(capped * capped)

    @property
    def label(self) -> str:
        return f"{self.kind}({self.param:g})"

    @classmethod
    def power(cls, p: float) -> "YoungFunction":
        if p < 1:
            raise InvalidParameterError(f"power exponent must be >= 1, got {p}")
        return cls("power", float(p))

    @classmethod
    def hinge(cls, c: float) -> "YoungFunction":
        if c < 0:
            raise InvalidParameterError(f"hinge threshold must be >= 0, got {c}")
        return cls("hinge", float(c))

    @classmethod
    def exp_sq_truncated(cls, T: float = EXPSQ_DEFAULT_CAP) -> "YoungFunction":
        if T <= 0:
            raise InvalidParameterError(f"truncation level must be positive, got {T}")
        return cls("expsq", float(T))


@dataclass(frozen=True)
class RINorm:
    """Rearrangement-invariant norm specification.

    kinds: lp (p in [1, inf]), lorentz (lambda_p, p >= 1), marcinkiewicz
    (maximal-function form, p > 1), orlicz (Luxemburg norm of a Young
    function).
    """

    kind: str
    param: float = math.nan
    young: Optional[YoungFunction] = None

    @property
    def label(self) -> str:
        if self.kind == "orlicz":
            return f"orlicz:{self.young.kind}"
        p = "inf" if math.isinf(self.param) else f"{self.param:g}"
        return f"{self.kind}:{p}"


def parse_norm(spec: str) -> RINorm:
    """Parse the CLI mini-syntax: lp:2, lp:inf, lorentz:2, marcinkiewicz:2,
    orlicz:expsq."""
    kind, sep, arg = spec.strip().partition(":")
    if not sep:
        raise InvalidParameterError(f"norm spec {spec!r} needs kind:parameter")
    if kind == "lp":
        p = math.inf if arg == "inf" else float(arg)
        if p < 1:
            raise InvalidParameterError(f"lp exponent must be >= 1, got {arg}")
        return RINorm("lp", p)
    if kind == "lorentz":
        p = float(arg)
        if p < 1:
            raise InvalidParameterError(f"lorentz exponent must be >= 1, got {arg}")
        return RINorm("lorentz", p)
    if kind == "marcinkiewicz":
        p = float(arg)
        if p <= 1:
            raise InvalidParameterError(f"marcinkiewicz exponent must be > 1, got {arg}")
        return RINorm("marcinkiewicz", p)
    if kind == "orlicz":
        if arg != "expsq":
            raise InvalidParameterError(f"unknown orlicz spec {arg!r}; use expsq")
        return RINorm("orlicz", young=YoungFunction.exp_sq_truncated())
    raise InvalidParameterError(
        f"unknown norm kind {kind!r}; use lp, lorentz, marcinkiewicz or orlicz"
    )


DEFAULT_NORM_FAMILY: tuple[RINorm, ...] = (
    RINorm("lp", 1.0),
    RINorm("lp", 1.5),
    RINorm("lp", 2.0),
    RINorm("lp", 4.0),
    RINorm("lp", math.inf),
    RINorm("lorentz", 2.0),
    RINorm("marcinkiewicz", 2.0),
    RINorm("orlicz", young=YoungFunction.exp_sq_truncated()),
)


def orlicz_integral(p, A) -> float:
    """Integral of A over a Profile (exact piecewise sum) or GridCurve
    (uniform-bin mean)."""
    if isinstance(p, Profile):
        return float(np.sum(A(p.values) * p.widths))
    if isinstance(p, GridCurve):
        return float(np.mean(A(p.values)))
    raise TypeError(f"expected Profile or GridCurve, got {type(p).__name__}")


@dataclass(frozen=True)
class MajorizationVerdict:
    holds: bool
    min_margin: float
    argmin_t: float
    t_grid: np.ndarray
    margins: np.ndarray


def majorizes(h: Profile, g: Profile, M: int = 1024, tol: float = 1e-12) -> MajorizationVerdict:
    """Partial-sum domination: integral of g over (0,t] <= same for h,
    for every t on the uniform M-grid; reports the minimal margin and
    where it occurs."""
    t_grid = np.arange(1, M + 1) / M
    margins = h.cumulative(t_grid) - g.cumulative(t_grid)
    k = int(np.argmin(margins))
    return MajorizationVerdict(
        holds=bool(margins[k] >= -tol),
        min_margin=float(margins[k]),
        argmin_t=float(t_grid[k]),
        t_grid=t_grid,
        margins=margins,
    )


def _hinge_integrals(p: Profile, c_grid: np.ndarray) -> np.ndarray:
    gaps = np.maximum(p.values[None, :] - c_grid[:, None], 0.0)
    return gaps @ p.widths


@dataclass(frozen=True)
class HlpEquivalenceReport:
    orlicz_dominated: bool  # all hinge integrals of g below those of h
    majorization_holds: bool
    witness_c: Optional[float]  # first c breaking the hinge comparison
    witness_t: Optional[float]  # argmin margin when majorization fails
    max_hinge_excess: float

    @property
    def agree(self) -> bool:
        return self.orlicz_dominated == self.majorization_holds


def hlp_equivalence_check(
    g: Profile,
    h: Profile,
    c_grid: Optional[np.ndarray] = None,
    M: int = 1024,
    tol: float = 1e-10,
) -> HlpEquivalenceReport:
    """Cross-check the two equivalent domination predicates for g against h:
    hinge integrals ordered for every c, and partial sums ordered for
    every t.  Disagreement beyond tolerance comes with a witness."""
    if c_grid is None:
        top = max(g.sup, h.sup)
        c_grid = np.linspace(0.0, top, HINGE_GRID_SIZE)
    c_grid = np.asarray(c_grid, dtype=float)
    excess = _hinge_integrals(g, c_grid) - _hinge_integrals(h, c_grid)
    bad = np.nonzero(excess > tol)[0]
    orlicz_dominated = bad.size == 0
    verdict = majorizes(h, g, M=M, tol=tol)
    return HlpEquivalenceReport(
        orlicz_dominated=orlicz_dominated,
        majorization_holds=verdict.holds,
        witness_c=float(c_grid[bad[0]]) if bad.size else None,
        witness_t=None if verdict.holds else verdict.argmin_t,
        max_hinge_excess=float(np.max(excess)),
    )


def _luxemburg(p: Profile, A: YoungFunction, rel_tol: float = 1e-10) -> float:
    if p.sup == 0.0:
        return 0.0

    def theta(lam: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.sum(A(p.values / lam) * p.widths))

    hi = max(p.sup, 1.0)
    for _ in range(200):
        if theta(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise BracketingError("Luxemburg bracket expansion failed upward")
    lo = hi / 2.0
    for _ in range(1200):
        if theta(lo) > 1.0:
            break
        hi = lo
        lo /= 2.0
        if lo < 1e-300:
            # A vanishes below the hinge threshold for all values: norm 0
            return 0.0
    else:
        raise BracketingError("Luxemburg bracket expansion failed downward")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if theta(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def ri_norm(p: Profile, X: RINorm) -> float:
    """Evaluate a rearrangement-invariant norm of a profile.

    Lp by exact piecewise quadrature (L-inf is the top value), the
    Lorentz lambda-norm integrates the profile against d(s^(1/p)), the
    Marcinkiewicz norm takes the exact sup of t^(1/p-1) * integral over
    (0,t] (attained at knots: on each piece that function is a sum of a
    decreasing and an increasing term), and the Orlicz norm is the
    Luxemburg functional located by bracketing bisection to 1e-10
    relative."""
    if X.kind == "lp":
        if math.isinf(X.param):
            return p.sup
        q = X.param
        return float(np.sum(p.values**q * p.widths) ** (1.0 / q))
    if X.kind == "lorentz":
        w = np.diff(p.knots ** (1.0 / X.param))
        return float(np.sum(p.values * w))
    if X.kind == "marcinkiewicz":
        alpha = 1.0 / X.param - 1.0
        knots = p.knots[1:]
        cum = np.cumsum(p.values * p.widths)
        return float(np.max(knots**alpha * cum))
    if X.kind == "orlicz":
        return _luxemburg(p, X.young)
    raise InvalidParameterError(f"unknown norm kind {X.kind!r}")


@dataclass(frozen=True)
class NormVerdict:
    label: str
    norm_g: float
    norm_h: float
    margin: float
    ok: bool


@dataclass(frozen=True)
class CalderonReport:
    precondition_holds: bool
    min_majorization_margin: float
    verdicts: tuple

    @property
    def all_ok(self) -> bool:
        return self.precondition_holds and all(v.ok for v in self.verdicts)


def calderon_check(
    g: Profile,
    h: Profile,
    norms: Sequence[RINorm] = DEFAULT_NORM_FAMILY,
    M: int = 1024,
    tol: float = 1e-9,
) -> CalderonReport:
    """Norm domination under majorization: given g majorized by h, every
    norm in the family must order the pair the same way.  A violated
    precondition is reported, never silently skipped."""
    verdict = majorizes(h, g, M=M)
    results = []
    for X in norms:
        ng = ri_norm(g, X)
        nh = ri_norm(h, X)
        margin = nh - ng
        results.append(
            NormVerdict(X.label, ng, nh, margin, bool(margin >= -tol * (1.0 + abs(nh))))
        )
    return CalderonReport(
        precondition_holds=verdict.holds,
        min_majorization_margin=verdict.min_margin,
        verdicts=tuple(results),
    )
