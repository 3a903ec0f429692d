"""Cone geometry for the invariant one-phase family: profile functions,
free-boundary root, normalization, boundary mean curvature, the strict
stability criterion and the admissible homogeneity interval.

Profiles are hypergeometric in s = t^2: the degree-alpha harmonic profile
is 2F1((n+alpha-2)/2, -alpha/2; k/2; t^2), and the solution profile is its
alpha = 1 member.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from conelab.errors import BracketFailure, PoleEncounteredError
from conelab.specfun import (
    DEFAULT_CONTROL,
    HypParams,
    SeriesControl,
    hyp2f1,
    hyp2f1_deriv,
)

__all__ = [
    "ConeParams",
    "RootResult",
    "Verdict",
    "StabilityReport",
    "profile_params",
    "profile_g",
    "profile_f",
    "profile_g_dt",
    "cubic_bound",
    "find_root",
    "normalization_c",
    "boundary_rhs",
    "stability_margin",
    "verdict",
    "admissible_interval",
    "eval_homogeneous",
]

MARGIN_TOL = 1e-9  # borderline band on the criterion margin


@dataclass(frozen=True)
class ConeParams:
    """Dimension split (n, k) indexing an invariant cone; d = n - k."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n >= 3 required, got n={self.n}")
        if not 1 <= self.k <= self.n - 2:
            raise ValueError(f"k must lie in [1, n-2], got (n,k)=({self.n},{self.k})")

    @property
    def d(self) -> int:
        return self.n - self.k


@dataclass(frozen=True)
class RootResult:
    """Free-boundary root of the solution profile, with provenance."""

    t_nk: float
    s_nk: float
    bracket: Tuple[float, float]
    residual: float


class Verdict(Enum):
    UNSTABLE = "unstable"
    BORDERLINE_STABLE = "borderline_stable"
    STRICTLY_STABLE = "strictly_stable"


@dataclass(frozen=True)
class StabilityReport:
    t_nk: float
    c_nk: float
    link_H: float
    lhs: float
    rhs: float
    margin: float
    verdict: Verdict
    admissible: Optional[Tuple[float, float]]


def profile_params(p: ConeParams, alpha: float) -> HypParams:
    """Hypergeometric parameters of the degree-alpha harmonic profile."""
    return HypParams((p.n + alpha - 2.0) / 2.0, -alpha / 2.0, p.k / 2.0)


def _f_and_deriv(p: ConeParams, alpha: float, s: float,
                 ctrl: SeriesControl) -> Tuple[float, float]:
    """(F(s), dF/ds) for the profile parameters at s = t^2."""
    hp = profile_params(p, alpha)
    F = hyp2f1(hp, s, ctrl).value
    Fp = hyp2f1_deriv(hp, s, 1, ctrl).value
    return F, Fp


def profile_g(p: ConeParams, alpha: float, t: float,
              ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """g_{n,k,alpha}(t); equals 1 at t = 0 for every alpha."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    return hyp2f1(profile_params(p, alpha), t * t, ctrl).value


def profile_f(p: ConeParams, t: float,
              ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Solution profile f_{n,k}(t) = g_{n,k,1}(t)."""
    return profile_g(p, 1.0, t, ctrl)


def profile_g_dt(p: ConeParams, alpha: float, t: float,
                 ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """d/dt of the degree-alpha profile: 2 t F'(t^2)."""
    hp = profile_params(p, alpha)
    return 2.0 * t * hyp2f1_deriv(hp, t * t, 1, ctrl).value


def cubic_bound(p: ConeParams, t: float) -> float:
    """Cubic-in-s upper bound for f_{n,k}(t); fixes the root bracket."""
    n, k = p.n, p.k
    s = t * t
    return (1.0
            - (n - 1.0) / (2.0 * k) * s
            - (n * n - 1.0) / (8.0 * k * (k + 2.0)) * s * s
            - (n * n - 1.0) * (n + 3.0) / (16.0 * k * (k + 2.0) * (k + 4.0)) * s ** 3)


def _cubic_root_in_s(p: ConeParams) -> Optional[float]:
    """Root of the cubic bound in s on (0, 1], or None if the bound stays
    positive there."""
    lo, hi = 0.0, 1.0
    f = lambda s: cubic_bound(p, math.sqrt(s))
    if f(hi) > 0.0:
        return None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


_S_CAP = 1.0 - 2e-9  # largest admitted s; t stays below 1 - 1e-9


def find_root(p: ConeParams, ctrl: SeriesControl = DEFAULT_CONTROL,
              scan_points: int = 64) -> RootResult:
    """Locate the free-boundary root t_{n,k} of f_{n,k}.

    The upper bracket end comes from the quadratic truncation
    s <= 2k/(n-1), tightened by the cubic bound when that has a root below
    1; the lower end by a descending scan.  Bisection to 1e-13 in s is
    followed by one Newton polish using the shifted-parameter derivative.
    """
    n, k = p.n, p.k
    s_up = min(2.0 * k / (n - 1.0), _S_CAP)
    s_cubic = _cubic_root_in_s(p)
    if s_cubic is not None:
        s_up = min(s_up, s_cubic)

    def F(s: float) -> float:
        return hyp2f1(profile_params(p, 1.0), s, ctrl).value

    # descending scan: f -> -inf at 1 and f(0) = 1, so a sign change exists
    grid = [s_up * (1.0 - j / scan_points) for j in range(scan_points + 1)]
    s_lo = s_hi = None
    prev = s_up
    v_hi = F(s_up)
    if not math.isfinite(v_hi):
        v_hi = -math.inf  # the profile diverges to -inf at s = 1
    if v_hi > 0.0:
        raise BracketFailure(
            f"profile positive at upper bracket s={s_up} for (n,k)=({n},{k})")
    for s in grid[1:]:
        v = F(s)
        if math.isfinite(v) and v > 0.0:
            s_lo, s_hi = s, prev
            break
        prev = s
    if s_lo is None:
        raise BracketFailure(f"no sign change found for (n,k)=({n},{k})")

    bracket = (math.sqrt(s_lo), math.sqrt(s_hi))
    lo, hi = s_lo, s_hi
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if F(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    s_root = 0.5 * (lo + hi)

    # one Newton polish; keep it only if it stays inside the bisection bracket
    val, slope = _f_and_deriv(p, 1.0, s_root, ctrl)
    if slope != 0.0:
        s_new = s_root - val / slope
        if lo - 1e-12 <= s_new <= hi + 1e-12:
            s_root = s_new

    t_root = math.sqrt(s_root)
    residual = abs(F(s_root))
    return RootResult(t_nk=t_root, s_nk=s_root, bracket=bracket, residual=residual)


def normalization_c(p: ConeParams, r: RootResult,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Gradient normalization c_{n,k} = 1 / (sqrt(1-t^2) |f'(t)|) at the root."""
    fp = profile_g_dt(p, 1.0, r.t_nk, ctrl)
    return 1.0 / (math.sqrt(1.0 - r.s_nk) * abs(fp))


def boundary_rhs(p: ConeParams, r: RootResult) -> Tuple[float, float]:
    """(rho H, criterion right side) at the free boundary.

    rho H = ((n-2) t - (k-1)/t) / sqrt(1-t^2); the criterion side removes
    one square root: rhs = ((n-2) t - (k-1)/t) / (1-t^2).
    """
    n, k = p.n, p.k
    t = r.t_nk
    num = (n - 2.0) * t - (k - 1.0) / t
    return num / math.sqrt(1.0 - r.s_nk), num / (1.0 - r.s_nk)


def stability_margin(p: ConeParams, alpha: float, r: RootResult,
                     ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """g'_alpha/g_alpha - rhs at the root; positive exactly on the
    admissible interval."""
    s = r.s_nk
    F, Fp = _f_and_deriv(p, alpha, s, ctrl)
    if F <= 0.0:
        raise PoleEncounteredError(
            f"profile g vanishes before the root for alpha={alpha}, (n,k)=({p.n},{p.k})")
    _, rhs = boundary_rhs(p, r)
    return 2.0 * r.t_nk * Fp / F - rhs


def admissible_interval(p: ConeParams, r: Optional[RootResult] = None,
                        ctrl: SeriesControl = DEFAULT_CONTROL,
                        alpha_tol: float = 1e-10) -> Optional[Tuple[float, float]]:
    """Endpoints of the admissible homogeneity interval, or None when empty.

    The margin is symmetric about (2-n)/2 and decreases away from it, so
    one bisection on ((2-n)/2, 0) locates the upper endpoint and the lower
    endpoint is its mirror image.
    """
    if r is None:
        r = find_root(p, ctrl)
    mid = (2.0 - p.n) / 2.0
    if stability_margin(p, mid, r, ctrl) <= 0.0:
        return None
    lo, hi = mid, -1e-12
    if stability_margin(p, hi, r, ctrl) >= 0.0:
        return (2.0 - p.n - hi, hi)
    while hi - lo > alpha_tol:
        m = 0.5 * (lo + hi)
        if stability_margin(p, m, r, ctrl) > 0.0:
            lo = m
        else:
            hi = m
    alpha_hi = 0.5 * (lo + hi)
    return (2.0 - p.n - alpha_hi, alpha_hi)


def verdict(p: ConeParams, ctrl: SeriesControl = DEFAULT_CONTROL) -> StabilityReport:
    """Full stability report; the criterion is evaluated at alpha = (2-n)/2."""
    r = find_root(p, ctrl)
    c_nk = normalization_c(p, r, ctrl)
    link_H, rhs = boundary_rhs(p, r)
    margin = stability_margin(p, (2.0 - p.n) / 2.0, r, ctrl)
    if margin > MARGIN_TOL:
        v = Verdict.STRICTLY_STABLE
        adm = admissible_interval(p, r, ctrl)
    elif margin < -MARGIN_TOL:
        v = Verdict.UNSTABLE
        adm = None
    else:
        v = Verdict.BORDERLINE_STABLE
        adm = None
    return StabilityReport(t_nk=r.t_nk, c_nk=c_nk, link_H=link_H,
                           lhs=margin + rhs, rhs=rhs, margin=margin,
                           verdict=v, admissible=adm)


def eval_homogeneous(p: ConeParams, alpha: float, scale: float, rho: float,
                     t: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """scale * rho^alpha * g_{n,k,alpha}(t); exact under dilation."""
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    return scale * rho ** alpha * profile_g(p, alpha, t, ctrl)
