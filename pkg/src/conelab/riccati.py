"""Riccati form of the stability criterion: the log-derivative function
L(s) = t(1-t^2) g'/g - (n-2) t^2 + (k-1) at s = t^2, its quadratic ODE

    2 s (1-s) L' + L^2 + (n s - k) L + P(s) = 0,
    P(s) = (n - 2k) s + ahat s (1-s) + (k-1),        ahat = alpha (alpha+n-2),

and the two-piece comparison barriers that propagate positivity of L up to
the free-boundary root for the subsolution exponent alpha = 4 - n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from conelab.cone import ConeParams, find_root, profile_params
from conelab.errors import (
    IntegrationFailure,
    PoleEncounteredError,
    VariantUnavailableError,
)
from conelab.specfun import DEFAULT_CONTROL, SeriesControl, hyp2f1, hyp2f1_deriv

__all__ = [
    "RiccatiMode",
    "RiccatiTrace",
    "BarrierVariant",
    "BarrierSpec",
    "BarrierReport",
    "L_eval",
    "P_poly",
    "p_poly_roots_in_unit",
    "barrier_phi",
    "linear_root_relation",
    "verify_barrier",
    "check_4_minus_n",
]

ODE_LAUNCH_S = 1e-3  # series launch interval for the singular s = 0 end
ODE_LAUNCH_TERMS = 6
ODE_S_MAX = 1.0 - 1e-6  # the s = 1 end is singular again; Direct rules there


class RiccatiMode(Enum):
    DIRECT = "Direct"
    ODE_INTEGRATE = "OdeIntegrate"
    CROSS_CHECK = "CrossCheck"


@dataclass(frozen=True)
class RiccatiTrace:
    alpha_hat: float
    grid: Tuple[float, ...]
    values_direct: Tuple[float, ...]
    values_ode: Tuple[float, ...]
    max_discrepancy: float


def alpha_hat(p: ConeParams, alpha: float) -> float:
    return alpha * (alpha + p.n - 2.0)


def P_poly(p: ConeParams, ahat: float, s: float) -> float:
    """P(s) = (n-2k) s + ahat s (1-s) + (k-1), evaluated exactly."""
    return (p.n - 2.0 * p.k) * s + ahat * s * (1.0 - s) + (p.k - 1.0)


def p_poly_roots_in_unit(p: ConeParams, ahat: float) -> Tuple[float, ...]:
    """Roots of P in the open interval (0, 1), sorted; 0, 1 or 2 of them."""
    # -ahat s^2 + (n - 2k + ahat) s + (k-1) = 0
    a2 = -ahat
    a1 = p.n - 2.0 * p.k + ahat
    a0 = p.k - 1.0
    if a2 == 0.0:
        roots = [] if a1 == 0.0 else [-a0 / a1]
    else:
        disc = a1 * a1 - 4.0 * a2 * a0
        if disc < 0.0:
            roots = []
        else:
            sq = math.sqrt(disc)
            # numerically stable pairing of the quadratic roots
            qq = -0.5 * (a1 + math.copysign(sq, a1))
            roots = sorted({qq / a2 if qq != 0.0 else 0.0,
                            a0 / qq if qq != 0.0 else 0.0})
    return tuple(r for r in roots if 0.0 < r < 1.0)


def L_direct(p: ConeParams, alpha: float, s: float,
             ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """L(s) from the hypergeometric profile: 2s(1-s) F'/F - (n-2)s + (k-1)."""
    if s == 0.0:
        return float(p.k - 1)
    hp = profile_params(p, alpha)
    F = hyp2f1(hp, s, ctrl).value
    if not F > 0.0:
        raise PoleEncounteredError(
            f"profile vanishes before s={s} for alpha={alpha}, (n,k)=({p.n},{p.k})")
    Fp = hyp2f1_deriv(hp, s, 1, ctrl).value
    return 2.0 * s * (1.0 - s) * Fp / F - (p.n - 2.0) * s + (p.k - 1.0)


def _launch_series(p: ConeParams, ahat: float) -> list:
    """Power-series coefficients of L at the singular point s = 0.

    Matching orders in the ODE gives l_0 = k-1, and for m >= 1
        l_m (2m + k - 2) = (2(m-1) - n) l_{m-1}
                           - sum_{i=1}^{m-1} l_i l_{m-i} - P_m
    with P_1 = n - 2k + ahat, P_2 = -ahat; the denominator never vanishes.
    """
    n, k = float(p.n), float(p.k)
    pcoef = {1: n - 2.0 * k + ahat, 2: -ahat}
    ell = [k - 1.0]
    for m in range(1, ODE_LAUNCH_TERMS):
        rhs = (2.0 * (m - 1) - n) * ell[m - 1]
        rhs -= sum(ell[i] * ell[m - i] for i in range(1, m))
        rhs -= pcoef.get(m, 0.0)
        ell.append(rhs / (2.0 * m + k - 2.0))
    return ell


def _launch_eval(ell: list, s: float) -> float:
    out = 0.0
    for c in reversed(ell):
        out = out * s + c
    return out


def _L_ode_solution(p: ConeParams, ahat: float, s_end: float):
    """Integrate the Riccati ODE from the series launch to s_end."""
    n, k = float(p.n), float(p.k)
    s0 = ODE_LAUNCH_S
    l0 = _launch_eval(_launch_series(p, ahat), s0)

    def rhs(s, y):
        L = y[0]
        P = (n - 2.0 * k) * s + ahat * s * (1.0 - s) + (k - 1.0)
        return [-(L * L + (n * s - k) * L + P) / (2.0 * s * (1.0 - s))]

    sol = solve_ivp(rhs, (s0, s_end), [l0], method="DOP853",
                    rtol=1e-11, atol=1e-13, dense_output=True)
    if not sol.success:
        raise IntegrationFailure(
            f"Riccati integration failed for (n,k)=({p.n},{p.k}), ahat={ahat}: {sol.message}")
    return sol


def L_ode(p: ConeParams, alpha: float, s: float) -> float:
    """L(s) by integrating the Riccati ODE; capped below the s = 1 pole."""
    ahat_ = alpha_hat(p, alpha)
    s_end = min(s, ODE_S_MAX)
    if s_end <= ODE_LAUNCH_S:
        return _launch_eval(_launch_series(p, ahat_), s_end)
    return float(_L_ode_solution(p, ahat_, s_end).sol(s_end)[0])


def L_eval(p: ConeParams, alpha: float, s: float,
           mode: RiccatiMode = RiccatiMode.DIRECT,
           ctrl: SeriesControl = DEFAULT_CONTROL,
           grid_points: int = 33):
    """Evaluate L at s (Direct or OdeIntegrate), or return a RiccatiTrace
    comparing both along a grid in CrossCheck mode."""
    if not s < 1.0:
        raise ValueError("s must be below 1")
    if mode is RiccatiMode.DIRECT:
        return L_direct(p, alpha, s, ctrl)
    if mode is RiccatiMode.ODE_INTEGRATE:
        return L_ode(p, alpha, s)
    ahat_ = alpha_hat(p, alpha)
    s_end = min(s, ODE_S_MAX)
    grid = np.linspace(0.0, s_end, grid_points)
    sol = _L_ode_solution(p, ahat_, s_end)
    launch = _launch_series(p, ahat_)
    direct = [L_direct(p, alpha, g, ctrl) for g in grid]
    ode = [float(p.k - 1)]
    for g in grid[1:]:
        if g <= ODE_LAUNCH_S:
            ode.append(_launch_eval(launch, g))
        else:
            ode.append(float(sol.sol(g)[0]))
    disc = max(abs(a - b) for a, b in zip(direct, ode))
    return RiccatiTrace(alpha_hat=ahat_, grid=tuple(grid),
                        values_direct=tuple(direct), values_ode=tuple(ode),
                        max_discrepancy=disc)


# ---------------------------------------------------------------------------
# barriers for alpha = 4 - n, where ahat = 2(4-n) and
# P(s) = (k-1) + (8-n-2k) s + 2(n-4) s^2


class BarrierVariant(Enum):
    LINEAR_ONLY = "LinearOnly"
    LARGE_D = "LargeD"
    SMALL_D = "SmallD"


@dataclass(frozen=True)
class BarrierSpec:
    variant: BarrierVariant
    s_star: float
    q_params: Tuple[float, ...]  # Q(s) = q0 (1-s)/s
    roots: Optional[Tuple[float, float]]  # (r_minus, r_plus)
    delta: Optional[float]
    A: float


@dataclass(frozen=True)
class BarrierReport:
    spec: BarrierSpec
    max_residual_linear: float
    max_residual_curved: float
    jump_left: float
    jump_right: float
    jump_decreasing: bool
    min_L_minus_phi: float
    L_at_s_star: float
    passed: bool


def _P4(p: ConeParams, s: float) -> float:
    """P(s) specialized to alpha = 4-n."""
    return (p.k - 1.0) + (8.0 - p.n - 2.0 * p.k) * s + 2.0 * (p.n - 4.0) * s * s


def barrier_phi(p: ConeParams) -> Tuple[BarrierSpec, Callable[[float], float]]:
    """Two-piece Riccati subsolution for alpha = 4-n.

    The linear piece (k-1) - (n-4) s lives on [0, k/n); on [k/n, s_star]
    the barrier solves the majorized terminal equation
    2s(1-s) phi' + phi^2 + B phi + C = 0 with phi(s_star) = 0, whose
    closed form through the roots r+- of r^2 + B r + C is

        phi = r+ r- (Q^(sqrt(D)/2) - 1) / (r+ Q^(sqrt(D)/2) - r-).

    The large-d variant (d >= 12) uses B = sqrt(2d+1)-1, C = B-1; the
    small-d variant (6 <= d <= 11) uses the refined terminal point, where
    B = n s_star - k = A + 1/2 exactly and C = P(s_star).
    """
    n, k, d = p.n, p.k, p.d
    A = math.sqrt(2.0 * d + 1.0) - 1.0
    if d >= 12:
        variant = BarrierVariant.LARGE_D
        s_star = 1.0 - (d + 1.0 - math.sqrt(2.0 * d + 1.0)) / n
        B = A
        C = A - 1.0
    elif d >= 6:
        variant = BarrierVariant.SMALL_D
        s_star = 1.0 - (2.0 * d + 1.0 - 2.0 * math.sqrt(2.0 * d + 1.0)) / (2.0 * n)
        B = n * s_star - k  # equals A + 1/2
        C = _P4(p, s_star)
    else:
        raise VariantUnavailableError(
            f"only the linear barrier exists for d={d} (need d >= 6)")
    delta = B * B - 4.0 * C
    if variant is BarrierVariant.SMALL_D and delta <= 1.0:
        raise VariantUnavailableError(
            f"discriminant {delta} <= 1 at (n,k)=({n},{k}); construction inapplicable")
    sq = math.sqrt(delta)
    r_plus = 0.5 * (-B + sq)
    r_minus = 0.5 * (-B - sq)
    q0 = s_star / (1.0 - s_star)
    expo = 0.5 * sq

    def phi(s: float) -> float:
        if s < 0.0 or s > s_star + 1e-15:
            raise ValueError(f"barrier defined on [0, s_star={s_star}], got s={s}")
        if s < k / n:
            return (k - 1.0) - (n - 4.0) * s
        qs = (q0 * (1.0 - s) / s) ** expo
        return r_plus * r_minus * (qs - 1.0) / (r_plus * qs - r_minus)

    spec = BarrierSpec(variant=variant, s_star=s_star, q_params=(q0,),
                       roots=(r_minus, r_plus), delta=delta, A=A)
    return spec, phi


def linear_root_relation(p: ConeParams) -> Tuple[float, float, bool]:
    """d in {4, 5}: the linear subsolution (k-1) - (n-4)s is positive up to
    its own zero; the refined terminal point must sit below that zero.

    Returns (s_star_refined, linear_zero, ok).
    """
    d = p.d
    if d not in (4, 5):
        raise VariantUnavailableError("linear root relation applies to d in {4, 5}")
    s_star = 1.0 - (2.0 * d + 1.0 - 2.0 * math.sqrt(2.0 * d + 1.0)) / (2.0 * p.n)
    linear_zero = (p.k - 1.0) / (p.n - 4.0)
    return s_star, linear_zero, s_star <= linear_zero


def verify_barrier(p: ConeParams, grid_size: int = 512,
                   ctrl: SeriesControl = DEFAULT_CONTROL) -> BarrierReport:
    """Machine verification of the barrier properties at alpha = 4-n.

    Checks, on Chebyshev grids per smooth piece: the subsolution residual
    R[phi] < 0, the decreasing jump at k/n, the comparison L >= phi, and
    the payoff L(s_star) > 0.
    """
    spec, phi = barrier_phi(p)
    n, k = float(p.n), float(p.k)
    s_star = spec.s_star
    B_const = -(spec.roots[0] + spec.roots[1])
    C_const = spec.roots[0] * spec.roots[1]

    def cheb(lo: float, hi: float, m: int) -> np.ndarray:
        j = np.arange(m)
        x = np.cos(np.pi * j / (m - 1))
        return lo + (hi - lo) * 0.5 * (1.0 - x)

    alpha = 4.0 - p.n

    # The residual vanishes identically at s = 0, and at s = s_star in the
    # refined variant (terminal condition), so both grids stay strictly
    # inside those endpoints.
    # linear piece: R[phi] telescopes to 2 s (k - n + 4) exactly
    lin = cheb(k / n * 1e-9, k / n * (1.0 - 1e-12), grid_size)
    res_lin = 2.0 * lin * (k - n + 4.0)
    # curved piece: R[phi] = (ns - k - B) phi + (P(s) - C)
    cur = cheb(k / n, s_star - (s_star - k / n) * 1e-9, grid_size)
    phi_cur = np.array([phi(s) for s in cur])
    res_cur = (n * cur - k - B_const) * phi_cur + \
        np.array([_P4(p, s) for s in cur]) - C_const

    jump_left = 4.0 * k / n - 1.0
    jump_right = phi(k / n)

    sample = np.concatenate([lin[:: max(1, grid_size // 64)],
                             cur[:: max(1, grid_size // 64)]])
    l_minus_phi = min(L_direct(p, alpha, float(s), ctrl) - phi(float(s))
                      for s in sample)
    L_star = L_direct(p, alpha, s_star, ctrl)

    passed = (float(res_lin.max()) < 0.0 and float(res_cur.max()) < 0.0
              and jump_left > jump_right
              and l_minus_phi >= -1e-9
              and L_star > 0.0)
    return BarrierReport(spec=spec,
                         max_residual_linear=float(res_lin.max()),
                         max_residual_curved=float(res_cur.max()),
                         jump_left=jump_left, jump_right=jump_right,
                         jump_decreasing=jump_left > jump_right,
                         min_L_minus_phi=float(l_minus_phi),
                         L_at_s_star=float(L_star), passed=passed)


def check_4_minus_n(p: ConeParams,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> Tuple[bool, float]:
    """Is 4-n an admissible exponent?  True iff L(s_{n,k}) > 0 at alpha = 4-n;
    the margin returned is that L value."""
    r = find_root(p, ctrl)
    margin = L_direct(p, 4.0 - p.n, r.s_nk, ctrl)
    return margin > 0.0, margin
