"""Robin eigenvalue problem on the spherical link of the cone.

For a separated mode (p, q) the radial factor solves

    (1-t^2) Phi'' + ((k-1)/t - (n-1) t) Phi'
        + (lambda - p(p+n-k-2)/(1-t^2) - q(q+k-2)/t^2) Phi = 0

with the regular Frobenius branch Phi ~ t^q at the axis and the Robin
matching Phi'/Phi = ((n-2) t - (k-1)/t) / (1-t^2) at the free-boundary
root.  Eigenvalues are located by bisection in lambda on the bivariate
predicate (interior zero count, sign of the log-derivative mismatch); a
symmetric finite-difference discretization provides an independent oracle
for the first eigenvalue.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from conelab._backend import robin_shoot
from conelab.cone import ConeParams, RootResult, boundary_rhs, find_root
from conelab.errors import BracketExhausted, IntegrationFailure
from conelab.specfun import DEFAULT_CONTROL, SeriesControl

__all__ = [
    "Mode",
    "ShootingConfig",
    "EigenResult",
    "ScanRow",
    "ScanReport",
    "shoot",
    "find_eigenvalue",
    "indicial_roots",
    "fd_oracle_lambda1",
    "family_scan",
]


@dataclass(frozen=True)
class Mode:
    """Spherical harmonic degrees on the two sphere factors."""

    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("mode degrees must be nonnegative")


@dataclass(frozen=True)
class ShootingConfig:
    t_launch: float = 1e-6
    ode_tol: float = 1e-11
    lambda_bracket: Optional[Tuple[float, float]] = None
    max_bisections: int = 200

    def __post_init__(self):
        if not 0.0 < self.t_launch <= 1e-4:
            raise ValueError("t_launch must lie in (0, 1e-4]")
        if self.ode_tol > 1e-10:
            raise ValueError("ode_tol must be at most 1e-10")


DEFAULT_SHOOTING = ShootingConfig()


@dataclass(frozen=True)
class EigenResult:
    lam: float
    zeros_interior: int
    gamma_minus: Optional[float]
    gamma_plus: Optional[float]
    bc_residual: float


def indicial_roots(lam: float, n: int) -> Optional[Tuple[float, float]]:
    """(gamma_minus, gamma_plus) solving gamma(gamma+n-2) = lam, or None
    when the radicand ((n-2)/2)^2 + lam is negative (complex pair)."""
    half = (n - 2.0) / 2.0
    rad = half * half + lam
    if rad < 0.0:
        return None
    sq = math.sqrt(rad)
    return (-half - sq, -half + sq)


def _mode_potentials(p_: ConeParams, mode: Mode) -> Tuple[float, float]:
    P2 = mode.p * (mode.p + p_.n - p_.k - 2.0)
    Q2 = mode.q * (mode.q + p_.k - 2.0)
    return P2, Q2


def _frobenius_launch(p_: ConeParams, mode: Mode, lam: float,
                      tl: float) -> Tuple[float, float]:
    """Fourth-order series launch of the regular branch Phi ~ t^q.

    Substituting Phi = t^q (1 + c2 t^2 + c4 t^4) into the mode ODE gives
        c2 = (q(q+n-2) + P2 - lam) / (2 (2q + k)),
        c4 = (c2 ((q+2)(q+n) - lam + P2) + P2) / (4 (2q + k + 2)).
    """
    n, k, q = p_.n, p_.k, mode.q
    P2, _ = _mode_potentials(p_, mode)
    c2 = (q * (q + n - 2.0) + P2 - lam) / (2.0 * (2.0 * q + k))
    c4 = (c2 * ((q + 2.0) * (q + n) - lam + P2) + P2) / (4.0 * (2.0 * q + k + 2.0))
    poly = 1.0 + c2 * tl * tl + c4 * tl ** 4
    dpoly = 2.0 * c2 * tl + 4.0 * c4 * tl ** 3
    if q == 0:
        return poly, dpoly
    u = tl ** q * poly
    v = q * tl ** (q - 1) * poly + tl ** q * dpoly
    return u, v


def shoot(pars: ConeParams, lam: float, mode: Mode = Mode(),
          cfg: ShootingConfig = DEFAULT_SHOOTING,
          root: Optional[RootResult] = None) -> Tuple[float, int]:
    """Integrate the mode ODE to the root; return (Phi'/Phi there, number
    of interior sign changes of Phi).  The log-derivative is +-inf when the
    shot lands exactly on a zero."""
    if root is None:
        root = find_root(pars)
    P2, Q2 = _mode_potentials(pars, mode)
    u0, v0 = _frobenius_launch(pars, mode, lam, cfg.t_launch)
    # resolve the local oscillation scale so step-wise sign counting is exact
    max_step = min(0.25 / math.sqrt(1.0 + abs(lam)), (root.t_nk - cfg.t_launch) / 16.0)
    u, v, zeros, ok = robin_shoot(u0, v0, cfg.t_launch, root.t_nk,
                                  float(pars.n), float(pars.k), lam, P2, Q2,
                                  cfg.ode_tol, 1e-300, max_step, 2_000_000)
    if not ok:
        raise IntegrationFailure(
            f"shooting step collapse at (n,k)=({pars.n},{pars.k}), lambda={lam}")
    if u == 0.0:
        return math.copysign(math.inf, v), zeros
    return v / u, zeros


def find_eigenvalue(pars: ConeParams, mode: Mode = Mode(), index: int = 0,
                    cfg: ShootingConfig = DEFAULT_SHOOTING,
                    root: Optional[RootResult] = None,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> EigenResult:
    """Locate the index-th eigenvalue of the mode (index 0 = lowest).

    Bisection on the lexicographic predicate: lambda is below the target
    when the shot has fewer than `index` interior zeros, or exactly
    `index` with the log-derivative mismatch still positive.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    if root is None:
        root = find_root(pars, ctrl)
    _, rhs_bc = boundary_rhs(pars, root)

    def mismatch(lam: float) -> Tuple[float, int]:
        d, z = shoot(pars, lam, mode, cfg, root)
        return d - rhs_bc, z

    def below(lam: float) -> bool:
        dm, z = mismatch(lam)
        return z < index or (z == index and dm > 0.0)

    if cfg.lambda_bracket is not None:
        lo, hi = cfg.lambda_bracket
    else:
        lo, hi = -float((pars.n - 2) ** 2) - 1.0, 0.0
    widenings = 0
    while not below(lo):
        if widenings >= 2:
            raise BracketExhausted(
                f"no eigenvalue bracket below lambda={lo} for (n,k)=({pars.n},{pars.k})")
        lo -= 4.0 * (hi - lo) + 10.0
        widenings += 1
    widenings = 0
    while below(hi):
        if widenings >= 2:
            raise BracketExhausted(
                f"no eigenvalue bracket above lambda={hi} for (n,k)=({pars.n},{pars.k})")
        hi += 4.0 * (hi - lo) + 10.0 * (index + 1.0)
        widenings += 1

    iters = 0
    while hi - lo > 1e-13 * max(1.0, abs(lo), abs(hi)) and iters < cfg.max_bisections:
        mid = 0.5 * (lo + hi)
        if below(mid):
            lo = mid
        else:
            hi = mid
        iters += 1
    lam = 0.5 * (lo + hi)
    dm, zeros = mismatch(lam)
    # secant polish on the smooth mismatch branch when bisection roundoff
    # left a visible boundary residual
    if abs(dm) > 1e-10 and math.isfinite(dm):
        lam2 = lam + 1e-9 * max(1.0, abs(lam))
        dm2, z2 = mismatch(lam2)
        if math.isfinite(dm2) and dm2 != dm and z2 == zeros:
            lam3 = lam - dm * (lam2 - lam) / (dm2 - dm)
            if lo - 1e-6 <= lam3 <= hi + 1e-6:
                dm3, z3 = mismatch(lam3)
                if abs(dm3) < abs(dm) and z3 == zeros:
                    lam, dm, zeros = lam3, dm3, z3
    roots_pm = indicial_roots(lam, pars.n)
    gm, gp = (roots_pm if roots_pm is not None else (None, None))
    return EigenResult(lam=lam, zeros_interior=zeros, gamma_minus=gm,
                       gamma_plus=gp, bc_residual=abs(dm))


def _link_weight(pars: ConeParams, t: np.ndarray) -> np.ndarray:
    """Sturm-Liouville weight p(t) = t^(k-1) (1-t^2)^((n-k)/2)."""
    return t ** (pars.k - 1) * (1.0 - t * t) ** ((pars.n - pars.k) / 2.0)


def fd_oracle_lambda1(pars: ConeParams, mode: Mode = Mode(),
                      grid_n: int = 2000,
                      root: Optional[RootResult] = None) -> float:
    """First eigenvalue from a symmetric tridiagonal finite-volume
    discretization of the weighted Sturm-Liouville form; independent of
    the shooting code path.

    Natural (weighted-Neumann) condition at the axis for q = 0, Dirichlet
    for q > 0 (the regular branch vanishes there); Robin condition at the
    root enters through the boundary work term rhs * p(t0).
    """
    if grid_n < 200:
        raise ValueError("grid_n must be at least 200")
    if root is None:
        root = find_root(pars)
    t0 = root.t_nk
    _, rhs_bc = boundary_rhs(pars, root)
    P2, Q2 = _mode_potentials(pars, mode)
    n_nodes = grid_n + 1
    h = t0 / grid_n
    t = np.linspace(0.0, t0, n_nodes)
    t_half = t[:-1] + 0.5 * h
    p_half = _link_weight(pars, t_half)

    def density(x):
        return _link_weight(pars, x) / (1.0 - x * x)

    def potential(x):
        return (P2 / (1.0 - x * x) + Q2 / (x * x)) * density(x)

    if mode.q > 0:
        # Dirichlet at the axis: drop node 0
        tt = t[1:]
        diag = np.empty(grid_n)
        diag[:-1] = (p_half[:-1] + p_half[1:]) / h
        diag[-1] = p_half[-1] / h - rhs_bc * _link_weight(pars, np.array([t0]))[0]
        off = -p_half[1:] / h
        mass = np.empty(grid_n)
        mass[:-1] = density(tt[:-1]) * h
        mass[-1] = density(t0) * 0.5 * h
        diag = diag + potential(tt) * np.concatenate([np.full(grid_n - 1, h), [0.5 * h]])
    else:
        diag = np.empty(n_nodes)
        diag[0] = p_half[0] / h
        diag[1:-1] = (p_half[:-1] + p_half[1:]) / h
        diag[-1] = p_half[-1] / h - rhs_bc * _link_weight(pars, np.array([t0]))[0]
        off = -p_half / h
        mass = np.empty(n_nodes)
        # half cells at both ends; cell-midpoint density for the axis cell,
        # where the weight may vanish
        mass[0] = density(0.25 * h) * 0.5 * h
        mass[1:-1] = density(t[1:-1]) * h
        mass[-1] = density(t0) * 0.5 * h
        if P2 != 0.0:
            pot = np.empty(n_nodes)
            pot[0] = potential(0.25 * h) * 0.5 * h
            pot[1:-1] = potential(t[1:-1]) * h
            pot[-1] = potential(t0) * 0.5 * h
            diag = diag + pot

    inv_sqrt_m = 1.0 / np.sqrt(mass)
    d_sym = diag * inv_sqrt_m * inv_sqrt_m
    e_sym = off * inv_sqrt_m[:-1] * inv_sqrt_m[1:]
    vals = eigh_tridiagonal(d_sym, e_sym, select="i", select_range=(0, 0),
                            eigvals_only=True)
    return float(vals[0])


@dataclass(frozen=True)
class ScanRow:
    n: int
    k: int
    t_nk: float
    lambda1: float
    gamma_plus: Optional[float]
    gamma_minus: Optional[float]


@dataclass(frozen=True)
class ScanReport:
    rows: Tuple[ScanRow, ...]
    flags: Dict[str, bool]
    notes: Tuple[str, ...]


def _thread_count() -> int:
    env = os.environ.get("CONELAB_THREADS", "")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _scan_cell(args) -> ScanRow:
    n, k, cfg = args
    pars = ConeParams(n, k)
    root = find_root(pars)
    res = find_eigenvalue(pars, Mode(), 0, cfg, root)
    return ScanRow(n=n, k=k, t_nk=root.t_nk, lambda1=res.lam,
                   gamma_plus=res.gamma_plus, gamma_minus=res.gamma_minus)


def family_scan(n_range: Tuple[int, int],
                cfg: ShootingConfig = DEFAULT_SHOOTING) -> ScanReport:
    """First-eigenvalue table over n in [n_lo, n_hi], k in [1, n-2], with
    the monotonicity and range flags of the conjecture-evidence scan.

    Cells are independent and may be computed concurrently (CONELAB_THREADS
    caps the pool); rows are assembled in (n, k) order regardless of
    schedule.  The bound flags are evaluated on the n >= 7 rows, where the
    family is strictly stable.
    """
    n_lo, n_hi = n_range
    if not 3 <= n_lo <= n_hi <= 40:
        raise ValueError("n_range must satisfy 3 <= n_lo <= n_hi <= 40")
    cells = [(n, k, cfg) for n in range(n_lo, n_hi + 1) for k in range(1, n - 1)]
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_cell, cells))
    else:
        rows = [_scan_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.n, r.k))

    notes: List[str] = []
    stable_rows = [r for r in rows if r.n >= 7]
    by_n: Dict[int, List[ScanRow]] = {}
    for r in stable_rows:
        by_n.setdefault(r.n, []).append(r)

    inc_k = True
    for n, group in by_n.items():
        lams = [r.lambda1 for r in sorted(group, key=lambda r: r.k)]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            inc_k = False
            notes.append(f"lambda1 not strictly increasing in k at n={n}")
    above = all(r.lambda1 > 8.0 - 2.0 * r.n for r in stable_rows)
    gm_rng = all(r.gamma_minus is not None
                 and 2.0 - r.n < r.gamma_minus < 4.0 - r.n for r in stable_rows)
    gp_rng = all(r.gamma_plus is not None
                 and -2.0 < r.gamma_plus < 0.0 for r in stable_rows)
    gbar = [(n, group[-1].gamma_plus) for n, group in sorted(by_n.items())
            if group[-1].k == n - 2]
    gbar_vals = [g for _, g in gbar]
    gbar_inc = all(b > a for a, b in zip(gbar_vals, gbar_vals[1:]))
    gbar_rng = all(g is not None and -2.0 < g < -1.0 for g in gbar_vals)
    # signed first eigenvalue of the k = n-2 member: -5.55 > -6.54 > ...
    lbar = [group[-1].lambda1 for n, group in sorted(by_n.items())
            if group[-1].k == n - 2]
    lbar_dec = all(b < a for a, b in zip(lbar, lbar[1:]))

    flags = {
        "lambda1_strictly_increasing_in_k": inc_k,
        "lambda1_above_8_minus_2n": above,
        "gamma_minus_in_2mn_4mn": gm_rng,
        "gamma_plus_in_m2_0": gp_rng,
        "gamma_bar_strictly_increasing": gbar_inc,
        "gamma_bar_in_m2_m1": gbar_rng,
        "lambda_bar_strictly_decreasing": lbar_dec,
    }
    return ScanReport(rows=tuple(rows), flags=flags, notes=tuple(notes))
