"""conelab: stability analysis of O(n-k) x O(k)-invariant one-phase
Bernoulli cones.

Modules mirror the analysis pipeline: specfun (hypergeometric and
gamma-family kernel), cone (profiles, free-boundary root, stability
criterion), riccati (log-derivative ODE and comparison barriers),
spectrum (Robin link eigenvalues), lemmas (asymptotic bound checks),
checks (verification batteries), cli (command-line front end).

The hot kernels are compiled (Cython) with a pure-Python fallback
selected at import; see conelab._backend and BACKEND_NAME.
"""

from conelab._backend import BACKEND_NAME
from conelab.cone import (
    ConeParams,
    RootResult,
    StabilityReport,
    Verdict,
    admissible_interval,
    find_root,
    verdict,
)
from conelab.riccati import BarrierSpec, RiccatiTrace, check_4_minus_n, verify_barrier
from conelab.specfun import EvalResult, HypParams, SeriesControl, hyp2f1
from conelab.spectrum import (
    EigenResult,
    Mode,
    ShootingConfig,
    family_scan,
    fd_oracle_lambda1,
    find_eigenvalue,
    indicial_roots,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    "ConeParams",
    "RootResult",
    "StabilityReport",
    "Verdict",
    "admissible_interval",
    "find_root",
    "verdict",
    "BarrierSpec",
    "RiccatiTrace",
    "check_4_minus_n",
    "verify_barrier",
    "EvalResult",
    "HypParams",
    "SeriesControl",
    "hyp2f1",
    "EigenResult",
    "Mode",
    "ShootingConfig",
    "family_scan",
    "fd_oracle_lambda1",
    "find_eigenvalue",
    "indicial_roots",
]
