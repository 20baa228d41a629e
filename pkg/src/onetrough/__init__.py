"""Even one-troughed travelling waves of the beam equation with jumping nonlinearity.

The travelling-wave ODE ``z'''' + c^2 z'' + (z+1)^+ - xi (z+1)^- - 1 = 0`` is
piecewise linear, so its even one-troughed homoclinic solutions are glued from
closed forms.  Their number for a given ``(c, p)`` equals the number of integer
level crossings of a transcendental counting function ``L(theta)``.
"""

from .errors import (
    ConsistencyError,
    DiscontinuityError,
    DomainError,
    LevelNotBracketedError,
    NumericalError,
    TroughError,
)
from .transcendental import (
    Endpoint,
    ModelParams,
    ThetaMinSolution,
    ThetaWindow,
    admissible_window,
    eval_L,
    eval_L_limit,
    eval_L_sup,
    eval_L_tilde,
    linear_rates,
    make_params,
    theta_discontinuities,
    theta_min,
)
from .shooting import theta_min_oracle
from .counting import (
    CountResult,
    SolutionCandidate,
    count_levels,
    lemma_bound,
    p0,
    p_threshold,
    solve_level,
    theorem_check,
)
from .wave import (
    PhysicalWave,
    VerificationReport,
    WaveProfile,
    build_wave,
    junction_time,
    recover_inner,
    recover_outer,
    to_physical,
    verify_wave,
)
from .scanner import (
    CellResult,
    Classification,
    GridSpec,
    RegionMap,
    audit_bounds,
    boundary_curves,
    scan,
)

__version__ = "0.1.0"
