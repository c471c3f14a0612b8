"""Sharp Bohr-type radii for bounded analytic functions composed with Schwarz functions."""

from __future__ import annotations

from .errors import (
    BohrError,
    CertificationError,
    ConvergenceError,
    DomainError,
    PrecisionError,
    UsageError,
)
from .functionals import (
    BoundedValue,
    Kind,
    area_norm,
    area_term,
    bohr_sum,
    coefficient_bound,
    eval_functional,
    extremal_point,
    extremal_value,
)
from .radii import (
    EquationFamily,
    RootResult,
    classical_radius,
    limit_radius,
    make_table,
    radius,
    solve_radius,
    theorem_radius,
)
from .series import (
    BoundedFunc,
    SchwarzFn,
    TruncatedSeries,
    combine,
    compose_inner,
    constant,
    eval_deriv,
    eval_point,
    identity,
    make_blaschke,
    make_mobius,
    make_schwarz,
    schwarz_monomial,
)
from .verify import CheckReport, SamplerConfig, sample_bounded, sharpness_witness, threshold_a_star

__version__ = "0.1.0"
