"""Second-order Taylor root finding, fractional-order recovery and a
multivariate equal-step solver."""

from ._fracstep import (
    Error,
    NoRealStepError,
    System,
    beta_scan,
    derivative,
    evaluate,
    example_system,
    fractional_target,
    gamma_sign,
    log_abs_gamma,
    newton,
    repro_suite,
    rl_integral,
    solve,
    step_candidates,
)

__all__ = [
    "Error",
    "NoRealStepError",
    "System",
    "beta_scan",
    "derivative",
    "evaluate",
    "example_system",
    "fractional_target",
    "gamma_sign",
    "log_abs_gamma",
    "newton",
    "repro_suite",
    "rl_integral",
    "solve",
    "step_candidates",
]
