from ._core import (
    DivergentIntegral,
    IncompleteSubstitution,
    PipelineError,
    PreconditionError,
    RuleTableExhausted,
    UnsupportedSignature,
    UsageError,
    derive,
    derive_json,
    eval_function,
    gauss_bonnet_residual,
    quad_r_integral,
    resolvent_term,
    sphere_average,
    verify,
)

__all__ = [
    "DivergentIntegral",
    "IncompleteSubstitution",
    "PipelineError",
    "PreconditionError",
    "RuleTableExhausted",
    "UnsupportedSignature",
    "UsageError",
    "derive",
    "derive_json",
    "eval_function",
    "gauss_bonnet_residual",
    "quad_r_integral",
    "resolvent_term",
    "sphere_average",
    "verify",
]
