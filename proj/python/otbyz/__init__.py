"""Ordered-transmission distributed detection under Byzantine attacks."""

from ._core import (
    Hypothesis,
    IoError,
    ModelConfig,
    SpecError,
    __version__,
    abs_order_stat_pdf,
    analytic_error_probs,
    deflection_coefficient,
    draw_trial,
    expected_transmissions,
    optimal_attack_strength,
    preset_csv,
    run_batch,
    savings_bounds,
    stopping_rule,
)

__all__ = [
    "Hypothesis",
    "IoError",
    "ModelConfig",
    "SpecError",
    "__version__",
    "abs_order_stat_pdf",
    "analytic_error_probs",
    "deflection_coefficient",
    "draw_trial",
    "expected_transmissions",
    "optimal_attack_strength",
    "preset_csv",
    "run_batch",
    "savings_bounds",
    "stopping_rule",
]
