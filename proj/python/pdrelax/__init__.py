"""Relaxed energies for pressure-dependent plasticity: envelope, oracle and solvers."""

from ._core import (
    ConfigError,
    DissipationFunction,
    EnvelopeParams,
    Error,
    NoConvergence,
    NondifferentiablePoint,
    RelaxedMaterial,
    UnsupportedState,
    __version__,
    classify,
    condensed_energy,
    double_well_constant,
    lower_convex_hull,
    minimize_bar,
    plate_with_hole,
    regime_of,
    relaxed_energy,
    relaxed_energy_3d,
    relaxed_gradient,
    relaxed_stress_3d,
    small_b_condition,
    solve_plate,
    touching_point,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
