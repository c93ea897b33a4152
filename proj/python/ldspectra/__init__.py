"""Lamb-Dicke trapped-ion spectra, perturbation theory and dynamics."""

from ._core import (
    ConfigError,
    FockTruncation,
    GridMismatch,
    LdspectraError,
    ModelParams,
    NotHermitian,
    ResonanceRequired,
    SingularCharge,
    SmallDenominator,
    SpectralLine,
    StepFailure,
    TruncationError,
    assemble_trajectory,
    build_H0,
    build_H2,
    build_H_eta,
    build_H_JC,
    build_Ht,
    build_W,
    check_algebra,
    check_factorized_identity,
    check_first_order_energy,
    classify_regime,
    exact_levels,
    factorized_energy,
    integrate_Ht,
    jc_eigenvalues,
    second_order_energy,
    spectral_line,
    spectral_lines,
    unperturbed_energy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
