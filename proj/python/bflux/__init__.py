"""Boundary p-refinement finite elements: convergence studies, circulant
spectra, the decoupled Fourier solve, and the closed-form Green's oracle."""

from ._core import (
    ReferenceBasis1D,
    GreensOracle,
    check_appendix_inequalities,
    decoupling_discrepancy,
    eigenvalue_ratio,
    fit_rates,
    fourier_interpolant,
    gauss_rule,
    greens_build,
    manufactured_forcing,
    manufactured_value,
    mass_eigenvalue,
    quadrature_points_for,
    resolvable_wavenumbers,
    run_spectral_checks,
    run_study_1d,
    run_study_2d,
    stiffness_eigenvalue,
)

__all__ = [
    "ReferenceBasis1D",
    "GreensOracle",
    "check_appendix_inequalities",
    "decoupling_discrepancy",
    "eigenvalue_ratio",
    "fit_rates",
    "fourier_interpolant",
    "gauss_rule",
    "greens_build",
    "manufactured_forcing",
    "manufactured_value",
    "mass_eigenvalue",
    "quadrature_points_for",
    "resolvable_wavenumbers",
    "run_spectral_checks",
    "run_study_1d",
    "run_study_2d",
    "stiffness_eigenvalue",
]
