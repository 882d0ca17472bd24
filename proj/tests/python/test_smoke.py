"""Smoke tests for the python bindings.

Run with the CMake-built module on the path:
    PYTHONPATH=build/python_pkg pytest tests/python
"""

import cmath
import math

import pytest

import bflux


def test_basis_kronecker_and_partition_of_unity():
    basis = bflux.ReferenceBasis1D(4)
    nodes = basis.nodes
    assert nodes[0] == 0.0 and nodes[-1] == 1.0
    for i, node in enumerate(nodes):
        for j in range(5):
            assert basis.value(j, node) == (1.0 if i == j else 0.0)
    total = sum(basis.value(j, 0.37) for j in range(5))
    assert abs(total - 1.0) < 1e-13


def test_basis_rejects_degree_zero():
    with pytest.raises(ValueError):
        bflux.ReferenceBasis1D(0)


def test_gauss_rule_exactness():
    points, weights = bflux.gauss_rule(3)
    assert abs(sum(weights) - 1.0) < 1e-14
    for k in range(6):  # exact through degree 5
        integral = sum(w * x**k for x, w in zip(points, weights))
        assert abs(integral - 1.0 / (k + 1)) < 1e-13


def test_1d_study_rate():
    rows = bflux.run_study_1d(m=1, p=1, levels=5)
    rates = bflux.fit_rates([row["h1b"] for row in rows])
    assert 1.7 < rates["summary"] < 2.3


def test_eigenvalues_and_ratio():
    assert abs(bflux.mass_eigenvalue(0, 0.25) - 0.25) < 1e-15
    ratio = bflux.eigenvalue_ratio(0, 0.125, 1.0, 2.0)
    assert abs(ratio - 2.0) < 1e-13
    lam = bflux.stiffness_eigenvalue(0, 0.25, 1.0, 2.0)
    assert abs(lam - 2.0 * 0.25) < 1e-14


def test_fourier_interpolant_midpoint():
    value = bflux.fourier_interpolant(1, 0.25, 0.125)
    assert abs(value - complex(0.5, 0.5)) < 1e-14


def test_decoupling_identity():
    assert bflux.decoupling_discrepancy(8, 2) <= 1e-8


def test_greens_oracle():
    oracle = bflux.greens_build(1.0, complex(2.0, 0.0), 1.0, 1.0 / 16.0)
    assert oracle.c1 == 0
    assert abs(oracle.eval(0.0)) < 1e-13
    assert abs(oracle.eval(1.0)) < 1e-13
    kink = oracle.kink
    jump = oracle.eval(kink + 1e-13, 1) - oracle.eval(kink, 1)
    assert abs(jump - 1.0) < 1e-8


def test_appendix_inequalities():
    report = bflux.check_appendix_inequalities(samples=2000, seed=42)
    assert report["total"] == 0


def test_spectral_checks():
    report = bflux.run_spectral_checks([8])
    assert report["max_eigen_identity_error"] < 1e-11
    assert report["ratio_bounds_hold"]


def test_manufactured_forcing_matches_1d_formula():
    # For sin(10 y) with b = 1, c = 2 the forcing is 102 sin(10y) + 10 cos(10y).
    y = 0.37
    f = bflux.manufactured_forcing("sin10_1d", 0.0, y, b0=0.0, b1=1.0, c=2.0)
    assert abs(f - (102.0 * math.sin(10.0 * y) + 10.0 * math.cos(10.0 * y))) < 1e-12
