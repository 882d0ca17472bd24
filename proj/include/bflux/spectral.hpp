#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bflux/assembly.hpp"
#include "bflux/mesh.hpp"

namespace bflux {

// ---------------------------------------------------------------------------
// Fourier interpolants and circulant eigenvalues for the periodic x
// discretization with piecewise-linear hats on N = 1/dx cells.
// ---------------------------------------------------------------------------

/// Piecewise-linear nodal interpolant of exp(2 pi I k x) through the grid
/// vertices x_i = i dx, evaluated at x in [0, 1].
Complex fourier_interpolant(int k, double dx, double x);

/// lambda_{M,k} = dx (2 cos(2 pi dx k) + 4) / 6. Always positive.
double mass_eigenvalue(int k, double dx);

/// lambda_{A,k} = (2 c dx^2 + 3 I b0 dx sin(2 pi dx k)
///                 + (c dx^2 - 6) cos(2 pi dx k) + 6) / (3 dx).
Complex stiffness_eigenvalue(int k, double dx, double b0, double c);

/// lambda_k = lambda_{A,k} / lambda_{M,k}; Re >= c for every k.
Complex eigenvalue_ratio(int k, double dx, double b0, double c);

/// The independent mode set {-N/2+1, ..., N/2} (N modes for N unknowns; the
/// pair (-N/2, N/2) aliases to the same nodal vector).
std::vector<int> resolvable_wavenumbers(int n_cells);

struct CirculantSpectrum {
    std::vector<int> wavenumbers;
    std::vector<double> lambda_mass;
    std::vector<Complex> lambda_stiffness;
    std::vector<Complex> ratio;
};

CirculantSpectrum circulant_spectrum(int n_cells, double b0, double c);

// Dense periodic 1D matrices of the hat-function discretization, for the
// eigen-identity checks (matvec against the closed forms).
Eigen::MatrixXcd periodic_mass_matrix(int n_cells);
Eigen::MatrixXcd periodic_stiffness_matrix(int n_cells, double b0, double c);

/// Nodal vector (exp(2 pi I k j dx))_{j = 0..N-1}.
Eigen::VectorXcd fourier_mode_vector(int k, int n_cells);

// ---------------------------------------------------------------------------
// Mode-wise forcing projection and the decoupled solve of the periodic strip.
// ---------------------------------------------------------------------------

/// y -> (dx / lambda_{M,k}) int_0^1 f(x, y) conj(F_k(x)) dx, computed with the
/// given Gauss rule applied per x-cell (F_k is only piecewise smooth).
std::function<Complex(double)> project_forcing(const std::function<Complex(Point2)>& f, int k,
                                               double dx, const QuadratureRule& rule);

struct DecoupledSolution {
    Mesh1D line_mesh;
    DofSystem line_dofs;
    double dx = 0.0;
    std::vector<int> wavenumbers;
    std::vector<Eigen::VectorXcd> mode_coefficients;

    /// sum_k F_k(x) d^n/dy^n u_k(y).
    Complex evaluate(Point2 p, int y_order = 0) const;
};

/// Solve the periodic-in-x tensor problem mode by mode: for each resolvable k
/// a complex 1D problem on the y line mesh (degrees [1+p, 1, ..., 1, 1+p])
/// with reaction lambda_{A,k}/lambda_{M,k} and forcing projected onto F_k.
/// Inhomogeneous Dirichlet data enters through the DFT of its vertex values.
DecoupledSolution decoupled_solve_2d(const TensorMesh2D& mesh, const Coefficients& coeff,
                                     const std::function<Complex(Point2)>& forcing,
                                     const std::function<Complex(Point2)>& boundary_values = {});

/// Max nodal |direct - synthesized| / max |direct| over every dof.
double decoupling_discrepancy(const TensorMesh2D& mesh, const Coefficients& coeff,
                              const std::function<Complex(Point2)>& forcing,
                              const std::function<Complex(Point2)>& boundary_values = {});

// ---------------------------------------------------------------------------
// Closed-form Green's function for -G'' + b G' + c G on [0, L] with a unit
// derivative jump at the last interior vertex L - dy. Test oracle.
// ---------------------------------------------------------------------------
struct GreensOracle {
    double b = 0.0;
    Complex c{};
    double length = 1.0;
    double cell_width = 0.0;
    Complex D;             // sqrt(b^2 + 4c)/2
    Complex c1, c2, c3, c4;
    double A1 = 1.0;       // exp(b (L - dy) / 2)
    Complex A2;            // (L - dy) D

    double kink() const { return length - cell_width; }
};

GreensOracle greens_build(double b, Complex c, double L, double dy);

/// order-th derivative of G at y, via the exponential closed forms. The
/// branch is picked by y <= L - dy.
Complex greens_eval(const GreensOracle& oracle, double y, int order);

// ---------------------------------------------------------------------------
// Randomized checks of the scalar inequalities behind the Green's function
// bounds and the exp/sinh ratio bound.
// ---------------------------------------------------------------------------
struct InequalityReport {
    long long samples = 0;
    long long decay_violations = 0;      // |(exp(-2 D t) - 1)/(2D)| <= t
    long long exp_ratio_violations = 0;  // |(exp(2DL) +- exp(2Dt))/(exp(2DL) - 1)| <= 4
    long long exp_pair_violations = 0;   // |(exp(-D(L+t-y)) +- exp(D(L-t-y)))/(2D)| <= 1/|D|
    long long exp_sinh_violations = 0;   // |exp(z)/sinh(z)| <= 2 + 2/|z|

    long long total() const {
        return decay_violations + exp_ratio_violations + exp_pair_violations +
               exp_sinh_violations;
    }
};

InequalityReport check_appendix_inequalities(int samples, std::uint64_t seed);

// Aggregated circulant/orthogonality deviations, for the check CLI.
struct SpectralCheckReport {
    double max_eigen_identity_error = 0.0;  // matvec vs closed-form eigenvalue
    double max_l2_orthogonality_error = 0.0;
    double max_mode_orthogonality_error = 0.0;  // F_k against exp(-2 pi I k' x)
    bool ratio_bounds_hold = true;
};

SpectralCheckReport run_spectral_checks(const std::vector<int>& cell_counts, double b0, double c);

}  // namespace bflux
