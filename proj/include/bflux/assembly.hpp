#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bflux/basis.hpp"
#include "bflux/dofs.hpp"
#include "bflux/mesh.hpp"

namespace bflux {

using Complex = std::complex<double>;

/// Constant PDE data for -Laplace(u) + b . grad(u) + c u = f (viscosity 1).
/// 1D problems use the y components (b1, complex c); 2D problems use real c.
struct Coefficients {
    double b0 = 0.0;
    double b1 = 0.0;
    Complex c{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Sparse square system over complex scalars, filled by accumulation.
// Dirichlet dofs are eliminated symmetrically at finalize: their rows and
// columns reduce to the identity, with prescribed values moved to the RHS.
// ---------------------------------------------------------------------------
class ComplexLinearSystem {
public:
    explicit ComplexLinearSystem(int dimension);

    int dimension() const { return dim_; }

    void add(int row, int col, Complex value);
    void add_rhs(int row, Complex value);
    void set_dirichlet(int dof, Complex value);

    /// Build the sparse matrix; no further add() calls afterwards.
    void finalize();

    const Eigen::SparseMatrix<Complex>& matrix() const;
    const Eigen::VectorXcd& rhs() const { return rhs_; }

private:
    int dim_ = 0;
    bool finalized_ = false;
    std::vector<Eigen::Triplet<Complex>> triplets_;
    std::vector<char> dirichlet_;
    Eigen::VectorXcd fixed_;
    Eigen::VectorXcd rhs_;
    Eigen::SparseMatrix<Complex> matrix_;
};

/// Sparse LU with a residual check: |A x - b| <= 1e-12 |b| (plus a small
/// absolute floor for b = 0). Throws on singular or inaccurate factorization.
Eigen::VectorXcd solve_direct(const ComplexLinearSystem& system);

// ---------------------------------------------------------------------------
// Reference-interval term matrices, entry (test i, trial j):
//   mass      m_ij = int l_j l_i
//   advection c_ij = int l_j' l_i
//   stiffness k_ij = int l_j' l_i'
// ---------------------------------------------------------------------------
Eigen::MatrixXd cell_mass_1d(const ReferenceBasis1D& basis);
Eigen::MatrixXd cell_advection_1d(const ReferenceBasis1D& basis);
Eigen::MatrixXd cell_stiffness_1d(const ReferenceBasis1D& basis);

/// Local matrix for a width-h cell of the 1D operator:
///   k/h + advection * c + reaction * h * m.
/// Requires Re(reaction) > 0 (well-posedness).
Eigen::MatrixXcd cell_matrix_1d(double width, const ReferenceBasis1D& basis, double advection,
                                Complex reaction);

// ---------------------------------------------------------------------------
// Bilinear cell geometry.
// ---------------------------------------------------------------------------
struct CellGeometry2D {
    QuadCell cell;

    Point2 map(double xi, double eta) const { return cell_map(cell, xi, eta); }
    Eigen::Matrix2d jacobian(double xi, double eta) const;
    double jacobian_determinant(double xi, double eta) const {
        return cell_jacobian_determinant(cell, xi, eta);
    }
    /// Mixed second derivative of the map: d2x/(dxi deta) = c0 - c1 + c2 - c3.
    Eigen::Vector2d mixed_second() const;
    /// Newton inversion; returns false when the point lies outside the cell.
    bool invert(Point2 p, double& xi, double& eta) const;
};

/// Mapped local matrix with tensor shape functions l_a(xi) l_b(eta),
/// quadrature per the polybasis point-count rule. Throws on a degenerate
/// (non-positive) Jacobian.
Eigen::MatrixXcd cell_matrix_2d(const CellGeometry2D& geom, const ReferenceBasis1D& basis_x,
                                const ReferenceBasis1D& basis_y, const Coefficients& coeff);

Eigen::VectorXcd cell_rhs_2d(const CellGeometry2D& geom, const ReferenceBasis1D& basis_x,
                             const ReferenceBasis1D& basis_y,
                             const std::function<Complex(Point2)>& forcing);

// ---------------------------------------------------------------------------
// Global assembly. Constrained dofs are condensed (contributions distributed
// to their masters, identity rows left behind); Dirichlet data is applied
// last by nodal interpolation of `boundary_values`.
// ---------------------------------------------------------------------------
ComplexLinearSystem assemble(const Mesh1D& mesh, const DofSystem& dofs, double advection,
                             Complex reaction, const std::function<Complex(double)>& forcing,
                             const std::function<Complex(double)>& boundary_values = {});

ComplexLinearSystem assemble(const QuadMesh& mesh, const DofSystem& dofs,
                             const Coefficients& coeff,
                             const std::function<Complex(Point2)>& forcing,
                             const std::function<Complex(Point2)>& boundary_values = {});

/// Copy constrained entries from their masters: u_c = sum_k w_k u_{m_k}.
void distribute_constraints(const DofSystem& dofs, Eigen::VectorXcd& coefficients);

/// Nodal interpolation of a function onto the dof set.
Eigen::VectorXcd interpolate(const DofSystem& dofs, const std::function<Complex(Point2)>& fn);

// ---------------------------------------------------------------------------
// Field evaluation. The owning cell of a point on an interface is the one
// with the lowest cell index whose closed extent contains it.
// ---------------------------------------------------------------------------

/// order-th y-derivative (order <= 2 used by the seminorms, higher allowed).
Complex evaluate_solution(const Mesh1D& mesh, const DofSystem& dofs,
                          const Eigen::VectorXcd& coefficients, double y, int order);

/// Mixed derivative d^(ax+ay) u / dx^ax dy^ay with ax + ay <= 2.
Complex evaluate_solution(const QuadMesh& mesh, const DofSystem& dofs,
                          const Eigen::VectorXcd& coefficients, Point2 p, int ax, int ay);

}  // namespace bflux
