#pragma once

#include <vector>

namespace bflux {

/// Degrees above 8 are rejected: equispaced Lagrange nodes condition poorly
/// beyond that, and nothing in the solver needs more.
inline constexpr int kMaxBasisDegree = 8;

/// Nodal Lagrange basis of degree m >= 1 on [0, 1] with equispaced nodes
/// x_j = j/m. Values are evaluated with the second barycentric form (exact
/// partition of unity); derivatives come from expanded monomial coefficients.
class ReferenceBasis1D {
public:
    explicit ReferenceBasis1D(int degree);

    int degree() const { return degree_; }
    int node_count() const { return degree_ + 1; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Value of the j-th Lagrange polynomial at xi (xi may lie outside [0, 1]).
    double value(int j, double xi) const;

    /// order-th derivative of the j-th Lagrange polynomial at xi.
    /// order 0 is the value; any order > degree is exactly 0.
    double derivative(int j, double xi, int order) const;

private:
    int degree_;
    std::vector<double> nodes_;
    std::vector<double> bary_weights_;
    std::vector<std::vector<double>> monomial_;  // coefficients, ascending power
};

ReferenceBasis1D make_basis(int degree);

/// Gauss-Legendre rule mapped to [0, 1]: sum of weights is 1 and an n-point
/// rule integrates polynomials of degree <= 2n-1 exactly.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

QuadratureRule gauss_rule(int n);

/// Point count used to assemble a cell with trial degree a and test degree b:
/// ceil((a + b + 2) / 2) + 1. Exact for every mass/advection/stiffness term
/// with constant coefficients, with margin so that forcing integration error
/// stays below the discretization error.
int quadrature_points_for(int trial_degree, int test_degree);

}  // namespace bflux
