#include "bflux/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bflux {

namespace {

const ReferenceBasis1D& cached_basis(int degree) {
    static const std::vector<ReferenceBasis1D> cache = [] {
        std::vector<ReferenceBasis1D> b;
        for (int d = 1; d <= kMaxBasisDegree; ++d) b.emplace_back(d);
        return b;
    }();
    if (degree < 1 || degree > kMaxBasisDegree)
        throw std::invalid_argument("unsupported basis degree");
    return cache[degree - 1];
}

const QuadratureRule& cached_rule(int n) {
    static const std::vector<QuadratureRule> cache = [] {
        std::vector<QuadratureRule> r;
        for (int k = 1; k <= 2 * kMaxBasisDegree + 4; ++k) r.push_back(gauss_rule(k));
        return r;
    }();
    if (n < 1 || n > static_cast<int>(cache.size()))
        throw std::logic_error("cached_rule: point count outside the assembly range");
    return cache[n - 1];
}

// Values and first derivatives of every basis function at the rule points.
struct ShapeTable {
    Eigen::MatrixXd value;  // (point, j)
    Eigen::MatrixXd deriv;
};

ShapeTable tabulate(const ReferenceBasis1D& basis, const QuadratureRule& rule) {
    ShapeTable t;
    t.value.resize(rule.size(), basis.node_count());
    t.deriv.resize(rule.size(), basis.node_count());
    for (int q = 0; q < rule.size(); ++q)
        for (int j = 0; j < basis.node_count(); ++j) {
            t.value(q, j) = basis.value(j, rule.points[q]);
            t.deriv(q, j) = basis.derivative(j, rule.points[q], 1);
        }
    return t;
}

}  // namespace

ComplexLinearSystem::ComplexLinearSystem(int dimension)
    : dim_(dimension),
      dirichlet_(dimension, 0),
      fixed_(Eigen::VectorXcd::Zero(dimension)),
      rhs_(Eigen::VectorXcd::Zero(dimension)) {
    if (dimension <= 0) throw std::invalid_argument("ComplexLinearSystem: empty system");
}

void ComplexLinearSystem::add(int row, int col, Complex value) {
    if (finalized_) throw std::logic_error("ComplexLinearSystem: add() after finalize()");
    triplets_.emplace_back(row, col, value);
}

void ComplexLinearSystem::add_rhs(int row, Complex value) { rhs_[row] += value; }

void ComplexLinearSystem::set_dirichlet(int dof, Complex value) {
    dirichlet_[dof] = 1;
    fixed_[dof] = value;
}

void ComplexLinearSystem::finalize() {
    if (finalized_) return;
    std::vector<Eigen::Triplet<Complex>> kept;
    kept.reserve(triplets_.size() + dim_);
    for (const auto& t : triplets_) {
        if (dirichlet_[t.row()]) continue;
        if (dirichlet_[t.col()]) {
            rhs_[t.row()] -= t.value() * fixed_[t.col()];
            continue;
        }
        kept.push_back(t);
    }
    for (int d = 0; d < dim_; ++d)
        if (dirichlet_[d]) {
            kept.emplace_back(d, d, Complex(1.0, 0.0));
            rhs_[d] = fixed_[d];
        }
    matrix_.resize(dim_, dim_);
    matrix_.setFromTriplets(kept.begin(), kept.end());
    matrix_.makeCompressed();
    triplets_.clear();
    triplets_.shrink_to_fit();
    finalized_ = true;
}

const Eigen::SparseMatrix<Complex>& ComplexLinearSystem::matrix() const {
    if (!finalized_) throw std::logic_error("ComplexLinearSystem: finalize() before matrix()");
    return matrix_;
}

Eigen::VectorXcd solve_direct(const ComplexLinearSystem& system) {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(system.matrix());
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_direct: LU factorization failed (singular matrix?)");
    Eigen::VectorXcd x = lu.solve(system.rhs());
    const double rhs_norm = system.rhs().norm();
    const double residual = (system.matrix() * x - system.rhs()).norm();
    if (residual > 1e-12 * rhs_norm + 1e-300)
        throw std::runtime_error("solve_direct: residual " + std::to_string(residual) +
                                 " exceeds 1e-12 * |rhs| = " + std::to_string(1e-12 * rhs_norm));
    return x;
}

Eigen::MatrixXd cell_mass_1d(const ReferenceBasis1D& basis) {
    const int n = basis.node_count();
    const auto& rule = cached_rule(quadrature_points_for(basis.degree(), basis.degree()));
    const ShapeTable t = tabulate(basis, rule);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < rule.size(); ++q)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += rule.weights[q] * t.value(q, j) * t.value(q, i);
    return m;
}

Eigen::MatrixXd cell_advection_1d(const ReferenceBasis1D& basis) {
    const int n = basis.node_count();
    const auto& rule = cached_rule(quadrature_points_for(basis.degree(), basis.degree()));
    const ShapeTable t = tabulate(basis, rule);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < rule.size(); ++q)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += rule.weights[q] * t.deriv(q, j) * t.value(q, i);
    return m;
}

Eigen::MatrixXd cell_stiffness_1d(const ReferenceBasis1D& basis) {
    const int n = basis.node_count();
    const auto& rule = cached_rule(quadrature_points_for(basis.degree(), basis.degree()));
    const ShapeTable t = tabulate(basis, rule);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < rule.size(); ++q)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += rule.weights[q] * t.deriv(q, j) * t.deriv(q, i);
    return m;
}

Eigen::MatrixXcd cell_matrix_1d(double width, const ReferenceBasis1D& basis, double advection,
                                Complex reaction) {
    if (width <= 0.0) throw std::invalid_argument("cell_matrix_1d: width must be positive");
    if (reaction.real() <= 0.0)
        throw std::invalid_argument("cell_matrix_1d: Re(reaction) must be positive");
    return cell_stiffness_1d(basis) / width + advection * cell_advection_1d(basis) +
           reaction * width * cell_mass_1d(basis);
}

Eigen::Matrix2d CellGeometry2D::jacobian(double xi, double eta) const {
    const auto& c = cell.corner;
    Eigen::Matrix2d J;
    J(0, 0) = (c[1].x - c[0].x) * (1.0 - eta) + (c[2].x - c[3].x) * eta;
    J(1, 0) = (c[1].y - c[0].y) * (1.0 - eta) + (c[2].y - c[3].y) * eta;
    J(0, 1) = (c[3].x - c[0].x) * (1.0 - xi) + (c[2].x - c[1].x) * xi;
    J(1, 1) = (c[3].y - c[0].y) * (1.0 - xi) + (c[2].y - c[1].y) * xi;
    return J;
}

Eigen::Vector2d CellGeometry2D::mixed_second() const {
    const auto& c = cell.corner;
    return {c[0].x - c[1].x + c[2].x - c[3].x, c[0].y - c[1].y + c[2].y - c[3].y};
}

bool CellGeometry2D::invert(Point2 p, double& xi, double& eta) const {
    double scale = 0.0;
    for (int i = 1; i < 4; ++i)
        scale = std::max(scale, std::hypot(cell.corner[i].x - cell.corner[0].x,
                                           cell.corner[i].y - cell.corner[0].y));
    double x = 0.5, e = 0.5;
    for (int it = 0; it < 50; ++it) {
        const Point2 m = map(x, e);
        Eigen::Vector2d r(m.x - p.x, m.y - p.y);
        if (r.norm() < 1e-14 * scale) break;
        const Eigen::Matrix2d J = jacobian(x, e);
        const Eigen::Vector2d d = J.partialPivLu().solve(r);
        x -= d(0);
        e -= d(1);
        if (!std::isfinite(x) || !std::isfinite(e)) return false;
    }
    const Point2 m = map(x, e);
    if (std::hypot(m.x - p.x, m.y - p.y) > 1e-10 * scale) return false;
    const double tol = 1e-9;
    if (x < -tol || x > 1.0 + tol || e < -tol || e > 1.0 + tol) return false;
    xi = std::clamp(x, 0.0, 1.0);
    eta = std::clamp(e, 0.0, 1.0);
    return true;
}

Eigen::MatrixXcd cell_matrix_2d(const CellGeometry2D& geom, const ReferenceBasis1D& basis_x,
                                const ReferenceBasis1D& basis_y, const Coefficients& coeff) {
    const int nx = basis_x.node_count();
    const int ny = basis_y.node_count();
    const int n = nx * ny;
    const auto& rule_x = cached_rule(quadrature_points_for(basis_x.degree(), basis_x.degree()));
    const auto& rule_y = cached_rule(quadrature_points_for(basis_y.degree(), basis_y.degree()));
    const ShapeTable tx = tabulate(basis_x, rule_x);
    const ShapeTable ty = tabulate(basis_y, rule_y);

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXd grad(n, 2);
    Eigen::VectorXd val(n);
    const Eigen::Vector2d b(coeff.b0, coeff.b1);

    for (int qy = 0; qy < rule_y.size(); ++qy) {
        for (int qx = 0; qx < rule_x.size(); ++qx) {
            const double xi = rule_x.points[qx];
            const double eta = rule_y.points[qy];
            const Eigen::Matrix2d J = geom.jacobian(xi, eta);
            const double det = J.determinant();
            if (det <= 0.0) throw std::runtime_error("cell_matrix_2d: degenerate Jacobian");
            const Eigen::Matrix2d K = J.inverse();
            const double w = rule_x.weights[qx] * rule_y.weights[qy] * det;

            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const int a = local_node_index(i, j, basis_x.degree());
                    val(a) = tx.value(qx, i) * ty.value(qy, j);
                    const double gxi = tx.deriv(qx, i) * ty.value(qy, j);
                    const double geta = tx.value(qx, i) * ty.deriv(qy, j);
                    grad(a, 0) = gxi * K(0, 0) + geta * K(1, 0);
                    grad(a, 1) = gxi * K(0, 1) + geta * K(1, 1);
                }

            for (int t = 0; t < n; ++t) {
                for (int s = 0; s < n; ++s) {
                    const double diff = grad(t, 0) * grad(s, 0) + grad(t, 1) * grad(s, 1);
                    const double adv = (b(0) * grad(s, 0) + b(1) * grad(s, 1)) * val(t);
                    mat(t, s) += w * (diff + adv) + w * coeff.c * val(s) * val(t);
                }
            }
        }
    }
    return mat;
}

Eigen::VectorXcd cell_rhs_2d(const CellGeometry2D& geom, const ReferenceBasis1D& basis_x,
                             const ReferenceBasis1D& basis_y,
                             const std::function<Complex(Point2)>& forcing) {
    const int nx = basis_x.node_count();
    const int ny = basis_y.node_count();
    const auto& rule_x = cached_rule(quadrature_points_for(basis_x.degree(), basis_x.degree()));
    const auto& rule_y = cached_rule(quadrature_points_for(basis_y.degree(), basis_y.degree()));
    const ShapeTable tx = tabulate(basis_x, rule_x);
    const ShapeTable ty = tabulate(basis_y, rule_y);

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nx * ny);
    for (int qy = 0; qy < rule_y.size(); ++qy)
        for (int qx = 0; qx < rule_x.size(); ++qx) {
            const double xi = rule_x.points[qx];
            const double eta = rule_y.points[qy];
            const double det = geom.jacobian_determinant(xi, eta);
            if (det <= 0.0) throw std::runtime_error("cell_rhs_2d: degenerate Jacobian");
            const Complex wf =
                rule_x.weights[qx] * rule_y.weights[qy] * det * forcing(geom.map(xi, eta));
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    rhs(local_node_index(i, j, basis_x.degree())) +=
                        wf * tx.value(qx, i) * ty.value(qy, j);
        }
    return rhs;
}

namespace {

// Distribute a local contribution through the constraint table.
void scatter(const DofSystem& dofs, const std::vector<int>& l2g, const Eigen::MatrixXcd& local,
             const Eigen::VectorXcd& local_rhs, ComplexLinearSystem& system) {
    const int n = static_cast<int>(l2g.size());
    auto expand = [&](int g) -> std::vector<std::pair<int, double>> {
        if (!dofs.constrained(g)) return {{g, 1.0}};
        const Constraint& c = dofs.constraints[dofs.constraint_index[g]];
        return c.masters;
    };
    for (int t = 0; t < n; ++t) {
        const auto rows = expand(l2g[t]);
        for (const auto& [gr, wr] : rows) system.add_rhs(gr, wr * local_rhs(t));
        for (int s = 0; s < n; ++s) {
            const auto cols = expand(l2g[s]);
            for (const auto& [gr, wr] : rows)
                for (const auto& [gc, wc] : cols) system.add(gr, gc, wr * wc * local(t, s));
        }
    }
}

void finish(const DofSystem& dofs, const std::function<Complex(Point2)>& boundary_values,
            ComplexLinearSystem& system) {
    // Identity rows for condensed dofs (their values are re-distributed after
    // the solve), then Dirichlet by nodal interpolation.
    for (const Constraint& c : dofs.constraints) system.add(c.dof, c.dof, Complex(1.0, 0.0));
    for (int d : dofs.dirichlet) {
        const Complex value = boundary_values ? boundary_values(dofs.positions[d]) : Complex(0.0);
        system.set_dirichlet(d, value);
    }
    system.finalize();
}

}  // namespace

ComplexLinearSystem assemble(const Mesh1D& mesh, const DofSystem& dofs, double advection,
                             Complex reaction, const std::function<Complex(double)>& forcing,
                             const std::function<Complex(double)>& boundary_values) {
    if (dofs.n_cells() != mesh.n_cells)
        throw std::invalid_argument("assemble: mesh and dof system disagree on cell count");
    ComplexLinearSystem system(dofs.total_dofs);
    const double h = mesh.cell_width();

    for (int c = 0; c < mesh.n_cells; ++c) {
        const ReferenceBasis1D& basis = cached_basis(mesh.degrees[c]);
        const Eigen::MatrixXcd local = cell_matrix_1d(h, basis, advection, reaction);

        const auto& rule = cached_rule(quadrature_points_for(basis.degree(), basis.degree()));
        Eigen::VectorXcd local_rhs = Eigen::VectorXcd::Zero(basis.node_count());
        if (forcing) {
            const ShapeTable t = tabulate(basis, rule);
            for (int q = 0; q < rule.size(); ++q) {
                const Complex wf = rule.weights[q] * h * forcing((c + rule.points[q]) * h);
                for (int i = 0; i < basis.node_count(); ++i) local_rhs(i) += wf * t.value(q, i);
            }
        }
        scatter(dofs, dofs.cell_dofs[c], local, local_rhs, system);
    }

    auto bv = [&](Point2 p) { return boundary_values ? boundary_values(p.y) : Complex(0.0); };
    finish(dofs, boundary_values ? std::function<Complex(Point2)>(bv) : nullptr, system);
    return system;
}

ComplexLinearSystem assemble(const QuadMesh& mesh, const DofSystem& dofs,
                             const Coefficients& coeff,
                             const std::function<Complex(Point2)>& forcing,
                             const std::function<Complex(Point2)>& boundary_values) {
    if (dofs.n_cells() != mesh.n_cells())
        throw std::invalid_argument("assemble: mesh and dof system disagree on cell count");
    if (coeff.c.real() <= 0.0) throw std::invalid_argument("assemble: Re(c) must be positive");
    ComplexLinearSystem system(dofs.total_dofs);

    for (int c = 0; c < mesh.n_cells(); ++c) {
        const QuadCell& cell = mesh.cells[c];
        const CellGeometry2D geom{cell};
        const ReferenceBasis1D& bx = cached_basis(cell.deg_x);
        const ReferenceBasis1D& by = cached_basis(cell.deg_y);
        const Eigen::MatrixXcd local = cell_matrix_2d(geom, bx, by, coeff);
        Eigen::VectorXcd local_rhs;
        if (forcing)
            local_rhs = cell_rhs_2d(geom, bx, by, forcing);
        else
            local_rhs = Eigen::VectorXcd::Zero(local.rows());
        scatter(dofs, dofs.cell_dofs[c], local, local_rhs, system);
    }
    finish(dofs, boundary_values, system);
    return system;
}

void distribute_constraints(const DofSystem& dofs, Eigen::VectorXcd& coefficients) {
    for (const Constraint& c : dofs.constraints) {
        Complex v = 0.0;
        for (const auto& [m, w] : c.masters) v += w * coefficients[m];
        coefficients[c.dof] = v;
    }
}

Eigen::VectorXcd interpolate(const DofSystem& dofs, const std::function<Complex(Point2)>& fn) {
    Eigen::VectorXcd v(dofs.total_dofs);
    for (int d = 0; d < dofs.total_dofs; ++d) v[d] = fn(dofs.positions[d]);
    return v;
}

namespace {

int locate_cell_1d(const Mesh1D& mesh, double y) {
    const double h = mesh.cell_width();
    const double r = y / h;
    if (r < -1e-9 || r > mesh.n_cells + 1e-9)
        throw std::invalid_argument("evaluate_solution: point outside the mesh");
    const double j = std::round(r);
    if (std::abs(r - j) < 1e-9) {
        // On a vertex: the lowest-index cell whose closed extent contains it.
        const int v = static_cast<int>(j);
        return std::max(0, std::min(v - 1, mesh.n_cells - 1));
    }
    return std::max(0, std::min(static_cast<int>(std::floor(r)), mesh.n_cells - 1));
}

}  // namespace

Complex evaluate_solution(const Mesh1D& mesh, const DofSystem& dofs,
                          const Eigen::VectorXcd& coefficients, double y, int order) {
    const int c = locate_cell_1d(mesh, y);
    const double h = mesh.cell_width();
    const double xi = y / h - c;
    const ReferenceBasis1D& basis = cached_basis(mesh.degrees[c]);
    Complex result = 0.0;
    const std::vector<int>& l2g = dofs.cell_dofs[c];
    for (int j = 0; j < basis.node_count(); ++j)
        result += coefficients[l2g[j]] * basis.derivative(j, xi, order);
    return result / std::pow(h, order);
}

Complex evaluate_solution(const QuadMesh& mesh, const DofSystem& dofs,
                          const Eigen::VectorXcd& coefficients, Point2 p, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax + ay > 2)
        throw std::invalid_argument("evaluate_solution: derivative order above 2");

    double xi = 0.0, eta = 0.0;
    int found = -1;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const QuadCell& cell = mesh.cells[c];
        double lo_x = cell.corner[0].x, hi_x = lo_x, lo_y = cell.corner[0].y, hi_y = lo_y;
        for (int i = 1; i < 4; ++i) {
            lo_x = std::min(lo_x, cell.corner[i].x);
            hi_x = std::max(hi_x, cell.corner[i].x);
            lo_y = std::min(lo_y, cell.corner[i].y);
            hi_y = std::max(hi_y, cell.corner[i].y);
        }
        const double tol = 1e-9 * (1.0 + std::max(hi_x - lo_x, hi_y - lo_y));
        if (p.x < lo_x - tol || p.x > hi_x + tol || p.y < lo_y - tol || p.y > hi_y + tol) continue;
        const CellGeometry2D geom{cell};
        if (geom.invert(p, xi, eta)) {
            found = c;
            break;
        }
    }
    if (found < 0) throw std::invalid_argument("evaluate_solution: point outside the mesh");

    const QuadCell& cell = mesh.cells[found];
    const CellGeometry2D geom{cell};
    const ReferenceBasis1D& bx = cached_basis(cell.deg_x);
    const ReferenceBasis1D& by = cached_basis(cell.deg_y);
    const std::vector<int>& l2g = dofs.cell_dofs[found];

    // Reference-space value and derivatives of the field.
    Complex u{}, u_xi{}, u_eta{}, u_xixi{}, u_xieta{}, u_etaeta{};
    for (int j = 0; j < by.node_count(); ++j)
        for (int i = 0; i < bx.node_count(); ++i) {
            const Complex coef = coefficients[l2g[local_node_index(i, j, cell.deg_x)]];
            const double vx = bx.value(i, xi), vy = by.value(j, eta);
            const double dx = bx.derivative(i, xi, 1), dy = by.derivative(j, eta, 1);
            u += coef * vx * vy;
            u_xi += coef * dx * vy;
            u_eta += coef * vx * dy;
            if (ax + ay == 2) {
                u_xixi += coef * bx.derivative(i, xi, 2) * vy;
                u_xieta += coef * dx * dy;
                u_etaeta += coef * vx * by.derivative(j, eta, 2);
            }
        }

    if (ax + ay == 0) return u;

    const Eigen::Matrix2d J = geom.jacobian(xi, eta);
    const Eigen::Matrix2d K = J.inverse();  // K(i, a) = d xi_i / d x_a
    if (ax + ay == 1) {
        const int a = (ax == 1) ? 0 : 1;
        return u_xi * K(0, a) + u_eta * K(1, a);
    }

    // Hessian: sum_ij u_,ij K(i,a) K(j,b) + sum_i u_,i xi_i,ab where
    // xi_,ab = -[K (dJ/dx_b) K](i,a) and dJ/dx_b comes from the bilinear
    // map's only nonzero second derivative (the mixed one).
    const int a = (ax == 2 || (ax == 1 && ay == 1)) ? 0 : 1;
    const int b = (ay == 2 || (ax == 1 && ay == 1)) ? 1 : 0;
    // (ax,ay) = (2,0) -> (a,b) = (0,0); (1,1) -> (0,1); (0,2) -> (1,1)

    Complex second = u_xixi * K(0, a) * K(0, b) + u_xieta * (K(0, a) * K(1, b) + K(1, a) * K(0, b)) +
                     u_etaeta * K(1, a) * K(1, b);
    const Eigen::Vector2d g = geom.mixed_second();
    Eigen::Matrix2d dJdb;  // (dJ/dx_b)(r, i) = g_r * K(1-i, b)
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 2; ++i) dJdb(r, i) = g(r) * K(1 - i, b);
    const Eigen::Matrix2d S = -(K * dJdb * K);  // S(i, a) = xi_i,ab
    second += u_xi * S(0, a) + u_eta * S(1, a);
    return second;
}

}  // namespace bflux
