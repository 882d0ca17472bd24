#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bflux/assembly.hpp"
#include "bflux/dofs.hpp"
#include "bflux/mesh.hpp"

namespace bflux {

/// Exact solution with hand-derived closed-form derivatives. The forcing is
/// derived separately (not composed from gradient/hessian), so the two can
/// cross-check each other; both are guarded by finite-difference tests.
struct ManufacturedSolution {
    std::string name;
    std::function<double(Point2)> value;
    std::function<Eigen::Vector2d(Point2)> gradient;
    std::function<Eigen::Matrix2d(Point2)> hessian;
    /// -Laplace(u) + b . grad(u) + c u at the point.
    std::function<double(Point2, const Coefficients&)> forcing;
};

/// Known names: sin10_1d, periodic_2d, nonperiodic_2d.
ManufacturedSolution make_manufactured(const std::string& name);

// ---------------------------------------------------------------------------
// Boundary seminorms: max over Dirichlet-boundary mesh vertices of the
// first/second normal-derivative error. Corner vertices are probed with both
// incident normals and the larger error wins.
// ---------------------------------------------------------------------------

/// (position, outward unit normal) pairs; corner vertices appear once per
/// distinct normal. Disk meshes use exact radial normals.
std::vector<std::pair<Point2, Point2>> boundary_probes(const QuadMesh& mesh);

double h1b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs);
double h1b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const QuadMesh& mesh, const DofSystem& dofs);

double h2b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs);
double h2b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const QuadMesh& mesh, const DofSystem& dofs);

enum class VertexProbe {
    last_interior,  // the mesh vertex at L - dy
    all,            // max over every interior vertex
};

double vertex_error(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs, VertexProbe which);

// ---------------------------------------------------------------------------
// Convergence records and rate fitting.
// ---------------------------------------------------------------------------
struct ConvergenceRow {
    int level = 0;
    int n_cells = 0;
    double h = 0.0;
    int dofs = 0;
    double h1b = 0.0;
    double h2b = 0.0;
    double vertex_last = 0.0;
    double vertex_all = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

struct RateSummary {
    std::vector<double> per_step;   // log2(e_i / e_{i+1}), consecutive valid rows
    std::vector<bool> stagnant;     // rate below 0.1 (roundoff floor)
    double summary = 0.0;           // mean of the last <= 3 steps
    bool rows_excluded = false;     // zero/negative rows were dropped
};

/// Per-step and summary rates for one error column. Throws with fewer than
/// two usable rows.
RateSummary fit_rates(const std::vector<double>& errors);

}  // namespace bflux
