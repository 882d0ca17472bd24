#include "bflux/verification.hpp"

#include <cmath>
#include <stdexcept>

namespace bflux {

namespace {

ManufacturedSolution make_sin10_1d() {
    ManufacturedSolution s;
    s.name = "sin10_1d";
    s.value = [](Point2 p) { return std::sin(10.0 * p.y); };
    s.gradient = [](Point2 p) { return Eigen::Vector2d(0.0, 10.0 * std::cos(10.0 * p.y)); };
    s.hessian = [](Point2 p) {
        Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
        h(1, 1) = -100.0 * std::sin(10.0 * p.y);
        return h;
    };
    s.forcing = [](Point2 p, const Coefficients& c) {
        return (100.0 + c.c.real()) * std::sin(10.0 * p.y) +
               10.0 * c.b1 * std::cos(10.0 * p.y);
    };
    return s;
}

// Tangential factor of the periodic solution and its derivatives.
double u1_x(double x) {
    return 20.0 * std::cos(4.0 * M_PI * x) + 0.1 * std::sin(20.0 * M_PI * x) -
           80.0 * std::sin(6.0 * M_PI * x);
}
double u1_xp(double x) {
    return -80.0 * M_PI * std::sin(4.0 * M_PI * x) + 2.0 * M_PI * std::cos(20.0 * M_PI * x) -
           480.0 * M_PI * std::cos(6.0 * M_PI * x);
}
double u1_xpp(double x) {
    return -320.0 * M_PI * M_PI * std::cos(4.0 * M_PI * x) -
           40.0 * M_PI * M_PI * std::sin(20.0 * M_PI * x) +
           2880.0 * M_PI * M_PI * std::sin(6.0 * M_PI * x);
}
double u1_y(double y) {
    return y * y * y + std::exp(-y * y) + std::sin(4.5 * y * y) + std::sin(20.0 * y);
}
double u1_yp(double y) {
    return 3.0 * y * y - 2.0 * y * std::exp(-y * y) + 9.0 * y * std::cos(4.5 * y * y) +
           20.0 * std::cos(20.0 * y);
}
double u1_ypp(double y) {
    return 6.0 * y + (4.0 * y * y - 2.0) * std::exp(-y * y) + 9.0 * std::cos(4.5 * y * y) -
           81.0 * y * y * std::sin(4.5 * y * y) - 400.0 * std::sin(20.0 * y);
}

ManufacturedSolution make_periodic_2d() {
    ManufacturedSolution s;
    s.name = "periodic_2d";
    s.value = [](Point2 p) { return u1_x(p.x) * u1_y(p.y); };
    s.gradient = [](Point2 p) {
        return Eigen::Vector2d(u1_xp(p.x) * u1_y(p.y), u1_x(p.x) * u1_yp(p.y));
    };
    s.hessian = [](Point2 p) {
        Eigen::Matrix2d h;
        h(0, 0) = u1_xpp(p.x) * u1_y(p.y);
        h(0, 1) = h(1, 0) = u1_xp(p.x) * u1_yp(p.y);
        h(1, 1) = u1_x(p.x) * u1_ypp(p.y);
        return h;
    };
    s.forcing = [](Point2 p, const Coefficients& c) {
        return -(u1_xpp(p.x) * u1_y(p.y) + u1_x(p.x) * u1_ypp(p.y)) +
               c.b0 * u1_xp(p.x) * u1_y(p.y) + c.b1 * u1_x(p.x) * u1_yp(p.y) +
               c.c.real() * u1_x(p.x) * u1_y(p.y);
    };
    return s;
}

// The four terms of the nonperiodic solution:
//   t1 = x y sin(20 y), t2 = 10 exp(-x y) cos(15 x),
//   t3 = 2 sin(10^(y^2 + cos x)), t4 = sin(30 x y).
struct Partials {
    double v, px, py, pxx, pxy, pyy;
};

Partials u2_partials(double x, double y) {
    Partials r{};
    const double s20 = std::sin(20.0 * y), c20 = std::cos(20.0 * y);
    r.v = x * y * s20;
    r.px = y * s20;
    r.py = x * s20 + 20.0 * x * y * c20;
    r.pxy = s20 + 20.0 * y * c20;
    r.pyy = 40.0 * x * c20 - 400.0 * x * y * s20;

    const double e = std::exp(-x * y);
    const double c15 = std::cos(15.0 * x), s15 = std::sin(15.0 * x);
    r.v += 10.0 * e * c15;
    r.px += 10.0 * e * (-y * c15 - 15.0 * s15);
    r.py += -10.0 * x * e * c15;
    r.pxx += 10.0 * e * ((y * y - 225.0) * c15 + 30.0 * y * s15);
    r.pxy += 10.0 * e * ((x * y - 1.0) * c15 + 15.0 * x * s15);
    r.pyy += 10.0 * x * x * e * c15;

    const double q = std::log(10.0);
    const double a = std::pow(10.0, y * y + std::cos(x));
    const double sa = std::sin(a), ca = std::cos(a);
    const double sx = std::sin(x), cx = std::cos(x);
    const double ax = -q * a * sx;
    const double ay = 2.0 * q * y * a;
    const double axx = q * a * (q * sx * sx - cx);
    const double axy = -2.0 * q * q * y * a * sx;
    const double ayy = 2.0 * q * a * (1.0 + 2.0 * q * y * y);
    r.v += 2.0 * sa;
    r.px += 2.0 * ca * ax;
    r.py += 2.0 * ca * ay;
    r.pxx += 2.0 * (-sa * ax * ax + ca * axx);
    r.pxy += 2.0 * (-sa * ax * ay + ca * axy);
    r.pyy += 2.0 * (-sa * ay * ay + ca * ayy);

    const double s30 = std::sin(30.0 * x * y), c30 = std::cos(30.0 * x * y);
    r.v += s30;
    r.px += 30.0 * y * c30;
    r.py += 30.0 * x * c30;
    r.pxx += -900.0 * y * y * s30;
    r.pxy += 30.0 * c30 - 900.0 * x * y * s30;
    r.pyy += -900.0 * x * x * s30;
    return r;
}

ManufacturedSolution make_nonperiodic_2d() {
    ManufacturedSolution s;
    s.name = "nonperiodic_2d";
    s.value = [](Point2 p) { return u2_partials(p.x, p.y).v; };
    s.gradient = [](Point2 p) {
        const Partials r = u2_partials(p.x, p.y);
        return Eigen::Vector2d(r.px, r.py);
    };
    s.hessian = [](Point2 p) {
        const Partials r = u2_partials(p.x, p.y);
        Eigen::Matrix2d h;
        h(0, 0) = r.pxx;
        h(0, 1) = h(1, 0) = r.pxy;
        h(1, 1) = r.pyy;
        return h;
    };
    s.forcing = [](Point2 p, const Coefficients& c) {
        const Partials r = u2_partials(p.x, p.y);
        return -(r.pxx + r.pyy) + c.b0 * r.px + c.b1 * r.py + c.c.real() * r.v;
    };
    return s;
}

}  // namespace

ManufacturedSolution make_manufactured(const std::string& name) {
    if (name == "sin10_1d") return make_sin10_1d();
    if (name == "periodic_2d") return make_periodic_2d();
    if (name == "nonperiodic_2d") return make_nonperiodic_2d();
    throw std::invalid_argument("make_manufactured: unknown solution '" + name + "'");
}

std::vector<std::pair<Point2, Point2>> boundary_probes(const QuadMesh& mesh) {
    std::vector<std::vector<Point2>> normals_of(mesh.n_vertices());
    std::vector<Point2> position_of(mesh.n_vertices());
    std::vector<char> seen(mesh.n_vertices(), 0);

    for (const FaceRef& fr : mesh.dirichlet_faces) {
        const QuadCell& cell = mesh.cells[fr.cell];
        const auto [a, b] = kFaceCorners[fr.face];
        for (int corner : {a, b}) {
            const int v = cell.v[corner];
            const Point2 pos = cell.corner[corner];
            Point2 n;
            if (mesh.normal_kind == QuadMesh::NormalKind::radial) {
                const double r = std::hypot(pos.x, pos.y);
                n = {pos.x / r, pos.y / r};
            } else {
                n = face_outward_normal(mesh, fr);
            }
            seen[v] = 1;
            position_of[v] = pos;
            bool duplicate = false;
            for (const Point2& m : normals_of[v])
                if (m.x * n.x + m.y * n.y > 1.0 - 1e-8) duplicate = true;
            if (!duplicate) normals_of[v].push_back(n);
        }
    }

    std::vector<std::pair<Point2, Point2>> probes;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (seen[v])
            for (const Point2& n : normals_of[v]) probes.emplace_back(position_of[v], n);
    return probes;
}

double h1b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs) {
    double result = 0.0;
    for (double y : {0.0, mesh.length}) {
        const double exact_dy = exact.gradient({0.0, y})(1);
        const Complex discrete = evaluate_solution(mesh, dofs, field, y, 1);
        result = std::max(result, std::abs(exact_dy - discrete.real()));
    }
    return result;
}

double h1b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const QuadMesh& mesh, const DofSystem& dofs) {
    double result = 0.0;
    for (const auto& [pos, n] : boundary_probes(mesh)) {
        const Eigen::Vector2d grad_exact = exact.gradient(pos);
        const double dx = evaluate_solution(mesh, dofs, field, pos, 1, 0).real();
        const double dy = evaluate_solution(mesh, dofs, field, pos, 0, 1).real();
        const double err = (grad_exact(0) - dx) * n.x + (grad_exact(1) - dy) * n.y;
        result = std::max(result, std::abs(err));
    }
    return result;
}

double h2b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs) {
    double result = 0.0;
    for (double y : {0.0, mesh.length}) {
        const double exact_dyy = exact.hessian({0.0, y})(1, 1);
        const Complex discrete = evaluate_solution(mesh, dofs, field, y, 2);
        result = std::max(result, std::abs(exact_dyy - discrete.real()));
    }
    return result;
}

double h2b_seminorm(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const QuadMesh& mesh, const DofSystem& dofs) {
    double result = 0.0;
    for (const auto& [pos, n] : boundary_probes(mesh)) {
        const Eigen::Matrix2d h_exact = exact.hessian(pos);
        Eigen::Matrix2d h_discrete;
        h_discrete(0, 0) = evaluate_solution(mesh, dofs, field, pos, 2, 0).real();
        h_discrete(0, 1) = h_discrete(1, 0) =
            evaluate_solution(mesh, dofs, field, pos, 1, 1).real();
        h_discrete(1, 1) = evaluate_solution(mesh, dofs, field, pos, 0, 2).real();
        const Eigen::Vector2d nv(n.x, n.y);
        const double err = nv.dot((h_exact - h_discrete) * nv);
        result = std::max(result, std::abs(err));
    }
    return result;
}

double vertex_error(const ManufacturedSolution& exact, const Eigen::VectorXcd& field,
                    const Mesh1D& mesh, const DofSystem& dofs, VertexProbe which) {
    const double h = mesh.cell_width();
    auto error_at = [&](int v) {
        // Vertex dofs are numbered first, in order.
        return std::abs(field[v] - exact.value({0.0, v * h}));
    };
    (void)dofs;
    if (which == VertexProbe::last_interior) return error_at(mesh.n_cells - 1);
    double result = 0.0;
    for (int v = 1; v < mesh.n_cells; ++v) result = std::max(result, error_at(v));
    return result;
}

RateSummary fit_rates(const std::vector<double>& errors) {
    std::vector<std::pair<int, double>> valid;  // (row index, error)
    RateSummary summary;
    for (int i = 0; i < static_cast<int>(errors.size()); ++i) {
        if (errors[i] > 0.0 && std::isfinite(errors[i]))
            valid.emplace_back(i, errors[i]);
        else
            summary.rows_excluded = true;
    }
    if (valid.size() < 2) throw std::invalid_argument("fit_rates: need at least two usable rows");

    for (std::size_t i = 0; i + 1 < valid.size(); ++i) {
        const int level_gap = valid[i + 1].first - valid[i].first;
        const double rate = std::log2(valid[i].second / valid[i + 1].second) / level_gap;
        summary.per_step.push_back(rate);
        summary.stagnant.push_back(rate < 0.1);
    }
    const int steps = static_cast<int>(summary.per_step.size());
    const int take = std::min(3, steps);
    double total = 0.0;
    for (int i = steps - take; i < steps; ++i) total += summary.per_step[i];
    summary.summary = total / take;
    return summary;
}

}  // namespace bflux
