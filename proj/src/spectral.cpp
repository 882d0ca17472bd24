#include "bflux/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bflux/dofs.hpp"

namespace bflux {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Complex unit_mode(int k, double x) { return std::polar(1.0, kTwoPi * k * x); }

int cells_from_dx(double dx) {
    const int n = static_cast<int>(std::lround(1.0 / dx));
    if (n < 1 || std::abs(n * dx - 1.0) > 1e-12)
        throw std::invalid_argument("spectral: dx must divide the unit interval");
    return n;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Complex fourier_interpolant(int k, double dx, double x) {
    const int n = cells_from_dx(dx);
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::invalid_argument("fourier_interpolant: x outside [0, 1]");
    int cell = std::min(static_cast<int>(std::floor(x / dx)), n - 1);
    cell = std::max(cell, 0);
    const double t = x / dx - cell;
    return (1.0 - t) * unit_mode(k, cell * dx) + t * unit_mode(k, (cell + 1) * dx);
}

double mass_eigenvalue(int k, double dx) {
    return dx * (2.0 * std::cos(kTwoPi * dx * k) + 4.0) / 6.0;
}

Complex stiffness_eigenvalue(int k, double dx, double b0, double c) {
    const double theta = kTwoPi * dx * k;
    return (2.0 * c * dx * dx + Complex(0.0, 3.0 * b0 * dx * std::sin(theta)) +
            (c * dx * dx - 6.0) * std::cos(theta) + 6.0) /
           (3.0 * dx);
}

Complex eigenvalue_ratio(int k, double dx, double b0, double c) {
    if (c <= 0.0) throw std::invalid_argument("eigenvalue_ratio: c must be positive");
    return stiffness_eigenvalue(k, dx, b0, c) / mass_eigenvalue(k, dx);
}

std::vector<int> resolvable_wavenumbers(int n_cells) {
    // N independent modes; for even N the aliased pair (-N/2, N/2) is
    // represented by +N/2.
    std::vector<int> k;
    k.reserve(n_cells);
    for (int i = -(n_cells - 1) / 2; i <= n_cells / 2; ++i) k.push_back(i);
    return k;
}

CirculantSpectrum circulant_spectrum(int n_cells, double b0, double c) {
    const double dx = 1.0 / n_cells;
    CirculantSpectrum s;
    s.wavenumbers = resolvable_wavenumbers(n_cells);
    for (int k : s.wavenumbers) {
        s.lambda_mass.push_back(mass_eigenvalue(k, dx));
        s.lambda_stiffness.push_back(stiffness_eigenvalue(k, dx, b0, c));
        s.ratio.push_back(eigenvalue_ratio(k, dx, b0, c));
    }
    return s;
}

namespace {

Eigen::MatrixXcd periodic_scatter(int n_cells, const Eigen::MatrixXd& local) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_cells, n_cells);
    for (int cell = 0; cell < n_cells; ++cell) {
        const int g0 = cell;
        const int g1 = (cell + 1) % n_cells;
        m(g0, g0) += local(0, 0);
        m(g0, g1) += local(0, 1);
        m(g1, g0) += local(1, 0);
        m(g1, g1) += local(1, 1);
    }
    return m;
}

}  // namespace

Eigen::MatrixXcd periodic_mass_matrix(int n_cells) {
    const double dx = 1.0 / n_cells;
    return periodic_scatter(n_cells, dx * cell_mass_1d(make_basis(1)));
}

Eigen::MatrixXcd periodic_stiffness_matrix(int n_cells, double b0, double c) {
    const double dx = 1.0 / n_cells;
    const auto basis = make_basis(1);
    const Eigen::MatrixXd local =
        cell_stiffness_1d(basis) / dx + b0 * cell_advection_1d(basis) + c * dx * cell_mass_1d(basis);
    return periodic_scatter(n_cells, local);
}

Eigen::VectorXcd fourier_mode_vector(int k, int n_cells) {
    Eigen::VectorXcd v(n_cells);
    const double dx = 1.0 / n_cells;
    for (int j = 0; j < n_cells; ++j) v[j] = unit_mode(k, j * dx);
    return v;
}

std::function<Complex(double)> project_forcing(const std::function<Complex(Point2)>& f, int k,
                                               double dx, const QuadratureRule& rule) {
    const int n = cells_from_dx(dx);
    const double lambda_m = mass_eigenvalue(k, dx);
    // Endpoint mode values and quadrature abscissas are mode-independent of y;
    // precompute per cell.
    struct CellData {
        std::vector<double> x;
        std::vector<Complex> weight;  // w * dx * conj(F_k(x))
    };
    std::vector<CellData> cells(n);
    for (int c = 0; c < n; ++c) {
        const Complex e0 = std::conj(unit_mode(k, c * dx));
        const Complex e1 = std::conj(unit_mode(k, (c + 1) * dx));
        CellData data;
        for (int q = 0; q < rule.size(); ++q) {
            const double t = rule.points[q];
            data.x.push_back((c + t) * dx);
            data.weight.push_back(rule.weights[q] * dx * ((1.0 - t) * e0 + t * e1));
        }
        cells[c] = std::move(data);
    }
    const double scale = dx / lambda_m;
    return [cells = std::move(cells), f, scale](double y) {
        Complex integral = 0.0;
        for (const auto& cell : cells)
            for (std::size_t q = 0; q < cell.x.size(); ++q)
                integral += cell.weight[q] * f({cell.x[q], y});
        return scale * integral;
    };
}

Complex DecoupledSolution::evaluate(Point2 p, int y_order) const {
    Complex result = 0.0;
    for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
        const Complex fk = fourier_interpolant(wavenumbers[i], dx, p.x);
        result += fk * evaluate_solution(line_mesh, line_dofs, mode_coefficients[i], p.y, y_order);
    }
    return result;
}

DecoupledSolution decoupled_solve_2d(const TensorMesh2D& mesh, const Coefficients& coeff,
                                     const std::function<Complex(Point2)>& forcing,
                                     const std::function<Complex(Point2)>& boundary_values) {
    if (!mesh.periodic_x)
        throw std::invalid_argument("decoupled_solve_2d: mesh must be periodic in x");
    if (mesh.mode != RefinementMode::normal)
        throw std::invalid_argument("decoupled_solve_2d: normal refinement mode required");
    if (coeff.c.imag() != 0.0 || coeff.c.real() <= 0.0)
        throw std::invalid_argument("decoupled_solve_2d: c must be real and positive");
    for (const QuadCell& cell : mesh.quads.cells)
        if (cell.deg_x != 1)
            throw std::invalid_argument("decoupled_solve_2d: tangential degree must be 1");

    const int n = mesh.nx;
    const double dx = 1.0 / n;
    const double c = coeff.c.real();

    DecoupledSolution sol;
    sol.dx = dx;
    sol.line_mesh = build_mesh_1d(mesh.length_y, mesh.ny, 1, mesh.p);
    sol.line_dofs = enumerate_dofs(sol.line_mesh);
    sol.wavenumbers = resolvable_wavenumbers(n);

    // DFT of the Dirichlet vertex data on each nonperiodic side.
    std::vector<Complex> g_bottom(sol.wavenumbers.size(), 0.0);
    std::vector<Complex> g_top(sol.wavenumbers.size(), 0.0);
    if (boundary_values) {
        for (std::size_t i = 0; i < sol.wavenumbers.size(); ++i) {
            const int k = sol.wavenumbers[i];
            Complex b0{}, bL{};
            for (int j = 0; j < n; ++j) {
                const Complex phase = std::conj(unit_mode(k, j * dx));
                b0 += boundary_values({j * dx, 0.0}) * phase;
                bL += boundary_values({j * dx, mesh.length_y}) * phase;
            }
            g_bottom[i] = b0 / static_cast<double>(n);
            g_top[i] = bL / static_cast<double>(n);
        }
    }

    const QuadratureRule rule = gauss_rule(quadrature_points_for(1, 1));
    for (std::size_t i = 0; i < sol.wavenumbers.size(); ++i) {
        const int k = sol.wavenumbers[i];
        const Complex reaction = eigenvalue_ratio(k, dx, coeff.b0, c);
        const auto f_k = project_forcing(forcing, k, dx, rule);
        const Complex gb = g_bottom[i];
        const Complex gt = g_top[i];
        auto bc = [gb, gt, L = mesh.length_y](double y) { return (y < 0.5 * L) ? gb : gt; };
        ComplexLinearSystem system =
            assemble(sol.line_mesh, sol.line_dofs, coeff.b1, reaction,
                     [&](double y) { return f_k(y); },
                     boundary_values ? std::function<Complex(double)>(bc) : nullptr);
        sol.mode_coefficients.push_back(solve_direct(system));
    }
    return sol;
}

double decoupling_discrepancy(const TensorMesh2D& mesh, const Coefficients& coeff,
                              const std::function<Complex(Point2)>& forcing,
                              const std::function<Complex(Point2)>& boundary_values) {
    const DofSystem dofs = enumerate_dofs(mesh.quads);
    ComplexLinearSystem system = assemble(mesh.quads, dofs, coeff, forcing, boundary_values);
    Eigen::VectorXcd direct = solve_direct(system);
    distribute_constraints(dofs, direct);

    const DecoupledSolution sol = decoupled_solve_2d(mesh, coeff, forcing, boundary_values);

    // Synthesize at every dof node. All x-coordinates are grid vertices, and
    // the y-coordinates match the line mesh's node positions.
    double max_diff = 0.0;
    const double scale = direct.lpNorm<Eigen::Infinity>();
    for (int d = 0; d < dofs.total_dofs; ++d) {
        const Complex synth = sol.evaluate(dofs.positions[d]);
        max_diff = std::max(max_diff, std::abs(synth - direct[d]));
    }
    return max_diff / scale;
}

GreensOracle greens_build(double b, Complex c, double L, double dy) {
    if (c.real() <= 0.0) throw std::invalid_argument("greens_build: Re(c) must be positive");
    if (!(dy > 0.0 && dy < L)) throw std::invalid_argument("greens_build: need 0 < dy < L");

    GreensOracle g;
    g.b = b;
    g.c = c;
    g.length = L;
    g.cell_width = dy;
    g.D = std::sqrt(Complex(b * b, 0.0) + 4.0 * c) / 2.0;
    g.A1 = std::exp(0.5 * b * (L - dy));
    g.A2 = (L - dy) * g.D;

    const Complex sinh_DL = std::sinh(g.D * L);
    if (std::abs(sinh_DL) < 1e-300)
        throw std::runtime_error("greens_build: sinh(DL) vanished (inadmissible parameters)");
    const Complex cosh_DL = std::cosh(g.D * L);
    const Complex sinh_A2 = std::sinh(g.A2);
    const Complex cosh_A2 = std::cosh(g.A2);

    g.c1 = 0.0;
    g.c2 = -(cosh_A2 * sinh_DL - cosh_DL * sinh_A2) / (g.A1 * g.D * sinh_DL);
    g.c3 = -sinh_A2 / (g.A1 * g.D);
    g.c4 = cosh_DL * sinh_A2 / (g.A1 * g.D * sinh_DL);
    return g;
}

Complex greens_eval(const GreensOracle& g, double y, int order) {
    if (y < -1e-12 || y > g.length + 1e-12)
        throw std::invalid_argument("greens_eval: y outside [0, L]");
    // (ca cosh(Dy) + cb sinh(Dy)) e^{by/2} as a pair of pure exponentials.
    const bool left = y <= g.kink();
    const Complex ca = left ? g.c1 : g.c3;
    const Complex cb = left ? g.c2 : g.c4;
    const Complex amp_plus = 0.5 * (ca + cb);
    const Complex amp_minus = 0.5 * (ca - cb);
    const Complex rate_plus = 0.5 * g.b + g.D;
    const Complex rate_minus = 0.5 * g.b - g.D;
    return amp_plus * std::pow(rate_plus, order) * std::exp(rate_plus * y) +
           amp_minus * std::pow(rate_minus, order) * std::exp(rate_minus * y);
}

InequalityReport check_appendix_inequalities(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    InequalityReport report;
    report.samples = samples;
    const double slack = 1.0 + 1e-12;

    for (int s = 0; s < samples; ++s) {
        // Domain A: Re(D) >= 1, |Im(D)| <= Re(D), L >= 1, 0 < t <= L.
        const double re = 1.0 + 7.0 * uniform01(rng);
        const double im = re * (2.0 * uniform01(rng) - 1.0);
        const Complex D(re, im);
        const double L = 1.0 + 3.0 * uniform01(rng);
        const double t = L * std::max(uniform01(rng), 1e-12);

        if (std::abs((std::exp(-2.0 * D * t) - 1.0) / (2.0 * D)) > t * slack)
            report.decay_violations += 1;

        const Complex e2DL = std::exp(2.0 * D * L);
        const Complex e2Dt = std::exp(2.0 * D * t);
        if (std::abs((e2DL + e2Dt) / (e2DL - 1.0)) > 4.0 * slack ||
            std::abs((e2DL - e2Dt) / (e2DL - 1.0)) > 4.0 * slack)
            report.exp_ratio_violations += 1;

        const double y = (L - t) + t * uniform01(rng);  // admissible: L - t <= y <= L
        const Complex ea = std::exp(-D * (L + t - y));
        const Complex eb = std::exp(D * (L - t - y));
        if (std::abs((ea + eb) / (2.0 * D)) > slack / std::abs(D) ||
            std::abs((ea - eb) / (2.0 * D)) > slack / std::abs(D))
            report.exp_pair_violations += 1;

        // Domain B: z = a + b i with a > 0, |b| <= a.
        const double a = 30.0 * std::max(uniform01(rng), 1e-12);
        const double bi = a * (2.0 * uniform01(rng) - 1.0);
        const Complex z(a, bi);
        if (std::abs(std::exp(z) / std::sinh(z)) > (2.0 + 2.0 / std::abs(z)) * slack)
            report.exp_sinh_violations += 1;
    }
    return report;
}

SpectralCheckReport run_spectral_checks(const std::vector<int>& cell_counts, double b0, double c) {
    SpectralCheckReport report;
    const QuadratureRule dense_rule = gauss_rule(24);

    for (int n : cell_counts) {
        const double dx = 1.0 / n;
        const Eigen::MatrixXcd mass = periodic_mass_matrix(n);
        const Eigen::MatrixXcd stiff = periodic_stiffness_matrix(n, b0, c);
        // Sharp range of Re(lambda_k): [c, c + 12/dx^2], attained at k = 0 and
        // k = N/2 (Re is monotone in cos(2 pi dx k)).
        const double upper = c + 12.0 / (dx * dx);

        for (int k : resolvable_wavenumbers(n)) {
            const Eigen::VectorXcd v = fourier_mode_vector(k, n);
            const double em =
                (mass * v - mass_eigenvalue(k, dx) * v).lpNorm<Eigen::Infinity>();
            const double ea =
                (stiff * v - stiffness_eigenvalue(k, dx, b0, c) * v).lpNorm<Eigen::Infinity>();
            report.max_eigen_identity_error = std::max({report.max_eigen_identity_error, em, ea});

            const Complex ratio = eigenvalue_ratio(k, dx, b0, c);
            if (ratio.real() < c - 1e-12 * c || ratio.real() > upper * (1.0 + 1e-12))
                report.ratio_bounds_hold = false;
        }

        // L2 orthogonality of the interpolants: (F_j, F_k) = delta_jk lambda_M / dx.
        const auto ks = resolvable_wavenumbers(n);
        for (int j : ks) {
            for (int k : ks) {
                Complex integral = 0.0;
                for (int cell = 0; cell < n; ++cell)
                    for (int q = 0; q < dense_rule.size(); ++q) {
                        const double x = (cell + dense_rule.points[q]) * dx;
                        integral += dense_rule.weights[q] * dx * fourier_interpolant(j, dx, x) *
                                    std::conj(fourier_interpolant(k, dx, x));
                    }
                const Complex expected = (j == k) ? Complex(mass_eigenvalue(k, dx) / dx) : Complex(0.0);
                report.max_l2_orthogonality_error =
                    std::max(report.max_l2_orthogonality_error, std::abs(integral - expected));
            }
        }

        // Lemma-style orthogonality against the analytic modes, including the
        // aliasing cases k = k' + j N.
        for (int k = -n - n / 2; k <= n + n / 2; ++k) {
            for (int kp = -n / 2; kp <= n / 2; ++kp) {
                Complex integral = 0.0;
                for (int cell = 0; cell < n; ++cell)
                    for (int q = 0; q < dense_rule.size(); ++q) {
                        const double x = (cell + dense_rule.points[q]) * dx;
                        integral += dense_rule.weights[q] * dx * fourier_interpolant(k, dx, x) *
                                    std::polar(1.0, -kTwoPi * kp * x);
                    }
                Complex expected = 0.0;
                if ((k - kp) % n == 0) {
                    if (kp == 0)
                        expected = 1.0;
                    else {
                        const double s = std::sin(M_PI * kp * dx);
                        expected = s * s / (M_PI * M_PI * kp * kp * dx * dx);
                    }
                }
                report.max_mode_orthogonality_error =
                    std::max(report.max_mode_orthogonality_error, std::abs(integral - expected));
            }
        }
    }
    return report;
}

}  // namespace bflux
