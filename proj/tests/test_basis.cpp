#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bflux/basis.hpp"

using bflux::ReferenceBasis1D;
using bflux::gauss_rule;
using bflux::make_basis;

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Root-finding oracle: bisect sign changes of P_n on [-1, 1], independent of
// the Newton iteration inside gauss_rule.
double legendre_value(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return p0;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> legendre_roots_bisection(int n) {
    std::vector<double> roots;
    const int grid = 4000;
    double prev_x = -1.0;
    double prev_v = legendre_value(n, prev_x);
    for (int i = 1; i <= grid; ++i) {
        const double x = -1.0 + 2.0 * i / grid;
        const double v = legendre_value(n, x);
        if (prev_v == 0.0) roots.push_back(prev_x);
        if (prev_v * v < 0.0) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double vm = legendre_value(n, m);
                if (legendre_value(n, a) * vm <= 0.0)
                    b = m;
                else
                    a = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

}  // namespace

TEST_CASE("equispaced nodes and Kronecker property") {
    for (int m = 1; m <= 8; ++m) {
        const auto basis = make_basis(m);
        REQUIRE(basis.node_count() == m + 1);
        CHECK(basis.nodes().front() == 0.0);
        CHECK(basis.nodes().back() == 1.0);
        for (int j = 0; j < m; ++j) CHECK(basis.nodes()[j] < basis.nodes()[j + 1]);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m; ++j)
                CHECK(basis.value(j, basis.nodes()[i]) == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("degree 1 hat functions") {
    const auto basis = make_basis(1);
    CHECK(basis.value(0, 0.3) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(basis.value(1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    // Constant slope.
    for (double xi : {0.0, 0.3, 0.77, 1.0}) CHECK(basis.derivative(1, xi, 1) == doctest::Approx(1.0));
}

TEST_CASE("degree 2 midpoint bump") {
    const auto basis = make_basis(2);
    CHECK(basis.value(1, 0.5) == 1.0);
    CHECK(basis.value(1, 0.0) == 0.0);
    CHECK(basis.value(1, 1.0) == 0.0);
    // l_1 = 4 xi (1 - xi), so the second derivative is -8 everywhere.
    for (double xi : {0.0, 0.21, 0.5, 1.0}) CHECK(basis.derivative(1, xi, 2) == doctest::Approx(-8.0));
}

TEST_CASE("partition of unity is exact at arbitrary points") {
    std::mt19937_64 rng(7);
    for (int m = 1; m <= 8; ++m) {
        const auto basis = make_basis(m);
        double s = 0.0;
        for (int j = 0; j <= m; ++j) s += basis.value(j, 0.37);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        for (int rep = 0; rep < 20; ++rep) {
            const double xi = uniform01(rng);
            double sum = 0.0;
            for (int j = 0; j <= m; ++j) sum += basis.value(j, xi);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("interpolation reproduces polynomials up to the basis degree") {
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 8; ++m) {
        const auto basis = make_basis(m);
        // Random polynomial q of degree m as monomial coefficients.
        std::vector<double> q(m + 1);
        for (double& c : q) c = 2.0 * uniform01(rng) - 1.0;
        auto eval_q = [&](double x) {
            double r = 0.0;
            for (int i = m; i >= 0; --i) r = r * x + q[i];
            return r;
        };
        for (int rep = 0; rep < 50; ++rep) {
            const double x = uniform01(rng);
            double interp = 0.0;
            for (int j = 0; j <= m; ++j) interp += eval_q(basis.nodes()[j]) * basis.value(j, x);
            CHECK(interp == doctest::Approx(eval_q(x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("first derivatives match central differences") {
    std::mt19937_64 rng(13);
    const double h = 1e-6;
    for (int m = 1; m <= 6; ++m) {
        const auto basis = make_basis(m);
        for (int j = 0; j <= m; ++j) {
            for (int rep = 0; rep < 10; ++rep) {
                const double x = uniform01(rng);
                const double fd = (basis.value(j, x + h) - basis.value(j, x - h)) / (2.0 * h);
                CHECK(std::abs(basis.derivative(j, x, 1) - fd) < 1e-5);
            }
        }
    }
}

TEST_CASE("degree 3 endpoint derivative against finite differences") {
    const auto basis = make_basis(3);
    const double h = 1e-6;
    const double fd = (basis.value(0, h) - basis.value(0, -h)) / (2.0 * h);
    const double exact = basis.derivative(0, 0.0, 1);
    CHECK(std::abs(exact - fd) <= 1e-6 * std::abs(exact));
}

TEST_CASE("derivative order above the degree vanishes") {
    const auto basis = make_basis(4);
    for (int j = 0; j <= 4; ++j) CHECK(basis.derivative(j, 0.3, 5) == 0.0);
}

TEST_CASE("degree 0 is rejected") {
    CHECK_THROWS_AS(make_basis(0), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(-2), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(9), std::invalid_argument);
}

TEST_CASE("empty quadrature rules are rejected") {
    CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_rule(-3), std::invalid_argument);
}

TEST_CASE("one point rule is the midpoint") {
    const auto rule = gauss_rule(1);
    REQUIRE(rule.size() == 1);
    CHECK(rule.points[0] == 0.5);
    CHECK(rule.weights[0] == 0.5 * 2.0);
}

TEST_CASE("two point rule integrates x^3 exactly") {
    const auto rule = gauss_rule(2);
    double integral = 0.0;
    for (int q = 0; q < rule.size(); ++q)
        integral += rule.weights[q] * std::pow(rule.points[q], 3);
    CHECK(integral == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("quadrature exactness for all monomials up to 2n-1") {
    for (int n = 1; n <= 12; ++n) {
        const auto rule = gauss_rule(n);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double integral = 0.0;
            for (int q = 0; q < rule.size(); ++q)
                integral += rule.weights[q] * std::pow(rule.points[q], k);
            CHECK(std::abs(integral - 1.0 / (k + 1)) < 1e-12);
        }
    }
}

TEST_CASE("five point rule nodes are the Legendre roots") {
    const auto rule = gauss_rule(5);
    const auto roots = legendre_roots_bisection(5);
    REQUIRE(roots.size() == 5);
    for (int i = 0; i < 5; ++i) {
        const double mapped = 0.5 * (1.0 + roots[i]);
        CHECK(std::abs(rule.points[i] - mapped) < 1e-12);
    }
}

TEST_CASE("assembly point-count rule") {
    CHECK(bflux::quadrature_points_for(1, 1) == 3);
    CHECK(bflux::quadrature_points_for(3, 3) == 5);
    CHECK(bflux::quadrature_points_for(1, 2) == 4);  // ceil(5/2) + 1
}
