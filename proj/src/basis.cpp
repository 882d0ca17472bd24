#include "bflux/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace bflux {

ReferenceBasis1D::ReferenceBasis1D(int degree) : degree_(degree) {
    if (degree < 1)
        throw std::invalid_argument("ReferenceBasis1D: degree must be >= 1");
    if (degree > kMaxBasisDegree)
        throw std::invalid_argument("ReferenceBasis1D: degree exceeds supported maximum of 8");

    nodes_.resize(degree + 1);
    for (int j = 0; j <= degree; ++j)
        nodes_[j] = static_cast<double>(j) / degree;

    bary_weights_.resize(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        double w = 1.0;
        for (int k = 0; k <= degree; ++k)
            if (k != j) w *= nodes_[j] - nodes_[k];
        bary_weights_[j] = 1.0 / w;
    }

    // Expand each l_j = prod_{k != j} (x - x_k)/(x_j - x_k) into monomials.
    monomial_.assign(degree + 1, {});
    for (int j = 0; j <= degree; ++j) {
        std::vector<double> poly{1.0};
        for (int k = 0; k <= degree; ++k) {
            if (k == j) continue;
            const double scale = 1.0 / (nodes_[j] - nodes_[k]);
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i] * scale;
                next[i] -= poly[i] * nodes_[k] * scale;
            }
            poly = std::move(next);
        }
        monomial_[j] = std::move(poly);
    }
}

double ReferenceBasis1D::value(int j, double xi) const {
    if (j < 0 || j > degree_)
        throw std::out_of_range("ReferenceBasis1D::value: basis index out of range");
    // At (or numerically on top of) a node the Kronecker property is exact.
    for (int i = 0; i <= degree_; ++i)
        if (std::abs(xi - nodes_[i]) < 1e-14) return i == j ? 1.0 : 0.0;

    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k <= degree_; ++k) {
        const double t = bary_weights_[k] / (xi - nodes_[k]);
        den += t;
        if (k == j) num = t;
    }
    return num / den;
}

double ReferenceBasis1D::derivative(int j, double xi, int order) const {
    if (j < 0 || j > degree_)
        throw std::out_of_range("ReferenceBasis1D::derivative: basis index out of range");
    if (order < 0)
        throw std::invalid_argument("ReferenceBasis1D::derivative: order must be >= 0");
    if (order == 0) return value(j, xi);
    if (order > degree_) return 0.0;

    // Horner on the order-times differentiated coefficients.
    const std::vector<double>& c = monomial_[j];
    double result = 0.0;
    for (int i = degree_; i >= order; --i) {
        double falling = 1.0;
        for (int q = 0; q < order; ++q) falling *= static_cast<double>(i - q);
        result = result * xi + c[i] * falling;
    }
    return result;
}

ReferenceBasis1D make_basis(int degree) { return ReferenceBasis1D(degree); }

namespace {

// P_n and P_n' on [-1, 1] via the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
    if (n == 0) return {1.0, 0.0};
    double p0 = 1.0;
    double p1 = x;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

QuadratureRule gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: n must be >= 1");

    std::vector<double> t(n);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 64; ++it) {
            const auto [p, dp] = legendre_pair(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [p, dp] = legendre_pair(n, x);
        (void)p;
        t[i] = x;
        w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }

    // Symmetrize so that mirrored points/weights match exactly (and n = 1
    // lands on 0.5 after mapping).
    for (int i = 0; i < n / 2; ++i) {
        const double ts = 0.5 * (t[i] - t[n - 1 - i]);
        t[i] = ts;
        t[n - 1 - i] = -ts;
        const double ws = 0.5 * (w[i] + w[n - 1 - i]);
        w[i] = ws;
        w[n - 1 - i] = ws;
    }
    if (n % 2 == 1) t[n / 2] = 0.0;

    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // t descends on [-1, 1]; store ascending on [0, 1].
        rule.points[n - 1 - i] = 0.5 * (1.0 + t[i]);
        rule.weights[n - 1 - i] = 0.5 * w[i];
    }
    return rule;
}

int quadrature_points_for(int trial_degree, int test_degree) {
    const int s = trial_degree + test_degree + 2;
    return (s + 1) / 2 + 1;
}

}  // namespace bflux
