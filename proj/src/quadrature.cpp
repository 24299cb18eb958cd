#include "qpwave/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "qpwave/errors.hpp"

namespace qpwave::quadrature {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Roots of the Legendre polynomial by Newton iteration on the recurrence.
GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < std::numeric_limits<double>::epsilon()) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_rule(n)).first;
    }
    return it->second;
}

double integrate_fixed(const std::function<double(double)>& f, double lo, double hi, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

double integrate_doubling(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_order) {
    int order = 16;
    double prev = integrate_fixed(f, lo, hi, order);
    while (order < max_order) {
        order *= 2;
        const double cur = integrate_fixed(f, lo, hi, order);
        const double scale = std::max(std::abs(cur), std::numeric_limits<double>::min());
        if (std::abs(cur - prev) <= rel_tol * scale) {
            return cur;
        }
        prev = cur;
    }
    throw ConvergenceError("Gauss-Legendre order doubling failed to converge by order " +
                           std::to_string(max_order));
}

}  // namespace qpwave::quadrature
