#ifndef QPWAVE_QUADRATURE_HPP
#define QPWAVE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace qpwave::quadrature {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule, cached per order.
const GaussLegendreRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre estimate of the integral of f over [lo, hi].
double integrate_fixed(const std::function<double(double)>& f, double lo, double hi, int order);

/// Order-doubling Gauss-Legendre integration: orders 16, 32, ... until the
/// relative change between successive estimates is <= rel_tol. Throws
/// ConvergenceError if the order would exceed max_order.
double integrate_doubling(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol = 1e-11, int max_order = 4096);

}  // namespace qpwave::quadrature

#endif  // QPWAVE_QUADRATURE_HPP
