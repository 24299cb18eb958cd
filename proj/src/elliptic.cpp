#include "qpwave/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qpwave/errors.hpp"

namespace qpwave::elliptic {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxAgmIter = 64;

void require_modulus_open(double k) {
    if (!(k > 0.0 && k < 1.0)) {
        throw DomainError("elliptic modulus k must lie in (0,1), got k=" + std::to_string(k));
    }
}

}  // namespace

double complete_k(double k) {
    require_modulus_open(k);
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));  // k' without cancellation
    for (int i = 0; i < kMaxAgmIter; ++i) {
        if (std::abs(a - b) <= std::numeric_limits<double>::epsilon() * a) break;
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (2.0 * a);
}

double complete_e(double k) {
    if (!(k >= 0.0 && k <= 1.0)) {
        throw DomainError("elliptic modulus k must lie in [0,1], got k=" + std::to_string(k));
    }
    if (k == 0.0) return kPi / 2.0;
    if (k == 1.0) return 1.0;
    // E = K * (1 - sum_{n>=0} 2^{n-1} c_n^2), c_0 = k, c_{n+1} = (a_n - b_n)/2.
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    double sum = 0.5 * k * k;
    double pow2 = 1.0;  // 2^{n-1} for the c_{n} term produced in iteration n-1
    for (int i = 0; i < kMaxAgmIter; ++i) {
        const double c = 0.5 * (a - b);
        sum += pow2 * c * c;
        if (std::abs(a - b) <= std::numeric_limits<double>::epsilon() * a) break;
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
    }
    const double big_k = kPi / (2.0 * a);
    return big_k * (1.0 - sum);
}

JacobiValues jacobi_scd(double x, double k) {
    require_modulus_open(k);
    if (!std::isfinite(x)) {
        throw DomainError("jacobi_scd requires finite argument");
    }
    // Descending AGM: a_0 = 1, b_0 = k'. Record the ratios c_n/a_n, then
    // recover the amplitude by the backward recursion
    //   phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2,
    // starting from phi_N = 2^N a_N x. Recursion depth runs until the
    // residual modulus c_n/a_n drops below 1e-14.
    std::array<double, kMaxAgmIter> ratio{};
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    int n = 0;
    while (n < kMaxAgmIter) {
        const double c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        ratio[static_cast<std::size_t>(n)] = c / an;  // c_{n+1} / a_{n+1}
        a = an;
        b = bn;
        ++n;
        if (c <= 1e-14 * an) break;
    }
    double phi = std::ldexp(a * x, n);  // phi_N = 2^N a_N x
    double phi_prev = phi;
    for (int i = n - 1; i >= 0; --i) {
        const double s = ratio[static_cast<std::size_t>(i)] * std::sin(phi);
        const double next = 0.5 * (phi + std::asin(std::clamp(s, -1.0, 1.0)));
        phi_prev = phi;
        phi = next;
    }
    JacobiValues v;
    v.sn = std::sin(phi);
    v.cn = std::cos(phi);
    // dn = cos(phi_0)/cos(phi_1 - phi_0); that ratio is 0/0 where cn
    // vanishes, so switch to sqrt((1 - k sn)(1 + k sn)) there.
    if (std::abs(v.cn) > 0.5) {
        v.dn = v.cn / std::cos(phi_prev - phi);
    } else {
        v.dn = std::sqrt((1.0 - k * v.sn) * (1.0 + k * v.sn));
    }
    return v;
}

namespace detail {

double carlson_rf(double x, double y, double z) {
    // Carlson 1995, duplication algorithm.
    const double tol = 1e-17;
    double a0 = (x + y + z) / 3.0;
    double q = std::pow(3.0 * tol, -1.0 / 8.0) *
               std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double an = a0, xn = x, yn = y, zn = z, mul = 1.0;
    while (q >= mul * std::abs(an)) {
        const double lam = std::sqrt(xn) * std::sqrt(yn) + std::sqrt(yn) * std::sqrt(zn) +
                           std::sqrt(zn) * std::sqrt(xn);
        an = 0.25 * (an + lam);
        xn = 0.25 * (xn + lam);
        yn = 0.25 * (yn + lam);
        zn = 0.25 * (zn + lam);
        mul *= 4.0;
    }
    const double bx = (a0 - x) / (mul * an);
    const double by = (a0 - y) / (mul * an);
    const double bz = -(bx + by);
    const double e2 = bx * by - bz * bz;
    const double e3 = bx * by * bz;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
           std::sqrt(an);
}

double carlson_rd(double x, double y, double z) {
    const double tol = 1e-17;
    double a0 = (x + y + 3.0 * z) / 5.0;
    double q = std::pow(0.25 * tol, -1.0 / 8.0) *
               std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double an = a0, xn = x, yn = y, zn = z, mul = 1.0, sum = 0.0;
    while (q >= mul * std::abs(an)) {
        const double sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
        const double lam = sx * sy + sy * sz + sz * sx;
        sum += 1.0 / (mul * sz * (zn + lam));
        an = 0.25 * (an + lam);
        xn = 0.25 * (xn + lam);
        yn = 0.25 * (yn + lam);
        zn = 0.25 * (zn + lam);
        mul *= 4.0;
    }
    const double bx = (a0 - x) / (mul * an);
    const double by = (a0 - y) / (mul * an);
    const double bz = -(bx + by) / 3.0;
    const double e2 = bx * by - 6.0 * bz * bz;
    const double e3 = (3.0 * bx * by - 8.0 * bz * bz) * bz;
    const double e4 = 3.0 * (bx * by - bz * bz) * bz * bz;
    const double e5 = bx * by * bz * bz * bz;
    const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                          3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
    return 3.0 * sum + series / (mul * an * std::sqrt(an));
}

double incomplete_f(double phi, double k) {
    if (!(k >= 0.0 && k < 1.0)) {
        throw DomainError("incomplete_f requires 0 <= k < 1");
    }
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
}

double incomplete_e(double phi, double k) {
    if (!(k >= 0.0 && k < 1.0)) {
        throw DomainError("incomplete_e requires 0 <= k < 1");
    }
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double s3 = s * s * s;
    const double y = 1.0 - k * k * s * s;
    return s * carlson_rf(c * c, y, 1.0) - (k * k / 3.0) * s3 * carlson_rd(c * c, y, 1.0);
}

}  // namespace detail

}  // namespace qpwave::elliptic
