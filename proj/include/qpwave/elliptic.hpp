#ifndef QPWAVE_ELLIPTIC_HPP
#define QPWAVE_ELLIPTIC_HPP

namespace qpwave::elliptic {

/// Complete elliptic integral of the first kind K(k), computed by the
/// arithmetic-geometric mean. Requires 0 < k < 1; K is strictly increasing
/// with K(0+) = pi/2 and K(k) -> infinity as k -> 1.
double complete_k(double k);

/// Complete elliptic integral of the second kind E(k), computed by the AGM
/// with the c_n correction sum. Requires 0 <= k <= 1; E is strictly
/// decreasing with E(0) = pi/2 and E(1) = 1.
double complete_e(double k);

struct JacobiValues {
    double sn;
    double cn;
    double dn;
};

/// Jacobi elliptic functions sn, cn, dn at argument x and modulus k,
/// 0 < k < 1, via the descending AGM/Landen recursion for the amplitude.
/// The endpoint moduli are rejected: every consumer here uses k strictly
/// inside (0,1).
JacobiValues jacobi_scd(double x, double k);

namespace detail {

// Incomplete integrals, internal helpers only (Carlson symmetric forms).
// phi in [-pi/2, pi/2], 0 <= k < 1.
double incomplete_f(double phi, double k);
double incomplete_e(double phi, double k);

// Carlson R_F and R_D, exposed for cross-checks.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

}  // namespace detail

}  // namespace qpwave::elliptic

#endif  // QPWAVE_ELLIPTIC_HPP
