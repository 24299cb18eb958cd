#include "qpwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qpwave/elliptic.hpp"
#include "qpwave/errors.hpp"
#include "qpwave/quadrature.hpp"

namespace qpwave::profile {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

// Relative tolerance for "on the boundary" classification decisions.
constexpr double kBoundaryTol = 1e-12;

// Double-root cutoff below which the quadrature is replaced by the
// plane-wave closed forms (the integrand curvature blows up there and the
// limit is known exactly).
constexpr double kPlaneWaveRootGap = 1e-10;

bool nearly(double x, double y) {
    return std::abs(x - y) <= kBoundaryTol * std::max({1.0, std::abs(x), std::abs(y)});
}

double reduce_to_two_pi(double theta_raw) {
    double t = std::fmod(theta_raw, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t = 0.0;
    return t;
}

// J as a function of the critical-radius parametrization value.
double j_of_q(const ProblemParams& p, double q) {
    return q * (q * q - p.a) / p.b;
}

double j_max_defocusing(const ProblemParams& p) {
    return std::sqrt((4.0 / 27.0) * p.a * p.a * p.a / (p.b * p.b));
}

// Monotone bisection for j_of_q(q) = j on [lo, hi], then a Newton polish.
double solve_q(const ProblemParams& p, double lo, double hi, bool increasing) {
    double a = lo, b = hi;
    for (int i = 0; i < 200 && (b - a) > std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b)); ++i) {
        const double mid = 0.5 * (a + b);
        const double val = j_of_q(p, mid);
        const bool below = increasing ? (val < p.j) : (val > p.j);
        (below ? a : b) = mid;
    }
    double q = 0.5 * (a + b);
    for (int i = 0; i < 2; ++i) {
        const double deriv = (3.0 * q * q - p.a) / p.b;
        if (std::abs(deriv) < 1e-30) break;
        q -= (j_of_q(p, q) - p.j) / deriv;
    }
    q = std::clamp(q, lo, hi);
    if (std::abs(j_of_q(p, q) - p.j) > 1e-12 * std::max(1.0, p.j)) {
        throw ConvergenceError("q_branches: parametrization residual too large");
    }
    return q;
}

struct PhiIntegrands {
    // S(phi) = y1 + (y2 - y1) sin^2(phi); b (S - y3) is positive on (0, pi/2)
    // in all cases by the root ordering.
    CubicRoots roots;
    double b;

    double s(double phi) const {
        const double sn = std::sin(phi);
        return roots.y1 + (roots.y2 - roots.y1) * sn * sn;
    }
    double weight(double phi) const { return std::sqrt(b * (s(phi) - roots.y3)); }
};

struct QuadratureValues {
    double period;
    double theta_raw;
    double mass;
};

QuadratureValues integrate_profile_quantities(const ProblemParams& p, const CubicRoots& roots) {
    const PhiIntegrands f{roots, p.b};
    QuadratureValues out;
    out.period = quadrature::integrate_doubling(
        [&](double phi) { return 2.0 * kSqrt2 / f.weight(phi); }, 0.0, kPi / 2.0);
    out.mass = quadrature::integrate_doubling(
        [&](double phi) { return kSqrt2 * f.s(phi) / f.weight(phi); }, 0.0, kPi / 2.0);
    if (p.j > 0.0) {
        out.theta_raw = quadrature::integrate_doubling(
            [&](double phi) { return -2.0 * kSqrt2 * p.j / (f.s(phi) * f.weight(phi)); }, 0.0,
            kPi / 2.0);
    } else {
        out.theta_raw = 0.0;
    }
    return out;
}

// Plane-wave closed forms on E = E_-: T = pi sqrt(2)/sqrt(3Q^2 - a),
// theta = -Q T, mass = r_Q^2 T / 2, momentum = Q mass.
ProfileData plane_wave_data(const ProblemParams& p, DomainClass cls) {
    const QBranches qb = q_branches(p);
    const double q = qb.big_q;
    const double denom = 3.0 * q * q - p.a;
    if (denom <= 1e-14 * std::max(1.0, std::abs(p.a))) {
        throw ClassificationError(
            "degenerate plane wave at the inflection point has no finite fundamental period");
    }
    const double rq2 = (q * q - p.a) / p.b;
    ProfileData data;
    data.params = p;
    data.cls = cls;
    data.r1 = data.r2 = std::sqrt(rq2);
    data.period = kPi * kSqrt2 / std::sqrt(denom);
    data.theta_raw = -q * data.period;
    data.theta = reduce_to_two_pi(data.theta_raw);
    data.mass = 0.5 * rq2 * data.period;
    data.momentum = q * data.mass;
    return data;
}

double canonical_family_mass(Family family, double k) {
    const double big_k = elliptic::complete_k(k);
    const double big_e = elliptic::complete_e(k);
    switch (family) {
        case Family::Dn: return big_e;
        case Family::Cn: return (big_e - (1.0 - k * k) * big_k) / (k * k);
        case Family::Sn: return (big_k - big_e) / (k * k);
        default: throw ClassificationError("no canonical mass for this family");
    }
}

ProfileData real_family_data(const ProblemParams& p, DomainClass cls) {
    const FamilyScaling sc = real_family_scaling(p);
    const double big_k = elliptic::complete_k(sc.k);
    ProfileData data;
    data.params = p;
    data.cls = cls;
    data.scaling = sc;
    data.period = 2.0 * big_k * sc.beta;
    data.theta_raw = (cls.family == Family::Dn) ? 0.0 : kPi;
    data.theta = reduce_to_two_pi(data.theta_raw);
    data.mass = sc.beta / (sc.alpha * sc.alpha) * canonical_family_mass(cls.family, sc.k);
    data.momentum = 0.0;
    const double kp = std::sqrt((1.0 - sc.k) * (1.0 + sc.k));
    data.r1 = (cls.family == Family::Dn) ? kp / sc.alpha : 0.0;
    data.r2 = 1.0 / sc.alpha;
    return data;
}

// Monotone bisection for the family-energy inversion on k in (lo, hi).
double bisect_modulus(const std::function<double(double)>& energy, double target, double lo,
                      double hi, bool increasing) {
    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        const bool below = increasing ? (energy(mid) < target) : (energy(mid) > target);
        (below ? a : b) = mid;
        if (b - a <= std::numeric_limits<double>::epsilon() * b) break;
    }
    return 0.5 * (a + b);
}

}  // namespace

void ProblemParams::validate() const {
    if (b == 0.0 || !std::isfinite(b)) throw DomainError("nonlinearity coefficient b must be finite and nonzero");
    if (!(j >= 0.0) || !std::isfinite(j)) throw DomainError("angular momentum J must be finite and >= 0");
    if (!std::isfinite(a) || !std::isfinite(e)) throw DomainError("parameters must be finite");
}

double potential(const ProblemParams& params, double r) {
    params.validate();
    if (!(r > 0.0)) throw DomainError("potential requires r > 0");
    const double r2 = r * r;
    return params.j * params.j / (2.0 * r2) + params.a * r2 / 2.0 + params.b * r2 * r2 / 4.0;
}

QBranches q_branches(const ProblemParams& params) {
    params.validate();
    QBranches out;
    if (params.b < 0.0) {
        if (params.a <= 0.0) {
            throw ClassificationError("defocusing case requires a > 0 for bounded solutions");
        }
        const double jmax = j_max_defocusing(params);
        if (params.j > jmax * (1.0 + kBoundaryTol)) {
            throw ClassificationError("no bounded solution: J exceeds sqrt(4 a^3 / 27 b^2)");
        }
        const double q_infl = std::sqrt(params.a / 3.0);
        if (nearly(params.j, jmax)) {
            out.big_q = q_infl;
            out.small_q = q_infl;
            return out;
        }
        out.big_q = solve_q(params, q_infl, std::sqrt(params.a), /*increasing=*/false);
        out.small_q = solve_q(params, 0.0, q_infl, /*increasing=*/true);
        return out;
    }
    // Focusing: J = Q (Q^2 - a)/b is increasing on [max(sqrt(a),0), inf).
    const double lo = params.a > 0.0 ? std::sqrt(params.a) : 0.0;
    double hi = std::max(lo + 1.0, 1.0);
    while (j_of_q(params, hi) < params.j) hi *= 2.0;
    out.big_q = solve_q(params, lo, hi, /*increasing=*/true);
    return out;
}

double e_minus(const ProblemParams& params) {
    const QBranches qb = q_branches(params);
    const double q2 = qb.big_q * qb.big_q;
    return (q2 - params.a) * (3.0 * q2 + params.a) / (4.0 * params.b);
}

double e_plus(const ProblemParams& params) {
    if (params.b > 0.0) throw DomainError("E_+ exists only in the defocusing case (b < 0)");
    const QBranches qb = q_branches(params);
    if (!qb.small_q) throw ClassificationError("E_+ requires the q branch");
    const double q2 = *qb.small_q * *qb.small_q;
    return (q2 - params.a) * (3.0 * q2 + params.a) / (4.0 * params.b);
}

DomainClass classify(const ProblemParams& params) {
    params.validate();
    const double b = params.b, a = params.a, j = params.j, e = params.e;
    if (j == 0.0) {
        if (b < 0.0) {
            if (a <= 0.0) {
                return nearly(e, 0.0) ? DomainClass{Region::RealLineJ0, Family::ConstantZero}
                                      : DomainClass{Region::NoBoundedSolution, Family::None};
            }
            const double ecrit = -a * a / (4.0 * b);
            if (nearly(e, 0.0)) return {Region::RealLineJ0, Family::ConstantZero};
            if (nearly(e, ecrit)) return {Region::RealLineJ0, Family::Heteroclinic};
            if (e > 0.0 && e < ecrit) return {Region::RealLineJ0, Family::Sn};
            return {Region::NoBoundedSolution, Family::None};
        }
        if (a >= 0.0) {
            if (nearly(e, 0.0)) return {Region::RealLineJ0, Family::ConstantZero};
            if (e > 0.0) return {Region::RealLineJ0, Family::Cn};
            return {Region::NoBoundedSolution, Family::None};
        }
        const double ecrit = -a * a / (4.0 * b);  // < 0
        if (nearly(e, ecrit)) return {Region::RealLineJ0, Family::ConstantNontrivial};
        if (nearly(e, 0.0)) return {Region::RealLineJ0, Family::Homoclinic};
        if (e > 0.0) return {Region::RealLineJ0, Family::Cn};
        if (e > ecrit) return {Region::RealLineJ0, Family::Dn};
        return {Region::NoBoundedSolution, Family::None};
    }
    if (b < 0.0) {
        if (a <= 0.0) return {Region::NoBoundedSolution, Family::None};
        const double jmax = j_max_defocusing(params);
        if (j > jmax * (1.0 + kBoundaryTol)) return {Region::NoBoundedSolution, Family::None};
        if (nearly(j, jmax)) {
            const double einfl = -a * a / (3.0 * b);
            return nearly(e, einfl) ? DomainClass{Region::OnEminus, Family::None}
                                    : DomainClass{Region::NoBoundedSolution, Family::None};
        }
        const double em = e_minus(params);
        const double ep = e_plus(params);
        if (nearly(e, em)) return {Region::OnEminus, Family::None};
        if (nearly(e, ep)) return {Region::OnEplus, Family::None};
        if (e > em && e < ep) return {Region::InsideD1, Family::None};
        return {Region::NoBoundedSolution, Family::None};
    }
    const double em = e_minus(params);
    if (nearly(e, em)) return {Region::OnEminus, Family::None};
    if (e > em) {
        return a >= 0.0 ? DomainClass{Region::InsideD2, Family::None}
                        : DomainClass{Region::InsideD3, Family::None};
    }
    return {Region::NoBoundedSolution, Family::None};
}

CubicRoots cubic_roots(const ProblemParams& params) {
    const DomainClass cls = classify(params);
    if (cls.region != Region::InsideD1 && cls.region != Region::InsideD2 &&
        cls.region != Region::InsideD3) {
        throw ClassificationError("cubic_roots requires (J,E) strictly inside D1, D2 or D3");
    }
    // Monic form y^3 + c2 y^2 + c1 y + c0 = 0 of Pi(y)/(-b).
    const double c2 = 2.0 * params.a / params.b;
    const double c1 = -4.0 * params.e / params.b;
    const double c0 = 2.0 * params.j * params.j / params.b;
    // Depressed cubic t^3 + p t + q, y = t - c2/3. Three real roots inside
    // the domains, via the trigonometric form.
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    if (!(p < 0.0)) {
        throw ConvergenceError("cubic_roots: expected three real roots (p < 0)");
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg);
    double y[3];
    for (int i = 0; i < 3; ++i) {
        y[i] = m * std::cos((phi - 2.0 * kPi * i) / 3.0) - c2 / 3.0;
    }
    // Two Newton steps on Pi itself, skipped near double roots where the
    // derivative degenerates.
    const auto pi_poly = [&](double yy) {
        return -params.b * yy * yy * yy - 2.0 * params.a * yy * yy + 4.0 * params.e * yy -
               2.0 * params.j * params.j;
    };
    const auto pi_deriv = [&](double yy) {
        return -3.0 * params.b * yy * yy - 4.0 * params.a * yy + 4.0 * params.e;
    };
    for (double& yi : y) {
        for (int step = 0; step < 2; ++step) {
            const double d = pi_deriv(yi);
            const double dscale = std::abs(3.0 * params.b * yi * yi) +
                                  std::abs(4.0 * params.a * yi) + std::abs(4.0 * params.e) + 1.0;
            if (std::abs(d) < 1e-8 * dscale) break;
            yi -= pi_poly(yi) / d;
        }
    }
    std::sort(std::begin(y), std::end(y));
    CubicRoots roots;
    if (params.b < 0.0) {
        roots = {y[0], y[1], y[2]};
        if (!(0.0 < roots.y1 && roots.y1 <= roots.y2 && roots.y2 <= roots.y3)) {
            throw ConvergenceError("cubic_roots: defocusing ordering 0 < y1 < y2 < y3 violated");
        }
    } else {
        roots = {y[1], y[2], y[0]};
        if (!(roots.y3 < 0.0 && 0.0 < roots.y1 && roots.y1 <= roots.y2)) {
            throw ConvergenceError("cubic_roots: focusing ordering y3 < 0 < y1 < y2 violated");
        }
    }
    // Vieta and residual invariants.
    const double vieta = roots.y1 + roots.y2 + roots.y3 + 2.0 * params.a / params.b;
    if (std::abs(vieta) > 1e-10 * std::max(1.0, std::abs(2.0 * params.a / params.b))) {
        throw ConvergenceError("cubic_roots: Vieta sum check failed");
    }
    for (double yi : {roots.y1, roots.y2, roots.y3}) {
        const double scale =
            std::max({1.0, std::abs(params.b * yi * yi * yi), std::abs(2.0 * params.a * yi * yi),
                      std::abs(4.0 * params.e * yi), 2.0 * params.j * params.j});
        if (std::abs(pi_poly(yi)) > 1e-10 * scale) {
            throw ConvergenceError("cubic_roots: residual check failed");
        }
    }
    return roots;
}

ProfileData compute_profile(const ProblemParams& params) {
    const DomainClass cls = classify(params);
    switch (cls.region) {
        case Region::InsideD1:
        case Region::InsideD2:
        case Region::InsideD3: {
            const CubicRoots roots = cubic_roots(params);
            if (roots.y2 - roots.y1 < kPlaneWaveRootGap * std::max(1.0, roots.y2)) {
                return plane_wave_data(params, cls);
            }
            const QuadratureValues qv = integrate_profile_quantities(params, roots);
            ProfileData data;
            data.params = params;
            data.cls = cls;
            data.roots = roots;
            data.r1 = std::sqrt(roots.y1);
            data.r2 = std::sqrt(roots.y2);
            data.period = qv.period;
            data.theta_raw = qv.theta_raw;
            data.theta = reduce_to_two_pi(qv.theta_raw);
            data.mass = qv.mass;
            data.momentum = 0.5 * params.j * qv.period;
            return data;
        }
        case Region::OnEminus:
            return plane_wave_data(params, cls);
        case Region::RealLineJ0:
            if (cls.family == Family::Sn || cls.family == Family::Cn ||
                cls.family == Family::Dn) {
                return real_family_data(params, cls);
            }
            throw ClassificationError(
                "constant and homoclinic/heteroclinic J=0 limits carry no finite-period profile");
        case Region::OnEplus:
            throw ClassificationError(
                "E = E_+ boundary: period diverges (homoclinic limit), no profile data");
        case Region::NoBoundedSolution:
        default:
            throw ClassificationError("no bounded solution for these parameters");
    }
}

double period(const ProblemParams& params) { return compute_profile(params).period; }

double floquet_theta(const ProblemParams& params) { return compute_profile(params).theta_raw; }

std::pair<double, double> mass_momentum(const ProblemParams& params) {
    const ProfileData data = compute_profile(params);
    return {data.mass, data.momentum};
}

FamilyScaling real_family_scaling(const ProblemParams& params) {
    const DomainClass cls = classify(params);
    if (cls.region != Region::RealLineJ0 ||
        (cls.family != Family::Sn && cls.family != Family::Cn && cls.family != Family::Dn)) {
        throw ClassificationError("real_family_scaling requires a J=0 sn/cn/dn point");
    }
    const double a = params.a, b = params.b, e = params.e;
    FamilyScaling sc;
    sc.family = cls.family;
    const double eps = 1e-15;
    switch (cls.family) {
        case Family::Sn: {
            // E(k) = -a^2 k^2 / (b (1+k^2)^2), increasing on (0,1).
            const auto energy = [&](double k) {
                const double k2 = k * k;
                return -a * a * k2 / (b * (1.0 + k2) * (1.0 + k2));
            };
            sc.k = bisect_modulus(energy, e, eps, 1.0 - eps, /*increasing=*/true);
            const double beta2 = (1.0 + sc.k * sc.k) / a;
            sc.beta = std::sqrt(beta2);
            sc.alpha = std::sqrt(-b * beta2 / (2.0 * sc.k * sc.k));
            break;
        }
        case Family::Dn: {
            // E(k) = (a^2/b) (k^2-1)/(2-k^2)^2, increasing on (0,1).
            const auto energy = [&](double k) {
                const double k2 = k * k;
                return a * a / b * (k2 - 1.0) / ((2.0 - k2) * (2.0 - k2));
            };
            sc.k = bisect_modulus(energy, e, eps, 1.0 - eps, /*increasing=*/true);
            const double beta2 = (2.0 - sc.k * sc.k) / (-a);
            sc.beta = std::sqrt(beta2);
            sc.alpha = std::sqrt(b * beta2 / 2.0);
            break;
        }
        case Family::Cn: {
            // E(k) = (a^2/b) k^2 (1-k^2)/(1-2k^2)^2; increasing on
            // (0, 1/sqrt(2)) for a > 0, decreasing on (1/sqrt(2), 1) for
            // a < 0; a = 0 pins k = 1/sqrt(2) and E fixes beta directly.
            const double half = 1.0 / std::sqrt(2.0);
            if (a == 0.0) {
                sc.k = half;
                sc.beta = std::pow(1.0 / (4.0 * b * e), 0.25);
                sc.alpha = std::sqrt(b * sc.beta * sc.beta);
                return sc;
            }
            const auto energy = [&](double k) {
                const double k2 = k * k;
                const double denom = 1.0 - 2.0 * k2;
                return a * a / b * k2 * (1.0 - k2) / (denom * denom);
            };
            if (a > 0.0) {
                sc.k = bisect_modulus(energy, e, eps, half - eps, /*increasing=*/true);
            } else {
                sc.k = bisect_modulus(energy, e, half + eps, 1.0 - eps, /*increasing=*/false);
            }
            const double beta2 = (1.0 - 2.0 * sc.k * sc.k) / a;
            sc.beta = std::sqrt(beta2);
            sc.alpha = std::sqrt(b * beta2 / (2.0 * sc.k * sc.k));
            break;
        }
        default:
            throw ClassificationError("unreachable family");
    }
    return sc;
}

std::vector<BoundaryPoint> boundary_curve(double b, double a, double q_lo, double q_hi, int n) {
    if (b == 0.0) throw DomainError("boundary_curve requires b != 0");
    if (n < 1) throw DomainError("boundary_curve requires n >= 1");
    if (!(q_lo <= q_hi)) throw DomainError("boundary_curve requires q_lo <= q_hi");
    if (b < 0.0) {
        if (!(a > 0.0) || !(q_lo > std::sqrt(a / 3.0)) || !(q_hi <= std::sqrt(a) * (1.0 + 1e-14))) {
            throw DomainError("defocusing boundary curve requires sqrt(a/3) < Q <= sqrt(a)");
        }
    } else if (a >= 0.0) {
        if (!(q_lo >= std::sqrt(a))) {
            throw DomainError("focusing (a >= 0) boundary curve requires Q >= sqrt(a)");
        }
    } else if (!(q_lo >= 0.0)) {
        throw DomainError("focusing (a < 0) boundary curve requires Q >= 0");
    }
    std::vector<BoundaryPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double q = (n == 1) ? q_lo : q_lo + (q_hi - q_lo) * i / (n - 1);
        BoundaryPoint pt;
        pt.q = q;
        pt.mass = (q * q - a) / (2.0 * b) * kPi * kSqrt2 / std::sqrt(3.0 * q * q - a);
        pt.momentum = q * pt.mass;
        pts.push_back(pt);
    }
    return pts;
}

ProfileData elliptic_family_params(EllipticFamily family, double k) {
    if (!(k > 0.0 && k < 1.0)) throw DomainError("family modulus k must lie in (0,1)");
    ProblemParams p;
    Family fam;
    switch (family) {
        case EllipticFamily::Dn:
            p = {2.0, -(2.0 - k * k), 0.0, (k * k - 1.0) / 2.0};
            fam = Family::Dn;
            break;
        case EllipticFamily::Cn:
            p = {2.0 * k * k, 1.0 - 2.0 * k * k, 0.0, (1.0 - k * k) / 2.0};
            fam = Family::Cn;
            break;
        case EllipticFamily::Sn:
            p = {-2.0 * k * k, 1.0 + k * k, 0.0, 0.5};
            fam = Family::Sn;
            break;
        default:
            throw DomainError("unknown family");
    }
    ProfileData data;
    data.params = p;
    data.cls = {Region::RealLineJ0, fam};
    data.scaling = FamilyScaling{fam, k, 1.0, 1.0};
    data.period = 2.0 * elliptic::complete_k(k);
    data.theta_raw = (fam == Family::Dn) ? 0.0 : kPi;
    data.theta = reduce_to_two_pi(data.theta_raw);
    data.mass = canonical_family_mass(fam, k);
    data.momentum = 0.0;
    data.r1 = (fam == Family::Dn) ? std::sqrt((1.0 - k) * (1.0 + k)) : 0.0;
    data.r2 = 1.0;
    return data;
}

}  // namespace qpwave::profile
