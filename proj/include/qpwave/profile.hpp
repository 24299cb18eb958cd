#ifndef QPWAVE_PROFILE_HPP
#define QPWAVE_PROFILE_HPP

#include <optional>
#include <utility>
#include <vector>

namespace qpwave::profile {

/// Parameters of the profile equation u'' + a u + b |u|^2 u = 0 together
/// with its two invariants: the angular momentum J = Im(u conj(u')) and the
/// energy E = |u'|^2/2 + a|u|^2/2 + b|u|^4/4. J >= 0 by normalization
/// (conjugating a solution flips the sign of J), b != 0.
struct ProblemParams {
    double b = 0.0;  // nonlinearity coefficient, focusing b > 0, defocusing b < 0
    double a = 0.0;  // frequency
    double j = 0.0;  // angular momentum, >= 0
    double e = 0.0;  // profile-equation energy

    void validate() const;
};

enum class Region {
    InsideD1,          // defocusing, E_-(J) < E < E_+(J)
    InsideD2,          // focusing a >= 0, E > E_-(J)
    InsideD3,          // focusing a < 0, E > E_-(J)
    OnEminus,          // plane wave r_Q e^{-iQx}
    OnEplus,           // defocusing upper boundary (plane wave / homoclinic)
    RealLineJ0,        // J = 0, real-valued family
    NoBoundedSolution,
};

enum class Family {
    None,
    Sn,
    Cn,
    Dn,
    ConstantZero,
    ConstantNontrivial,
    Homoclinic,
    Heteroclinic,
};

struct DomainClass {
    Region region = Region::NoBoundedSolution;
    Family family = Family::None;
};

/// Roots of Pi(y) = -b y^3 - 2a y^2 + 4E y - 2J^2, with Pi(r^2) =
/// 4 r^2 (E - V_J(r)). Ordering: defocusing 0 < y1 < y2 < y3, focusing
/// y3 < 0 < y1 < y2. The modulus of the profile oscillates between
/// r1 = sqrt(y1) and r2 = sqrt(y2).
struct CubicRoots {
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;
};

/// The Q (and, defocusing only, q) parametrization of J: J = Q(Q^2-a)/b.
struct QBranches {
    double big_q = 0.0;               // critical radius r_Q = sqrt((Q^2-a)/b), V minimum
    std::optional<double> small_q;    // defocusing only: V maximum at r_q
};

/// Scaling linking a real J = 0 profile to the canonical Jacobi function:
/// u(x) = (1/alpha) f(x/beta, k) (sn shifted by K(k) so it starts at the
/// modulus maximum of |u| is interior; see the family descriptions).
struct FamilyScaling {
    Family family = Family::None;
    double k = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Derived scalars of one (J,E) point: turning radii, fundamental period,
/// Floquet multiplier (raw phase increment over one period, plus its
/// representative in [0, 2pi)), mass and momentum over one period.
struct ProfileData {
    ProblemParams params;
    DomainClass cls;
    std::optional<CubicRoots> roots;       // absent for J = 0 families
    std::optional<FamilyScaling> scaling;  // present for J = 0 families
    double r1 = 0.0;
    double r2 = 0.0;
    double period = 0.0;
    double theta_raw = 0.0;
    double theta = 0.0;  // theta_raw reduced to [0, 2pi)
    double mass = 0.0;
    double momentum = 0.0;
};

/// Effective radial potential V_J(r) = J^2/(2r^2) + a r^2/2 + b r^4/4.
/// Requires r > 0.
double potential(const ProblemParams& params, double r);

/// Parametrization roots of J = Q(Q^2-a)/b. Defocusing: both Q and q with
/// 0 < q^2 < a/3 < Q^2 < a; focusing: Q only. Throws ClassificationError
/// when b < 0 and J^2 > (4/27) a^3/b^2 (no bounded solution).
QBranches q_branches(const ProblemParams& params);

/// E_-(J) = V_J(r_Q) = (Q^2-a)(3Q^2+a)/(4b).
double e_minus(const ProblemParams& params);

/// E_+(J) = V_J(r_q) = (q^2-a)(3q^2+a)/(4b); defocusing only.
double e_plus(const ProblemParams& params);

/// Total classification of (b, a, J, E).
DomainClass classify(const ProblemParams& params);

/// Roots of the cubic for a point strictly inside D1/D2/D3.
CubicRoots cubic_roots(const ProblemParams& params);

/// Fundamental period T(J,E). Inside the domains this is
///   T = 2 sqrt(2) Int_0^{pi/2} dphi / sqrt(b (S(phi) - y3)),
/// S(phi) = y1 cos^2 phi + y2 sin^2 phi; on E = E_- it is the plane-wave
/// limit pi sqrt(2)/sqrt(3Q^2 - a); for J = 0 families it is the modulus
/// period 2 K(k) beta.
double period(const ProblemParams& params);

/// Raw Floquet multiplier: the phase increment over one period,
///   theta = 2 Int_{r1}^{r2} (-J) dr / (r^2 sqrt(2(E - V_J(r)))),
/// negative for J > 0. For J = 0 families: 0 (dn) or pi (cn, sn).
double floquet_theta(const ProblemParams& params);

/// Mass and momentum over one period: Mtilde and Ptilde = T J / 2.
std::pair<double, double> mass_momentum(const ProblemParams& params);

/// Everything above in one pass.
ProfileData compute_profile(const ProblemParams& params);

/// Solve the (a, b, E) -> (k, alpha, beta) inversion for a J = 0 family
/// point. Throws ClassificationError unless classify() lands on Sn/Cn/Dn.
FamilyScaling real_family_scaling(const ProblemParams& params);

struct BoundaryPoint {
    double q = 0.0;  // the parametrization value Q
    double mass = 0.0;
    double momentum = 0.0;
};

/// Samples of the boundary curve M_b(Q) = (Q^2-a)/(2b) * pi sqrt(2)/sqrt(3Q^2-a),
/// P_b(Q) = Q M_b(Q) at n points of [q_lo, q_hi]. The range must lie in the
/// case-appropriate interval: (sqrt(a/3), sqrt(a)) defocusing, (sqrt(a), inf)
/// focusing a >= 0, (0, inf) focusing a < 0.
std::vector<BoundaryPoint> boundary_curve(double b, double a, double q_lo, double q_hi, int n);

enum class EllipticFamily { Sn, Cn, Dn };

/// Parameter bundle of the canonical Jacobi families with the coefficient
/// tables dn: (b=2, a=-(2-k^2)), cn: (b=2k^2, a=1-2k^2), sn: (b=-2k^2,
/// a=1+k^2); T = 2K(k), theta = 0 or pi, masses E(k), (E-(1-k^2)K)/k^2,
/// (K-E)/k^2 respectively, momentum 0.
ProfileData elliptic_family_params(EllipticFamily family, double k);

}  // namespace qpwave::profile

#endif  // QPWAVE_PROFILE_HPP
