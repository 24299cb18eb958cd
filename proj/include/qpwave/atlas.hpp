#ifndef QPWAVE_ATLAS_HPP
#define QPWAVE_ATLAS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpwave/profile.hpp"

namespace qpwave::atlas {

/// One row of a parameter sweep. Derivatives are central finite differences;
/// delta is the Jacobian determinant
///   | dP/dE  dM/dE |
///   | dP/dJ  dM/dJ |
/// of the (J,E) -> (P,M) map. Records too close to the domain boundary (or
/// with period above the cutoff) carry NaN derivatives and are flagged so
/// sign assertions can exclude them.
struct AtlasRecord {
    double j = 0.0;
    double e = 0.0;
    double period = 0.0;
    double theta = 0.0;  // raw Floquet multiplier
    double mass = 0.0;
    double momentum = 0.0;
    double dt_de = 0.0;
    double dt_dj = 0.0;
    double delta = 0.0;
    bool boundary_adjacent = false;
};

struct SweepSpec {
    double b = -1.0;
    double a = 1.0;
    int grid_j = 20;
    int grid_e = 20;
    double fd_step = 1e-4;       // relative step (fraction of the local spans)
    double margin = 0.04;        // interior margin as a fraction of the spans
    double e_span = 5.0;         // E extent above E_- when there is no E_+
    double period_cutoff = 1e3;  // exclude records with larger T
    bool log_refine_e = true;    // refine the E grid toward E_+
};

std::vector<AtlasRecord> sweep(const SweepSpec& spec);

struct InjectivityReport {
    int pairs = 0;
    double min_image_separation = 0.0;
    double min_param_separation = 0.0;
    bool all_separated = true;
    bool all_inside_image_domain = true;
    std::string counterexample;  // empty unless a check failed
};

/// Random-pair injectivity probe of (J,E) -> (M,P) in D1 at b = -1, a = 1:
/// pairs separated by >= 1e-3 in parameters must have images separated by
/// >= 1e-9, and every image must satisfy
///   0 < P < (M/pi) sqrt(3M^2 + pi^2 - sqrt(9M^4 + 4 M^2 pi^2)).
InjectivityReport injectivity_probe(int n_pairs, unsigned seed = 12345);

/// Upper bound of the image domain: P < image_domain_bound(M).
double image_domain_bound(double mass);

struct DomainsPoint {
    double j = 0.0;
    double e_minus = 0.0;
    std::optional<double> e_plus;  // defocusing only
};

/// Existence-domain curves E_-(J) (and E_+(J), defocusing) sampled at n
/// points. For the defocusing case J runs over [0, sqrt(4a^3/27b^2)];
/// otherwise over [0, j_max_display].
std::vector<DomainsPoint> domains_figure(double b, double a, int n, double j_max_display = 2.0);

/// Boundary curve Q -> (M_b, P_b) on a midpoint grid of the case-appropriate
/// Q interval, capped at q_max_display where the interval is unbounded.
std::vector<profile::BoundaryPoint> boundary_figure(double b, double a, int n,
                                                    double q_max_display = 1.5);

struct MapImagePoint {
    std::string tag;  // "interior", "boundary" or "j0"
    double j = 0.0;   // NaN when not applicable
    double e = 0.0;
    double q = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
};

/// Data illustrating the image of (J,E) -> (M,P): interior samples, the
/// boundary curve, and (focusing a < 0) the J = 0 segment
/// (M(0,E), 0) for E in (-a^2/4b, e_cap], which lies outside the region
/// swept by the boundary curve.
std::vector<MapImagePoint> map_image_figure(double b, double a, int n,
                                            double j_max_display = 1.5, double e_cap = 12.0);

// Emission. CSV carries one record per row with a header row naming every
// field; JSON is an array of objects with the same keys in fixed order.
// Floats are written with 17 significant digits; non-finite derivative
// fields become empty CSV cells / JSON nulls.
void write_csv(std::ostream& os, const std::vector<AtlasRecord>& records);
void write_json(std::ostream& os, const std::vector<AtlasRecord>& records);
void write_csv(std::ostream& os, const std::vector<DomainsPoint>& points);
void write_csv(std::ostream& os, const std::vector<profile::BoundaryPoint>& points);
void write_csv(std::ostream& os, const std::vector<MapImagePoint>& points);

}  // namespace qpwave::atlas

#endif  // QPWAVE_ATLAS_HPP
