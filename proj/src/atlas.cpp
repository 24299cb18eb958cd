#include "qpwave/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "qpwave/errors.hpp"
#include "qpwave/format.hpp"

namespace qpwave::atlas {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

using profile::ProblemParams;
using profile::ProfileData;
using profile::Region;

bool is_interior(const ProblemParams& p) {
    const auto cls = profile::classify(p);
    return cls.region == Region::InsideD1 || cls.region == Region::InsideD2 ||
           cls.region == Region::InsideD3;
}

struct TM {
    double period;
    double mass;
};

std::optional<TM> try_evaluate(const ProblemParams& p) {
    if (!is_interior(p)) return std::nullopt;
    const ProfileData data = profile::compute_profile(p);
    return TM{data.period, data.mass};
}

}  // namespace

std::vector<AtlasRecord> sweep(const SweepSpec& spec) {
    if (spec.grid_j < 1 || spec.grid_e < 1) throw DomainError("sweep grid must be positive");
    const bool defocusing = spec.b < 0.0;
    const double jmax =
        defocusing ? std::sqrt((4.0 / 27.0) * spec.a * spec.a * spec.a / (spec.b * spec.b))
                   : kNan;

    std::vector<AtlasRecord> records;
    records.reserve(static_cast<std::size_t>(spec.grid_j) * static_cast<std::size_t>(spec.grid_e));

    for (int i = 0; i < spec.grid_j; ++i) {
        const double sj = spec.margin + (1.0 - 2.0 * spec.margin) * (i + 0.5) / spec.grid_j;
        const double j_hi = defocusing ? jmax : 2.0;  // focusing sweeps sample J in (0, 2]
        const double j = sj * j_hi;

        ProblemParams base{spec.b, spec.a, j, 0.0};
        const double em = profile::e_minus(base);
        const double ep = defocusing ? profile::e_plus(base) : em + spec.e_span;
        const double span = ep - em;

        for (int kidx = 0; kidx < spec.grid_e; ++kidx) {
            double se;
            if (spec.log_refine_e && spec.grid_e > 1) {
                // Geometric refinement of 1 - s toward the upper edge.
                const double hi_gap = spec.margin;
                const double lo_gap = 1.0 - spec.margin;
                const double t = static_cast<double>(kidx) / (spec.grid_e - 1);
                se = 1.0 - lo_gap * std::pow(hi_gap / lo_gap, t);
            } else {
                se = spec.margin + (1.0 - 2.0 * spec.margin) * (kidx + 0.5) / spec.grid_e;
            }
            const double e = em + se * span;
            ProblemParams p{spec.b, spec.a, j, e};

            AtlasRecord rec;
            rec.j = j;
            rec.e = e;
            rec.dt_de = rec.dt_dj = rec.delta = kNan;
            const auto center = try_evaluate(p);
            if (!center) {
                rec.period = rec.theta = rec.mass = rec.momentum = kNan;
                rec.boundary_adjacent = true;
                records.push_back(rec);
                continue;
            }
            const ProfileData data = profile::compute_profile(p);
            rec.period = data.period;
            rec.theta = data.theta_raw;
            rec.mass = data.mass;
            rec.momentum = data.momentum;

            const double he_nominal = spec.fd_step * span;
            const double hj_nominal = spec.fd_step * (defocusing ? jmax : j_hi);
            const double dist_e = std::min(e - em, ep - e);
            const double dist_j = defocusing ? std::min(j, jmax - j) : j;
            rec.boundary_adjacent = dist_e < 2.0 * he_nominal || dist_j < 2.0 * hj_nominal ||
                                    rec.period > spec.period_cutoff;

            const double he = std::min(he_nominal, 0.4 * dist_e);
            const double hj = std::min(hj_nominal, 0.4 * dist_j);
            const auto ep_e = try_evaluate({spec.b, spec.a, j, e + he});
            const auto em_e = try_evaluate({spec.b, spec.a, j, e - he});
            const auto ep_j = try_evaluate({spec.b, spec.a, j + hj, e});
            const auto em_j = try_evaluate({spec.b, spec.a, j - hj, e});
            if (ep_e && em_e && ep_j && em_j && he > 0.0 && hj > 0.0) {
                rec.dt_de = (ep_e->period - em_e->period) / (2.0 * he);
                rec.dt_dj = (ep_j->period - em_j->period) / (2.0 * hj);
                const double dm_de = (ep_e->mass - em_e->mass) / (2.0 * he);
                const double dm_dj = (ep_j->mass - em_j->mass) / (2.0 * hj);
                const double dp_de = 0.5 * j * rec.dt_de;
                const double dp_dj = 0.5 * (rec.period + j * rec.dt_dj);
                rec.delta = dp_de * dm_dj - dm_de * dp_dj;
            } else {
                rec.boundary_adjacent = true;
            }
            records.push_back(rec);
        }
    }
    return records;
}

double image_domain_bound(double mass) {
    const double m2 = mass * mass;
    const double inner = std::sqrt(9.0 * m2 * m2 + 4.0 * m2 * kPi * kPi);
    return mass / kPi * std::sqrt(std::max(0.0, 3.0 * m2 + kPi * kPi - inner));
}

InjectivityReport injectivity_probe(int n_pairs, unsigned seed) {
    if (n_pairs < 1) throw DomainError("injectivity_probe requires n_pairs >= 1");
    const double b = -1.0, a = 1.0;
    const double jmax = std::sqrt(4.0 / 27.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uj(0.02, 0.98);
    std::uniform_real_distribution<double> ue(0.03, 0.97);

    const auto draw = [&]() {
        const double j = uj(rng) * jmax;
        ProblemParams base{b, a, j, 0.0};
        const double em = profile::e_minus(base);
        const double ep = profile::e_plus(base);
        base.e = em + ue(rng) * (ep - em);
        return base;
    };

    InjectivityReport report;
    report.pairs = n_pairs;
    report.min_image_separation = std::numeric_limits<double>::infinity();
    report.min_param_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        ProblemParams p1 = draw();
        ProblemParams p2 = draw();
        double param_sep = std::hypot(p1.j - p2.j, p1.e - p2.e);
        while (param_sep < 1e-3) {
            p2 = draw();
            param_sep = std::hypot(p1.j - p2.j, p1.e - p2.e);
        }
        const auto [m1, pp1] = profile::mass_momentum(p1);
        const auto [m2, pp2] = profile::mass_momentum(p2);
        const double image_sep = std::hypot(m1 - m2, pp1 - pp2);
        report.min_image_separation = std::min(report.min_image_separation, image_sep);
        report.min_param_separation = std::min(report.min_param_separation, param_sep);
        if (image_sep < 1e-9) {
            report.all_separated = false;
            std::ostringstream oss;
            oss << "image collision: (J,E)=(" << p1.j << "," << p1.e << ") vs (" << p2.j << ","
                << p2.e << ")";
            report.counterexample = oss.str();
        }
        for (const auto& [m, pp] : {std::pair{m1, pp1}, std::pair{m2, pp2}}) {
            if (!(m > 0.0 && pp > 0.0 && pp < image_domain_bound(m))) {
                report.all_inside_image_domain = false;
                std::ostringstream oss;
                oss << "image point outside the target domain: (M,P)=(" << m << "," << pp << ")";
                report.counterexample = oss.str();
            }
        }
    }
    return report;
}

std::vector<DomainsPoint> domains_figure(double b, double a, int n, double j_max_display) {
    if (n < 2) throw DomainError("domains_figure requires n >= 2");
    const bool defocusing = b < 0.0;
    const double j_hi =
        defocusing ? std::sqrt((4.0 / 27.0) * a * a * a / (b * b)) : j_max_display;
    std::vector<DomainsPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        DomainsPoint pt;
        pt.j = j_hi * i / (n - 1);
        ProblemParams p{b, a, pt.j, 0.0};
        pt.e_minus = profile::e_minus(p);
        if (defocusing) pt.e_plus = profile::e_plus(p);
        pts.push_back(pt);
    }
    return pts;
}

std::vector<profile::BoundaryPoint> boundary_figure(double b, double a, int n,
                                                    double q_max_display) {
    if (n < 1) throw DomainError("boundary_figure requires n >= 1");
    double lo, hi;
    if (b < 0.0) {
        lo = std::sqrt(a / 3.0);
        hi = std::sqrt(a);
    } else if (a >= 0.0) {
        lo = std::sqrt(a);
        hi = q_max_display;
    } else {
        lo = 0.0;
        hi = q_max_display;
    }
    // Midpoint grid: both endpoints can be singular or degenerate.
    const double cell = (hi - lo) / n;
    return profile::boundary_curve(b, a, lo + 0.5 * cell, hi - 0.5 * cell, n);
}

std::vector<MapImagePoint> map_image_figure(double b, double a, int n, double j_max_display,
                                            double e_cap) {
    if (n < 2) throw DomainError("map_image_figure requires n >= 2");
    std::vector<MapImagePoint> pts;
    const bool defocusing = b < 0.0;
    const double j_hi =
        defocusing ? std::sqrt((4.0 / 27.0) * a * a * a / (b * b)) : j_max_display;

    const int nj = std::max(2, n / 10);
    for (int i = 0; i < nj; ++i) {
        const double j = j_hi * (i + 0.5) / nj;
        ProblemParams base{b, a, j, 0.0};
        const double em = profile::e_minus(base);
        const double ep = defocusing ? profile::e_plus(base) : em + e_cap;
        for (int k = 0; k < n / nj; ++k) {
            const double e = em + (ep - em) * (k + 0.5) / (n / nj);
            ProblemParams p{b, a, j, e};
            if (!is_interior(p)) continue;
            const ProfileData data = profile::compute_profile(p);
            pts.push_back({"interior", j, e, kNan, data.mass, data.momentum});
        }
    }
    for (const auto& bp : boundary_figure(b, a, n, j_max_display)) {
        pts.push_back({"boundary", kNan, kNan, bp.q, bp.mass, bp.momentum});
    }
    if (b > 0.0 && a < 0.0) {
        // The J = 0 segment of the image: masses of the dn family on
        // (-a^2/4b, 0) and of the cn family on (0, e_cap], momentum 0.
        const double e_lo = -a * a / (4.0 * b);
        const int half = n / 2;
        for (int k = 0; k < half; ++k) {
            const double e = e_lo * (1.0 - (k + 0.5) / half);  // in (e_lo, 0)
            const auto [m, p] = profile::mass_momentum({b, a, 0.0, e});
            pts.push_back({"j0", 0.0, e, kNan, m, p});
        }
        for (int k = 0; k < half; ++k) {
            const double e = e_cap * (k + 0.5) / half;  // in (0, e_cap)
            const auto [m, p] = profile::mass_momentum({b, a, 0.0, e});
            pts.push_back({"j0", 0.0, e, kNan, m, p});
        }
    }
    return pts;
}

void write_csv(std::ostream& os, const std::vector<AtlasRecord>& records) {
    os << "j,e,period,theta,mass,momentum,dt_de,dt_dj,delta,boundary_adjacent\n";
    for (const auto& r : records) {
        os << io::float17(r.j) << ',' << io::float17(r.e) << ','
           << io::float17_or_empty(r.period) << ',' << io::float17_or_empty(r.theta) << ','
           << io::float17_or_empty(r.mass) << ',' << io::float17_or_empty(r.momentum) << ','
           << io::float17_or_empty(r.dt_de) << ',' << io::float17_or_empty(r.dt_dj) << ','
           << io::float17_or_empty(r.delta) << ',' << (r.boundary_adjacent ? 1 : 0) << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<AtlasRecord>& records) {
    os << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << "  {\"j\": " << io::float17(r.j) << ", \"e\": " << io::float17(r.e)
           << ", \"period\": " << io::float17_or_null(r.period)
           << ", \"theta\": " << io::float17_or_null(r.theta)
           << ", \"mass\": " << io::float17_or_null(r.mass)
           << ", \"momentum\": " << io::float17_or_null(r.momentum)
           << ", \"dt_de\": " << io::float17_or_null(r.dt_de)
           << ", \"dt_dj\": " << io::float17_or_null(r.dt_dj)
           << ", \"delta\": " << io::float17_or_null(r.delta)
           << ", \"boundary_adjacent\": " << (r.boundary_adjacent ? "true" : "false") << "}"
           << (i + 1 < records.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

void write_csv(std::ostream& os, const std::vector<DomainsPoint>& points) {
    const bool with_plus = !points.empty() && points.front().e_plus.has_value();
    os << (with_plus ? "j,e_minus,e_plus\n" : "j,e_minus\n");
    for (const auto& pt : points) {
        os << io::float17(pt.j) << ',' << io::float17(pt.e_minus);
        if (with_plus) os << ',' << io::float17(pt.e_plus.value_or(kNan));
        os << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<profile::BoundaryPoint>& points) {
    os << "q,mass,momentum\n";
    for (const auto& pt : points) {
        os << io::float17(pt.q) << ',' << io::float17(pt.mass) << ',' << io::float17(pt.momentum)
           << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<MapImagePoint>& points) {
    os << "tag,j,e,q,mass,momentum\n";
    for (const auto& pt : points) {
        os << pt.tag << ',' << io::float17_or_empty(pt.j) << ',' << io::float17_or_empty(pt.e)
           << ',' << io::float17_or_empty(pt.q) << ',' << io::float17(pt.mass) << ','
           << io::float17(pt.momentum) << '\n';
    }
}

}  // namespace qpwave::atlas
