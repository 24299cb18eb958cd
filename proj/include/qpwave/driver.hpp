#ifndef QPWAVE_DRIVER_HPP
#define QPWAVE_DRIVER_HPP

#include <iosfwd>

#include "qpwave/gradflow.hpp"
#include "qpwave/ode.hpp"
#include "qpwave/profile.hpp"

namespace qpwave::driver {

struct CompareOptions {
    int grid_points = 1000;
    double dt = 1e-3;
    double eps = 1e-6;
    long max_steps = 500000;
    gradflow::TransportStencil stencil = gradflow::TransportStencil::CenteredPlus;
    gradflow::InitialData initial = gradflow::InitialData::OnePlusICos;
    unsigned noise_seed = 1;
    bool record_steps = true;
};

/// Result of one profile-vs-minimizer experiment: both solutions aligned on
/// the same grid, plus the comparison metrics. The minimizer is constrained
/// to the discrete mass and momentum of the sampled profile (the grid-level
/// reading of M(u) = M(u_ode), P(u) = P(u_ode)); those targets differ from
/// the quadrature values of ProfileData by O(dx^2).
struct ComparisonReport {
    profile::ProfileData profile_data;
    ode::IntegrationStats ode_stats;
    gradflow::Constraints constraints;  // discrete targets actually enforced
    gradflow::Diagnostics flow;
    ode::WaveSample ode_sample;  // aligned
    ode::WaveSample min_sample;  // aligned, ghost value appended
    double max_moduli_diff = 0.0;
    double max_complex_diff = 0.0;
};

ComparisonReport run_comparison(const profile::ProblemParams& params, const CompareOptions& opt);
ComparisonReport run_comparison(const profile::ProfileData& prof, const CompareOptions& opt);

/// max over interior grid points of | |u| - |v| | and |u - v|.
double max_moduli_difference(const ode::WaveSample& a, const ode::WaveSample& b);
double max_complex_difference(const ode::WaveSample& a, const ode::WaveSample& b);

/// Profile dump format: CSV with columns x, re_u, im_u, abs_u.
void write_sample_csv(std::ostream& os, const ode::WaveSample& sample);
ode::WaveSample read_sample_csv(std::istream& is);

}  // namespace qpwave::driver

#endif  // QPWAVE_DRIVER_HPP
