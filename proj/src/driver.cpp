#include "qpwave/driver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qpwave/errors.hpp"
#include "qpwave/format.hpp"

namespace qpwave::driver {

ComparisonReport run_comparison(const profile::ProblemParams& params, const CompareOptions& opt) {
    return run_comparison(profile::compute_profile(params), opt);
}

ComparisonReport run_comparison(const profile::ProfileData& prof, const CompareOptions& opt) {
    ComparisonReport report;
    report.profile_data = prof;

    ode::WaveSample raw = ode::integrate_profile(prof.params, opt.grid_points, &report.ode_stats);
    report.ode_sample = ode::align(raw);

    gradflow::Grid grid(prof.period, opt.grid_points, prof.theta);
    // Constrain the minimizer to the discrete mass and momentum of the
    // sampled profile itself, so both solvers solve the same grid problem.
    const std::vector<gradflow::cdouble> ode_interior(
        report.ode_sample.values.begin(),
        report.ode_sample.values.begin() + report.ode_sample.cells());
    const gradflow::Functionals target =
        gradflow::discrete_functionals(ode_interior, grid, prof.params.b);
    gradflow::Constraints constraints{target.mass, target.momentum};
    report.constraints = constraints;
    gradflow::FlowConfig config;
    config.dt = opt.dt;
    config.eps = opt.eps;
    config.max_steps = opt.max_steps;
    config.b = prof.params.b;
    config.stencil = opt.stencil;
    config.initial = opt.initial;
    config.noise_seed = opt.noise_seed;
    config.record_steps = opt.record_steps;

    gradflow::MinimizeResult min = gradflow::minimize(grid, constraints, config);
    report.flow = std::move(min.diagnostics);

    ode::WaveSample min_sample;
    min_sample.params = prof.params;
    min_sample.theta = prof.theta;
    min_sample.grid = report.ode_sample.grid;
    min_sample.values.assign(min.u.begin(), min.u.end());
    min_sample.values.push_back(std::polar(1.0, prof.theta) * min.u.front());
    report.min_sample = std::move(min_sample);

    report.max_moduli_diff = max_moduli_difference(report.min_sample, report.ode_sample);
    report.max_complex_diff = max_complex_difference(report.min_sample, report.ode_sample);
    return report;
}

double max_moduli_difference(const ode::WaveSample& a, const ode::WaveSample& b) {
    if (a.values.size() != b.values.size()) {
        throw DomainError("samples have different grid sizes");
    }
    const int cells = a.cells();
    double m = 0.0;
    for (int l = 0; l < cells; ++l) {
        m = std::max(m, std::abs(std::abs(a.values[static_cast<std::size_t>(l)]) -
                                 std::abs(b.values[static_cast<std::size_t>(l)])));
    }
    return m;
}

double max_complex_difference(const ode::WaveSample& a, const ode::WaveSample& b) {
    if (a.values.size() != b.values.size()) {
        throw DomainError("samples have different grid sizes");
    }
    const int cells = a.cells();
    double m = 0.0;
    for (int l = 0; l < cells; ++l) {
        m = std::max(m, std::abs(a.values[static_cast<std::size_t>(l)] -
                                 b.values[static_cast<std::size_t>(l)]));
    }
    return m;
}

void write_sample_csv(std::ostream& os, const ode::WaveSample& sample) {
    os << "x,re_u,im_u,abs_u\n";
    for (std::size_t l = 0; l < sample.values.size(); ++l) {
        os << io::float17(sample.grid[l]) << ',' << io::float17(sample.values[l].real()) << ','
           << io::float17(sample.values[l].imag()) << ',' << io::float17(std::abs(sample.values[l]))
           << '\n';
    }
}

ode::WaveSample read_sample_csv(std::istream& is) {
    ode::WaveSample sample;
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,re_u,im_u", 0) != 0) {
        throw DomainError("sample CSV must start with the header x,re_u,im_u,abs_u");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3] = {0.0, 0.0, 0.0};
        for (double& v : vals) {
            if (!std::getline(row, cell, ',')) throw DomainError("malformed sample CSV row");
            v = std::strtod(cell.c_str(), nullptr);
        }
        sample.grid.push_back(vals[0]);
        sample.values.emplace_back(vals[1], vals[2]);
    }
    if (sample.values.size() < 2) throw DomainError("sample CSV has too few rows");
    return sample;
}

}  // namespace qpwave::driver
