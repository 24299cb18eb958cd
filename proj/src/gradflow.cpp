#include "qpwave/gradflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qpwave/errors.hpp"
#include "qpwave/ode.hpp"
#include "qpwave/tridiag.hpp"

namespace qpwave::gradflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Threshold on m0 k0 - p0^2 below which the state is treated as a discrete
// plane wave (exact equality is meaningless in floating point).
double degeneracy_threshold(const Functionals& f) {
    return 1e-12 * f.mass * std::max(f.kinetic, 1.0);
}

constexpr double kMassResidualTol = 1e-6;      // relative to m
constexpr double kMomentumResidualTol = 1e-6;  // relative to max(1, |p|)
constexpr int kMaxSweepIterations = 50;

std::vector<cdouble> initial_state(const Grid& grid, const FlowConfig& config) {
    const int n = grid.points;
    std::vector<cdouble> u(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        u[static_cast<std::size_t>(l)] =
            cdouble(1.0 + std::cos(2.0 * kPi * grid.x(l) / grid.period()), 1.0);
    }
    switch (config.initial) {
        case InitialData::OnePlusICos:
            break;
        case InitialData::ConstantOne:
            std::fill(u.begin(), u.end(), cdouble(1.0, 1.0));
            break;
        case InitialData::SeededNoise: {
            std::mt19937_64 rng(config.noise_seed);
            std::uniform_real_distribution<double> dist(-0.05, 0.05);
            for (auto& z : u) z += cdouble(dist(rng), dist(rng));
            break;
        }
    }
    return u;
}

// Discrete plane wave sqrt(2m/T) e^{-i gamma x} with gamma chosen so that
// the rectangle-rule mass and the centered-difference momentum hit the
// targets exactly on this grid: sin(gamma dx)/dx = p/m.
std::vector<cdouble> constrained_plane_wave(const Grid& grid, const Constraints& c) {
    if (!(c.mass > 0.0)) throw DomainError("plane-wave branch requires m > 0");
    const double dx = grid.dx();
    const double s = c.momentum * dx / c.mass;
    if (std::abs(s) >= 1.0) {
        throw SolverFailure("constrained plane wave infeasible: |p dx / m| >= 1");
    }
    const double gamma = std::asin(s) / dx;
    const double amplitude = std::sqrt(2.0 * c.mass / grid.period());
    std::vector<cdouble> u(static_cast<std::size_t>(grid.points));
    for (int l = 0; l < grid.points; ++l) {
        u[static_cast<std::size_t>(l)] = std::polar(amplitude, -gamma * grid.x(l));
    }
    return u;
}

double max_modulus_change(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(std::abs(a[i]) - std::abs(b[i])));
    }
    return m;
}

}  // namespace

std::vector<cdouble> apply_gradient(const std::vector<cdouble>& u, const Grid& grid) {
    const int n = grid.points;
    const double inv2dx = 1.0 / (2.0 * grid.dx());
    const cdouble twist = std::polar(1.0, grid.theta);
    std::vector<cdouble> out(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        const cdouble up = (l + 1 < n) ? u[static_cast<std::size_t>(l + 1)] : twist * u[0];
        const cdouble um = (l > 0) ? u[static_cast<std::size_t>(l - 1)]
                                   : u[static_cast<std::size_t>(n - 1)] / twist;
        out[static_cast<std::size_t>(l)] = (up - um) * inv2dx;
    }
    return out;
}

std::vector<cdouble> apply_laplacian(const std::vector<cdouble>& u, const Grid& grid) {
    const int n = grid.points;
    const double invdx2 = 1.0 / (grid.dx() * grid.dx());
    const cdouble twist = std::polar(1.0, grid.theta);
    std::vector<cdouble> out(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        const cdouble up = (l + 1 < n) ? u[static_cast<std::size_t>(l + 1)] : twist * u[0];
        const cdouble um = (l > 0) ? u[static_cast<std::size_t>(l - 1)]
                                   : u[static_cast<std::size_t>(n - 1)] / twist;
        out[static_cast<std::size_t>(l)] = (up - 2.0 * u[static_cast<std::size_t>(l)] + um) * invdx2;
    }
    return out;
}

Functionals discrete_functionals(const std::vector<cdouble>& u, const Grid& grid, double b) {
    const std::vector<cdouble> du = apply_gradient(u, grid);
    const double dx = grid.dx();
    Functionals f;
    double quartic = 0.0;
    for (std::size_t l = 0; l < u.size(); ++l) {
        const double u2 = std::norm(u[l]);
        f.mass += u2;
        f.kinetic += std::norm(du[l]);
        f.momentum += std::imag(u[l] * std::conj(du[l]));
        quartic += u2 * u2;
    }
    f.mass *= 0.5 * dx;
    f.kinetic *= 0.5 * dx;
    f.momentum *= 0.5 * dx;
    f.energy = f.kinetic - 0.25 * b * quartic * dx;
    return f;
}

std::vector<cdouble> semi_implicit_step(const std::vector<cdouble>& u, const Grid& grid,
                                        const FlowConfig& config) {
    const int n = grid.points;
    const double c = config.dt / (grid.dx() * grid.dx());
    const cdouble twist = std::polar(1.0, grid.theta);
    linalg::TwistedTridiagonal mat;
    mat.diag.resize(static_cast<std::size_t>(n));
    mat.lower.assign(static_cast<std::size_t>(n - 1), -c);
    mat.upper.assign(static_cast<std::size_t>(n - 1), -c);
    for (int l = 0; l < n; ++l) {
        mat.diag[static_cast<std::size_t>(l)] =
            1.0 + 2.0 * c - config.dt * config.b * std::norm(u[static_cast<std::size_t>(l)]);
    }
    mat.corner_top = -c / twist;     // row 0 reaches u^{-1} = e^{-i theta} u^{L-1}
    mat.corner_bottom = -c * twist;  // row L-1 reaches u^L = e^{i theta} u^0
    return linalg::solve_twisted(mat, u);
}

std::vector<cdouble> renormalize(const std::vector<cdouble>& u, const Grid& grid,
                                 const FlowConfig& config, const Constraints& constraints,
                                 RenormalizeInfo* info) {
    const Functionals f = discrete_functionals(u, grid, config.b);
    const double gram = f.mass * f.kinetic - f.momentum * f.momentum;
    if (info) {
        info->measured = f;
        info->mu = 0.0;
        info->omega = 0.0;
        info->degenerate = false;
    }
    if (gram <= degeneracy_threshold(f)) {
        if (info) info->degenerate = true;
        return constrained_plane_wave(grid, constraints);
    }
    const double dm = constraints.mass - f.mass;
    const double dp = constraints.momentum - f.momentum;
    const double mu = (f.kinetic * dm - f.momentum * dp) / (2.0 * gram);
    const double omega = (f.mass * dp - f.momentum * dm) / (2.0 * gram);
    if (info) {
        info->mu = mu;
        info->omega = omega;
    }
    const int n = grid.points;
    const double sign = (config.stencil == TransportStencil::CenteredPlus) ? 1.0 : -1.0;
    const cdouble off = cdouble(0.0, -sign * omega) / (2.0 * grid.dx());
    const cdouble twist = std::polar(1.0, grid.theta);
    linalg::TwistedTridiagonal mat;
    mat.diag.assign(static_cast<std::size_t>(n), 1.0 - mu);
    mat.upper.assign(static_cast<std::size_t>(n - 1), off);
    mat.lower.assign(static_cast<std::size_t>(n - 1), -off);
    mat.corner_top = -off / twist;
    mat.corner_bottom = off * twist;
    return linalg::solve_twisted(mat, u);
}

MinimizeResult minimize(const Grid& grid, const Constraints& constraints,
                        const FlowConfig& config) {
    if (!(constraints.mass > 0.0)) throw DomainError("minimize requires target mass m > 0");
    MinimizeResult result;
    Diagnostics& diag = result.diagnostics;

    std::vector<cdouble> u = initial_state(grid, config);
    ode::align_values(u, grid.theta);

    bool converged = false;
    double last_change = 0.0;
    for (long step = 0; step < config.max_steps; ++step) {
        StepRecord rec;
        rec.energy_before = discrete_functionals(u, grid, config.b).energy;

        std::vector<cdouble> flowed = semi_implicit_step(u, grid, config);
        RenormalizeInfo info;
        std::vector<cdouble> next = renormalize(flowed, grid, config, constraints, &info);
        ode::align_values(next, grid.theta);

        rec.energy_after_flow = info.measured.energy;
        rec.mass = info.measured.mass;
        rec.momentum = info.measured.momentum;
        rec.kinetic = info.measured.kinetic;
        rec.mu = info.mu;
        rec.omega = info.omega;
        rec.degenerate = info.degenerate;
        rec.max_mod_change = max_modulus_change(next, u);
        if (config.record_steps) diag.steps.push_back(rec);

        u = std::move(next);
        ++diag.total_steps;
        last_change = rec.max_mod_change;
        if (rec.max_mod_change < config.eps) {
            converged = true;
            break;
        }
    }
    diag.final_max_mod_change = last_change;
    if (!converged) {
        diag.converged = false;
        throw NonConvergence("minimize did not reach the moduli stopping threshold within " +
                                 std::to_string(config.max_steps) + " steps",
                             std::move(diag));
    }
    diag.converged = true;

    // Terminal projection: the renormalization is first-order accurate in
    // the constraint gap, so iterate it with the flow frozen. The loop aims
    // for near-machine residuals (the contraction is quadratic) so that the
    // energy comparison below happens at matched constraints, and accepts
    // once no further progress is made; the hard requirement stays at
    // 1e-6 relative.
    const double p_scale = std::max(1.0, std::abs(constraints.momentum));
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep <= kMaxSweepIterations; ++sweep) {
        const Functionals f = discrete_functionals(u, grid, config.b);
        diag.final_mass_residual = std::abs(f.mass - constraints.mass);
        diag.final_momentum_residual = std::abs(f.momentum - constraints.momentum);
        diag.final_energy = f.energy;
        const double gap = diag.final_mass_residual / constraints.mass +
                           diag.final_momentum_residual / p_scale;
        if (gap <= 1e-12 || gap >= 0.5 * prev_gap || sweep == kMaxSweepIterations) {
            if (diag.final_mass_residual > kMassResidualTol * constraints.mass ||
                diag.final_momentum_residual > kMomentumResidualTol * p_scale) {
                throw NonConvergence(
                    "terminal projection sweep failed to meet constraint residuals",
                    std::move(diag));
            }
            break;
        }
        prev_gap = gap;
        u = renormalize(u, grid, config, constraints, nullptr);
        ++diag.sweep_iterations;
    }

    // Variational polish: the constrained plane wave is always feasible and
    // is the exact minimizer on the E = E_- boundary, where the moduli
    // stopping test fires while a slowly decaying ripple mode is still
    // present. If that closed-form candidate has strictly lower discrete
    // energy than the projected iterate, it is the better answer to the
    // minimization problem and replaces it (its mass and momentum equal the
    // targets exactly, so the projection needs no rerun).
    if (std::abs(constraints.momentum * grid.dx() / constraints.mass) < 1.0) {
        std::vector<cdouble> pw = constrained_plane_wave(grid, constraints);
        const Functionals fpw = discrete_functionals(pw, grid, config.b);
        if (fpw.energy < diag.final_energy) {
            u = std::move(pw);
            diag.plane_wave_polish = true;
            diag.final_energy = fpw.energy;
            diag.final_mass_residual = std::abs(fpw.mass - constraints.mass);
            diag.final_momentum_residual = std::abs(fpw.momentum - constraints.momentum);
        }
    }
    ode::align_values(u, grid.theta);
    result.u = std::move(u);
    return result;
}

}  // namespace qpwave::gradflow
