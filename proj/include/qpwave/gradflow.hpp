#ifndef QPWAVE_GRADFLOW_HPP
#define QPWAVE_GRADFLOW_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpwave::gradflow {

using cdouble = std::complex<double>;

/// Uniform grid x^l = l dx, l = 0..L-1, dx = T/L, on the twisted-periodic
/// interval: any stencil access at l = -1 uses e^{-i theta} u^{L-1} and at
/// l = L uses e^{i theta} u^0.
struct Grid {
    Grid(double period_in, int points_in, double theta_in)
        : points(points_in), theta(theta_in), dx_(period_in / points_in) {
        if (points_in < 16) throw std::invalid_argument("grid needs at least 16 points");
    }
    int points;
    double theta;
    double dx() const { return dx_; }
    double period() const { return dx_ * points; }  // dx * L exactly
    double x(int l) const { return l * dx_; }

private:
    double dx_;
};

struct Constraints {
    double mass = 0.0;      // m > 0
    double momentum = 0.0;  // p
};

/// Sign of the transport term in the renormalization substep. The
/// continuous flow is du/dt = (mu + i omega d_x) u; CenteredPlus matches it.
/// CenteredMinus is the variant with (u^{l-1}-u^{l+1})/(2 dx), i.e. the
/// opposite transport direction, kept selectable for comparison.
enum class TransportStencil { CenteredPlus, CenteredMinus };

enum class InitialData {
    OnePlusICos,  // u0(x) = 1 + i + cos(2 pi x / T)
    ConstantOne,  // u0(x) = 1 + i
    SeededNoise,  // OnePlusICos plus small deterministic noise
};

struct FlowConfig {
    double dt = 1e-3;
    double eps = 1e-6;          // stopping threshold on moduli changes
    long max_steps = 500000;
    double b = 0.0;             // nonlinearity coefficient of the energy
    TransportStencil stencil = TransportStencil::CenteredPlus;
    InitialData initial = InitialData::OnePlusICos;
    unsigned noise_seed = 1;
    bool record_steps = true;   // keep the full per-step trace
};

/// Rectangle-rule functionals of a state; momentum and the kinetic term use
/// the twisted centered first difference.
struct Functionals {
    double mass = 0.0;      // m0 = (1/2) sum |u|^2 dx
    double momentum = 0.0;  // p0 = (1/2) Im sum u conj(D1 u) dx
    double kinetic = 0.0;   // k0 = (1/2) sum |D1 u|^2 dx
    double energy = 0.0;    // k0 - (b/4) sum |u|^4 dx
};

struct StepRecord {
    double energy_before = 0.0;      // energy of u_n
    double energy_after_flow = 0.0;  // energy of the flow substep output
    double mass = 0.0;               // m0 measured on the flow output
    double momentum = 0.0;           // p0
    double kinetic = 0.0;            // k0
    double mu = 0.0;
    double omega = 0.0;
    bool degenerate = false;         // Cauchy-Schwarz branch taken
    double max_mod_change = 0.0;     // max_l | |u_{n+1}| - |u_n| |
};

struct Diagnostics {
    std::vector<StepRecord> steps;
    long total_steps = 0;
    bool converged = false;
    double final_max_mod_change = 0.0;
    double final_mass_residual = 0.0;      // |M(u) - m|
    double final_momentum_residual = 0.0;  // |P(u) - p|
    double final_energy = 0.0;
    int sweep_iterations = 0;
    bool plane_wave_polish = false;  // the closed-form plane wave beat the iterate
};

/// minimize() failure carrying the diagnostics trace.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, Diagnostics diag)
        : std::runtime_error(what), diagnostics(std::move(diag)) {}
    Diagnostics diagnostics;
};

/// Twisted centered first difference (D1 u)^l = (u^{l+1} - u^{l-1})/(2 dx).
std::vector<cdouble> apply_gradient(const std::vector<cdouble>& u, const Grid& grid);

/// Twisted three-point Laplacian (D2 u)^l = (u^{l+1} - 2u^l + u^{l-1})/dx^2.
std::vector<cdouble> apply_laplacian(const std::vector<cdouble>& u, const Grid& grid);

Functionals discrete_functionals(const std::vector<cdouble>& u, const Grid& grid, double b);

/// One semi-implicit Euler substep of the energy gradient flow: solves
/// (I - dt D2 - dt b diag(|u_n|^2)) v = u_n.
std::vector<cdouble> semi_implicit_step(const std::vector<cdouble>& u, const Grid& grid,
                                        const FlowConfig& config);

struct RenormalizeInfo {
    double mu = 0.0;
    double omega = 0.0;
    bool degenerate = false;
    Functionals measured;  // functionals of the input state
};

/// Renormalization substep restoring mass and momentum to first order:
/// with m0, p0, k0 measured on the input, solves
/// (I - mu - i omega D1) u = input for
///   mu    = (k0 (m - m0) - p0 (p - p0)) / (2 (m0 k0 - p0^2)),
///   omega = (m0 (p - p0) - p0 (m - m0)) / (2 (m0 k0 - p0^2)).
/// When m0 k0 - p0^2 falls below the degeneracy threshold the state is a
/// discrete plane wave (Cauchy-Schwarz equality) and is replaced by the
/// constrained plane wave sqrt(2m/T) e^{-i gamma x} whose discrete mass and
/// momentum equal the targets exactly.
std::vector<cdouble> renormalize(const std::vector<cdouble>& u, const Grid& grid,
                                 const FlowConfig& config, const Constraints& constraints,
                                 RenormalizeInfo* info = nullptr);

struct MinimizeResult {
    std::vector<cdouble> u;  // aligned final state, L values
    Diagnostics diagnostics;
};

/// Full minimization loop: { semi-implicit flow step; renormalize; align }
/// until max_l | |u_{n+1}^l| - |u_n^l| | < eps, followed by a terminal
/// projection sweep (renormalize with the flow frozen) until
/// |M - m| <= 1e-6 m and |P - p| <= 1e-6 max(1, |p|).
MinimizeResult minimize(const Grid& grid, const Constraints& constraints,
                        const FlowConfig& config);

}  // namespace qpwave::gradflow

#endif  // QPWAVE_GRADFLOW_HPP
