#ifndef QPWAVE_ODE_HPP
#define QPWAVE_ODE_HPP

#include <complex>
#include <vector>

#include "qpwave/profile.hpp"

namespace qpwave::ode {

using cdouble = std::complex<double>;

/// A profile sampled on the uniform grid x_l = l T/L, l = 0..L. The last
/// value is the point at x = T, which satisfies the twisted closure
/// u(T) = e^{i theta} u(0) up to the integration tolerance.
struct WaveSample {
    std::vector<double> grid;      // L+1 points
    std::vector<cdouble> values;   // L+1 values
    double theta = 0.0;            // Floquet multiplier in [0, 2pi)
    profile::ProblemParams params;

    int cells() const { return static_cast<int>(grid.size()) - 1; }
};

struct IntegrationStats {
    double j_drift = 0.0;          // max relative drift of Im(u conj(u'))
    double e_drift = 0.0;          // max relative drift of the profile energy
    double quasi_residual = 0.0;   // |u(T)-e^{i theta}u(0)| + |u'(T)-e^{i theta}u'(0)|
    int substeps_per_cell = 1;     // RK4 refinement N actually used
};

/// Integrate u'' + a u + b|u|^2 u = 0 over one period with classical RK4 at
/// fixed step T/(N L), N doubled until the invariant drift is <= 1e-8
/// (error if N would exceed 64). Initial data: u(0) = r1, u'(0) = -i J/r1
/// for J > 0; at the modulus extremum with u'(0) = 0 for the dn and cn
/// families; u(0) = 0, u'(0) = sqrt(2E) for sn.
WaveSample integrate_profile(const profile::ProblemParams& params, int grid_points,
                             IntegrationStats* stats = nullptr);

/// Cyclic translation (values crossing the seam pick up e^{-+i theta}) so
/// that argmin |u| lands at index 0, then a global phase rotation making
/// u(0) real and >= 0. When |u(0)| vanishes after the shift (real
/// anti-periodic profiles cross zero there) the sample of largest modulus
/// anchors the phase instead.
void align_values(std::vector<cdouble>& u, double theta);

/// align_values applied to a WaveSample, preserving the L+1 layout.
WaveSample align(const WaveSample& sample);

}  // namespace qpwave::ode

#endif  // QPWAVE_ODE_HPP
