#ifndef QPWAVE_TRIDIAG_HPP
#define QPWAVE_TRIDIAG_HPP

#include <complex>
#include <vector>

namespace qpwave::linalg {

using cdouble = std::complex<double>;

/// A complex tridiagonal matrix plus the two wrap-around corner entries
/// A[0][n-1] and A[n-1][0] that twisted-periodic difference operators carry.
struct TwistedTridiagonal {
    std::vector<cdouble> diag;    // n entries
    std::vector<cdouble> lower;   // n-1 entries, A[i+1][i]
    std::vector<cdouble> upper;   // n-1 entries, A[i][i+1]
    cdouble corner_top = 0.0;     // A[0][n-1]
    cdouble corner_bottom = 0.0;  // A[n-1][0]

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<cdouble> apply(const std::vector<cdouble>& x) const;
};

/// Solve A x = rhs with the tridiagonal interior factored by partial-pivoted
/// elimination (Thomas with row interchanges) and the two corner entries
/// folded back in through a rank-2 Sherman-Morrison-Woodbury correction.
/// One step of iterative refinement is applied if needed; throws
/// SolverFailure if the system is singular or the refined residual exceeds
/// 1e-12 relative.
std::vector<cdouble> solve_twisted(const TwistedTridiagonal& mat, const std::vector<cdouble>& rhs);

}  // namespace qpwave::linalg

#endif  // QPWAVE_TRIDIAG_HPP
