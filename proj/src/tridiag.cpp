#include "qpwave/tridiag.hpp"

#include <algorithm>
#include <cmath>

#include "qpwave/errors.hpp"

namespace qpwave::linalg {

namespace {

// LU factorization of a tridiagonal matrix with partial pivoting (the
// pivoted variant of the Thomas algorithm; row swaps introduce a second
// superdiagonal).
class TridiagLU {
public:
    TridiagLU(std::vector<cdouble> lower, std::vector<cdouble> diag, std::vector<cdouble> upper)
        : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
        const int n = static_cast<int>(d_.size());
        du2_.assign(n > 2 ? static_cast<std::size_t>(n - 2) : 0, 0.0);
        swapped_.assign(n > 1 ? static_cast<std::size_t>(n - 1) : 0, false);
        double scale = 0.0;
        for (const cdouble& v : d_) scale = std::max(scale, std::abs(v));
        for (const cdouble& v : dl_) scale = std::max(scale, std::abs(v));
        for (const cdouble& v : du_) scale = std::max(scale, std::abs(v));
        const double tiny = 1e-300 + 1e-16 * scale * 1e-4;
        for (int i = 0; i + 1 < n; ++i) {
            auto iu = static_cast<std::size_t>(i);
            if (std::abs(d_[iu]) >= std::abs(dl_[iu])) {
                if (std::abs(d_[iu]) < tiny) throw SolverFailure("tridiagonal pivot vanished");
                const cdouble mult = dl_[iu] / d_[iu];
                dl_[iu] = mult;
                d_[iu + 1] -= mult * du_[iu];
                if (i + 2 < n) du2_[iu] = 0.0;
            } else {
                swapped_[iu] = true;
                const cdouble mult = d_[iu] / dl_[iu];
                d_[iu] = dl_[iu];
                dl_[iu] = mult;
                const cdouble tmp = du_[iu];
                du_[iu] = d_[iu + 1];
                d_[iu + 1] = tmp - mult * d_[iu + 1];
                if (i + 2 < n) {
                    du2_[iu] = du_[iu + 1];
                    du_[iu + 1] = -mult * du_[iu + 1];
                }
            }
        }
        if (n > 0 && std::abs(d_[static_cast<std::size_t>(n - 1)]) < tiny) {
            throw SolverFailure("tridiagonal pivot vanished");
        }
    }

    std::vector<cdouble> solve(std::vector<cdouble> b) const {
        const int n = static_cast<int>(d_.size());
        for (int i = 0; i + 1 < n; ++i) {
            auto iu = static_cast<std::size_t>(i);
            if (swapped_[iu]) std::swap(b[iu], b[iu + 1]);
            b[iu + 1] -= dl_[iu] * b[iu];
        }
        for (int i = n - 1; i >= 0; --i) {
            auto iu = static_cast<std::size_t>(i);
            cdouble v = b[iu];
            if (i + 1 < n) v -= du_[iu] * b[iu + 1];
            if (i + 2 < n) v -= du2_[iu] * b[iu + 2];
            b[iu] = v / d_[iu];
        }
        return b;
    }

private:
    std::vector<cdouble> dl_, d_, du_, du2_;
    std::vector<bool> swapped_;
};

double max_abs(const std::vector<cdouble>& v) {
    double m = 0.0;
    for (const cdouble& z : v) m = std::max(m, std::abs(z));
    return m;
}

std::vector<cdouble> solve_with_corners(const TridiagLU& lu, const TwistedTridiagonal& mat,
                                        const std::vector<cdouble>& rhs) {
    const int n = mat.size();
    std::vector<cdouble> x = lu.solve(rhs);
    if (mat.corner_top == cdouble(0.0) && mat.corner_bottom == cdouble(0.0)) return x;
    // A = T + U V^T with U = [ct e0 | cb e_{n-1}], V = [e_{n-1} | e0].
    std::vector<cdouble> u1(static_cast<std::size_t>(n), 0.0);
    std::vector<cdouble> u2(static_cast<std::size_t>(n), 0.0);
    u1[0] = mat.corner_top;
    u2[static_cast<std::size_t>(n - 1)] = mat.corner_bottom;
    const std::vector<cdouble> w1 = lu.solve(u1);
    const std::vector<cdouble> w2 = lu.solve(u2);
    // Capacitance C = I2 + V^T [w1 w2]; V^T picks rows n-1 and 0.
    const cdouble c11 = 1.0 + w1[static_cast<std::size_t>(n - 1)];
    const cdouble c12 = w2[static_cast<std::size_t>(n - 1)];
    const cdouble c21 = w1[0];
    const cdouble c22 = 1.0 + w2[0];
    const cdouble det = c11 * c22 - c12 * c21;
    const double cscale = std::max({std::abs(c11), std::abs(c12), std::abs(c21), std::abs(c22), 1.0});
    if (std::abs(det) < 1e-14 * cscale * cscale) {
        throw SolverFailure("twisted correction system is singular");
    }
    const cdouble z1 = x[static_cast<std::size_t>(n - 1)];
    const cdouble z2 = x[0];
    const cdouble g1 = (c22 * z1 - c12 * z2) / det;
    const cdouble g2 = (-c21 * z1 + c11 * z2) / det;
    for (int i = 0; i < n; ++i) {
        auto iu = static_cast<std::size_t>(i);
        x[iu] -= w1[iu] * g1 + w2[iu] * g2;
    }
    return x;
}

}  // namespace

std::vector<cdouble> TwistedTridiagonal::apply(const std::vector<cdouble>& x) const {
    const int n = size();
    std::vector<cdouble> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        auto iu = static_cast<std::size_t>(i);
        cdouble v = diag[iu] * x[iu];
        if (i > 0) v += lower[iu - 1] * x[iu - 1];
        if (i + 1 < n) v += upper[iu] * x[iu + 1];
        y[iu] = v;
    }
    y[0] += corner_top * x[static_cast<std::size_t>(n - 1)];
    y[static_cast<std::size_t>(n - 1)] += corner_bottom * x[0];
    return y;
}

std::vector<cdouble> solve_twisted(const TwistedTridiagonal& mat, const std::vector<cdouble>& rhs) {
    const int n = mat.size();
    if (n < 3) throw DomainError("solve_twisted requires n >= 3");
    if (static_cast<int>(rhs.size()) != n) throw DomainError("rhs size mismatch");
    const TridiagLU lu(mat.lower, mat.diag, mat.upper);
    std::vector<cdouble> x = solve_with_corners(lu, mat, rhs);

    double mat_scale = std::abs(mat.corner_top) + std::abs(mat.corner_bottom);
    for (const cdouble& v : mat.diag) mat_scale = std::max(mat_scale, std::abs(v));
    for (const cdouble& v : mat.lower) mat_scale = std::max(mat_scale, std::abs(v));
    for (const cdouble& v : mat.upper) mat_scale = std::max(mat_scale, std::abs(v));

    const auto residual = [&](const std::vector<cdouble>& sol) {
        const std::vector<cdouble> ax = mat.apply(sol);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            auto iu = static_cast<std::size_t>(i);
            r = std::max(r, std::abs(ax[iu] - rhs[iu]));
        }
        return r;
    };
    const double tol = 1e-12 * std::max(max_abs(rhs), mat_scale * max_abs(x));
    double r = residual(x);
    if (r > tol) {
        // One step of iterative refinement.
        std::vector<cdouble> res(static_cast<std::size_t>(n));
        const std::vector<cdouble> ax = mat.apply(x);
        for (int i = 0; i < n; ++i) {
            auto iu = static_cast<std::size_t>(i);
            res[iu] = rhs[iu] - ax[iu];
        }
        const std::vector<cdouble> dx = solve_with_corners(lu, mat, res);
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += dx[static_cast<std::size_t>(i)];
        r = residual(x);
        if (r > tol) {
            throw SolverFailure("twisted tridiagonal solve residual above tolerance");
        }
    }
    return x;
}

}  // namespace qpwave::linalg
