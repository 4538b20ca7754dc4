#include "rsgame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsgame/errors.hpp"

namespace rsgame {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

std::vector<double> Matrix::operator*(const std::vector<double>& x) const {
    std::vector<double> out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const int n = a.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::abs(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best < 1e-300) throw SolverError("singular linear system");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
        x[r] = acc / a(r, r);
    }
    return x;
}

double spectral_radius_nonnegative(const Matrix& a, double tol, int max_iter) {
    const int n = a.rows();
    if (n == 0 || a.max_abs() == 0.0) return 0.0;
    std::vector<double> x(n, 1.0);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> y = a * x;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            norm = std::max(norm, y[i]);
            if (x[i] > 0.0) {
                const double ratio = y[i] / x[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        if (norm == 0.0) return 0.0;
        if (hi - lo <= tol * std::max(1.0, hi)) return 0.5 * (lo + hi);
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    // Nonnegative but possibly reducible matrices may keep a small bracket
    // gap; the midpoint is still a usable two-sided estimate.
    return 0.5 * (lo + hi);
}

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double acc = 0.0;
        for (double v : xs) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double sup_norm(std::span<const double> xs) {
    double m = 0.0;
    for (double v : xs) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace rsgame
