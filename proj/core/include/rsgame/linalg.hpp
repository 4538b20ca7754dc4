#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rsgame {

// Small dense row-major matrix. All solvers in this project work at desk
// scale (tens of states, a handful of actions), so no sparse machinery.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const double> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix operator*(const Matrix& rhs) const;
    std::vector<double> operator*(const std::vector<double>& x) const;

    double max_abs() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Solves A x = b by LU with partial pivoting. Throws SolverError on a
// numerically singular pivot.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Spectral radius of a nonnegative matrix by power iteration with
// Collatz-Wielandt brackets. Returns 0 for the zero matrix.
double spectral_radius_nonnegative(const Matrix& a, double tol = 1e-12, int max_iter = 200000);

// Deterministic pairwise (cascade) summation over a fixed-order sequence.
double pairwise_sum(std::span<const double> xs);

double sup_norm(std::span<const double> xs);
double sup_norm_diff(std::span<const double> a, std::span<const double> b);

}  // namespace rsgame
