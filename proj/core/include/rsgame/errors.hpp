#pragma once

#include <stdexcept>
#include <string>

namespace rsgame {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model data fails a structural invariant (bad tensor entry, bad index, ...).
struct ValidationError : Error {
    using Error::Error;
};

struct BadTruncationLevel final : ValidationError {
    explicit BadTruncationLevel(int n, int num_states)
        : ValidationError("truncation level " + std::to_string(n) +
                          " outside [1, " + std::to_string(num_states) + "]") {}
};

struct NonFiniteEntry final : ValidationError {
    NonFiniteEntry(int row, int col)
        : ValidationError("non-finite payoff entry at (" + std::to_string(row) +
                          ", " + std::to_string(col) + ")") {}
};

// A solver could not meet its contract (no convergence, unstable step, ...).
struct SolverError : Error {
    using Error::Error;
};

struct GridTooCoarse final : SolverError {
    GridTooCoarse(double error_estimate, double tolerance)
        : SolverError("quadrature error estimate " + std::to_string(error_estimate) +
                      " exceeds tolerance " + std::to_string(tolerance)),
          error_estimate(error_estimate), tolerance(tolerance) {}
    double error_estimate;
    double tolerance;
};

struct NoConvergence final : SolverError {
    NoConvergence(const std::string& where, double last_delta)
        : SolverError("no convergence in " + where + ", last delta " +
                      std::to_string(last_delta)),
          last_delta(last_delta) {}
    double last_delta;
};

struct StepUnstable final : SolverError {
    explicit StepUnstable(const std::string& what) : SolverError(what) {}
};

struct PowerIterationStalled final : SolverError {
    PowerIterationStalled(int iterations, double bracket)
        : SolverError("power iteration stalled after " + std::to_string(iterations) +
                      " iterations, Collatz-Wielandt bracket " + std::to_string(bracket)) {}
};

struct SeriesTruncationOverflow final : SolverError {
    explicit SeriesTruncationOverflow(const std::string& what) : SolverError(what) {}
};

struct MomentInfinite final : SolverError {
    explicit MomentInfinite(const std::string& what) : SolverError(what) {}
};

struct SeriesDiverges final : SolverError {
    explicit SeriesDiverges(const std::string& what) : SolverError(what) {}
};

struct NotIrreducible final : Error {
    explicit NotIrreducible(const std::string& what) : Error(what) {}
};

// A hard precondition gate (certificate or small-cost check) failed.
struct GateFailed final : Error {
    explicit GateFailed(const std::string& which)
        : Error("solver gate failed: " + which), which(which) {}
    std::string which;
};

}  // namespace rsgame
