#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quatspec {

/// Raised when a quaternion or matrix that must be invertible is not.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A square quaternionic matrix whose Study determinant vanishes.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(double sdet_value)
        : std::runtime_error("singular matrix (sdet = " + std::to_string(sdet_value) + ")"),
          sdet_(sdet_value) {}

    double sdet() const noexcept { return sdet_; }

private:
    double sdet_;
};

class RankDeficientError : public std::runtime_error {
public:
    explicit RankDeficientError(int rank)
        : std::runtime_error("rank-deficient bilateral form (rank " + std::to_string(rank) + ")"),
          rank_(rank) {}

    int rank() const noexcept { return rank_; }

private:
    int rank_;
};

/// A construction was asked for on an input that belongs to a different case
/// (e.g. a pole requested for a matrix whose (1,3) entry is zero).
class CaseError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Root finding exhausted every start without a verified root.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal arithmetic disagreed with itself beyond rounding.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace quatspec
