#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmon/errors.hpp"

namespace qmon {

/// Outcome probabilities P^n_k for n = 0..n_max, one row per n.
class ProbabilityTrace {
  public:
    ProbabilityTrace() = default;
    ProbabilityTrace(std::size_t n_max, std::size_t dim) : dim_(dim), rows_(n_max + 1), values_((n_max + 1) * dim) {
        if (dim == 0) throw InvalidArgument("ProbabilityTrace: dim must be positive");
    }

    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return rows_; }
    std::size_t n_max() const { return rows_ - 1; }

    double &at(std::size_t n, std::size_t k) { return values_[n * dim_ + k]; }
    double at(std::size_t n, std::size_t k) const { return values_[n * dim_ + k]; }

    std::span<double> row(std::size_t n) { return {values_.data() + n * dim_, dim_}; }
    std::span<const double> row(std::size_t n) const { return {values_.data() + n * dim_, dim_}; }

    void set_row(std::size_t n, std::span<const double> p) {
        if (p.size() != dim_) throw InvalidArgument("ProbabilityTrace: row length mismatch");
        for (std::size_t k = 0; k < dim_; ++k) at(n, k) = p[k];
    }

    /// Largest |row sum - 1| over all rows.
    double max_normalization_error() const {
        double worst = 0.0;
        for (std::size_t n = 0; n < rows_; ++n) {
            double s = 0.0;
            for (double x : row(n)) s += x;
            worst = std::max(worst, s > 1.0 ? s - 1.0 : 1.0 - s);
        }
        return worst;
    }

  private:
    std::size_t dim_ = 0;
    std::size_t rows_ = 0;
    std::vector<double> values_;
};

/// max |a - b| over all cells; traces must have equal shape.
inline double max_abs_difference(const ProbabilityTrace &a, const ProbabilityTrace &b) {
    if (a.dim() != b.dim() || a.rows() != b.rows()) throw InvalidArgument("trace shapes differ");
    double worst = 0.0;
    for (std::size_t n = 0; n < a.rows(); ++n)
        for (std::size_t k = 0; k < a.dim(); ++k) {
            const double d = a.at(n, k) - b.at(n, k);
            worst = std::max(worst, d < 0 ? -d : d);
        }
    return worst;
}

} // namespace qmon
