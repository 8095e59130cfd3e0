#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qmon/trace.hpp"

namespace qmon::cli {

/// One probability trace per tau, as written by `simulate`.
///
/// CSV layout: header `tau,n,P_<label>...[,stderr_<label>...]`, then one row
/// per (tau, n) with n running 0..n_max inside each tau block. Values use
/// 17 significant digits so a write/read cycle is lossless.
struct SweepTable {
    std::vector<std::string> labels;
    std::vector<double> taus;
    std::vector<ProbabilityTrace> traces;
    /// Empty unless the table came from the sampling engine.
    std::vector<ProbabilityTrace> stderrs;

    std::size_t dim() const { return labels.size(); }
    std::size_t n_max() const { return traces.empty() ? 0 : traces.front().n_max(); }
    bool has_stderr() const { return !stderrs.empty(); }
};

void write_csv(std::ostream &out, const SweepTable &table);

/// Throws DataError on any schema violation.
SweepTable read_csv(std::istream &in);

std::string format_double(double x);

} // namespace qmon::cli
