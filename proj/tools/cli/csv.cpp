#include "cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace qmon::cli {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() || !std::isfinite(v)) {
        throw DataError("csv line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not a number");
    }
    return v;
}

std::size_t parse_index(std::string_view field, std::size_t line_no) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw DataError("csv line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not a cycle index");
    }
    return v;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

} // namespace

std::string format_double(double x) {
    // same digits as %.17g, independent of the global locale
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, end};
}

void write_csv(std::ostream &out, const SweepTable &table) {
    out << "tau,n";
    for (const auto &l : table.labels) out << ",P_" << l;
    if (table.has_stderr())
        for (const auto &l : table.labels) out << ",stderr_" << l;
    out << '\n';
    for (std::size_t t = 0; t < table.taus.size(); ++t) {
        const auto &tr = table.traces[t];
        for (std::size_t n = 0; n < tr.rows(); ++n) {
            out << format_double(table.taus[t]) << ',' << n;
            for (std::size_t k = 0; k < tr.dim(); ++k) out << ',' << format_double(tr.at(n, k));
            if (table.has_stderr())
                for (std::size_t k = 0; k < tr.dim(); ++k) out << ',' << format_double(table.stderrs[t].at(n, k));
            out << '\n';
        }
    }
}

SweepTable read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    if (header.size() < 3 || header[0] != "tau" || header[1] != "n") {
        throw DataError("csv: header must start with 'tau,n' followed by probability columns");
    }
    SweepTable table;
    std::size_t n_stderr = 0;
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (starts_with(header[i], "P_") && n_stderr == 0) {
            table.labels.emplace_back(header[i].substr(2));
        } else if (starts_with(header[i], "stderr_")) {
            const auto idx = n_stderr++;
            if (idx >= table.labels.size() || header[i].substr(7) != table.labels[idx]) {
                throw DataError("csv: stderr columns must repeat the probability labels in order");
            }
        } else {
            throw DataError("csv: unexpected column '" + std::string(header[i]) + "'");
        }
    }
    if (table.labels.empty()) throw DataError("csv: no probability columns");
    if (n_stderr != 0 && n_stderr != table.labels.size()) throw DataError("csv: incomplete stderr columns");
    const std::size_t dim = table.labels.size();

    struct Row {
        double tau;
        std::size_t n;
        std::vector<double> values;
    };
    std::vector<std::vector<Row>> blocks;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            throw DataError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        }
        Row r{parse_double(fields[0], line_no), parse_index(fields[1], line_no), {}};
        for (std::size_t i = 2; i < fields.size(); ++i) r.values.push_back(parse_double(fields[i], line_no));
        if (r.n == 0) {
            blocks.emplace_back();
        } else if (blocks.empty() || blocks.back().back().n + 1 != r.n || blocks.back().back().tau != r.tau) {
            throw DataError("csv line " + std::to_string(line_no) + ": rows must run n = 0, 1, 2, ... within each tau");
        }
        blocks.back().push_back(std::move(r));
    }
    if (blocks.empty()) throw DataError("csv: no data rows");

    const std::size_t rows = blocks.front().size();
    for (const auto &b : blocks) {
        if (b.size() != rows) throw DataError("csv: every tau block must have the same n range");
        ProbabilityTrace p(rows - 1, dim);
        ProbabilityTrace e(rows - 1, dim);
        for (std::size_t n = 0; n < rows; ++n)
            for (std::size_t k = 0; k < dim; ++k) {
                p.at(n, k) = b[n].values[k];
                if (n_stderr) e.at(n, k) = b[n].values[dim + k];
            }
        table.taus.push_back(b.front().tau);
        table.traces.push_back(std::move(p));
        if (n_stderr) table.stderrs.push_back(std::move(e));
    }
    return table;
}

} // namespace qmon::cli
