#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/csv.hpp"
#include "qmon/model.hpp"
#include "qmon/noisefit.hpp"

namespace qmon::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_data = 3, exit_numerical = 4 };

std::string version();

enum class Engine { exact, markov, closed_form, sample };
std::string_view to_string(Engine e);
Engine parse_engine(std::string_view name);

/// `count` evenly spaced points from start to stop inclusive; the last point
/// is exactly `stop`. A single point sits at `start`.
struct TauGrid {
    double start = 0.0;
    double stop = std::numbers::pi;
    std::size_t count = 33;
    std::vector<double> points() const;
};

struct ModelChoice {
    std::string name = "single_qubit";
    /// Takes precedence over `name` when set.
    std::filesystem::path file;
    Model load() const;
};

struct RunConfig {
    ModelChoice model;
    TauGrid tau;
    std::size_t n_max = 32;
    double gamma = 0.0;
    std::size_t n_shots = 8192;
    std::uint64_t seed = 0;
    Engine engine = Engine::exact;
    std::filesystem::path out_dir = "qmon_out";
    /// Throws InvalidArgument: tau grid inside [0, 2 pi] with start <= stop,
    /// count >= 1, gamma in [0, 1], n_shots >= 1.
    void validate() const;
};

/// Runs one engine over the tau grid. Throws InvalidArgument for an
/// engine/model mismatch.
SweepTable simulate_table(const RunConfig &cfg, const Model &m);

/// Writes trace.csv and summary.json into cfg.out_dir; returns the summary.
Json cmd_simulate(const RunConfig &cfg);

/// Writes analysis.json into cfg.out_dir; returns it.
Json cmd_analyze(const RunConfig &cfg);

struct FitConfig {
    std::filesystem::path input;
    ModelChoice model;
    /// Defaults to 1..n_max of the input.
    std::optional<NRange> range;
    std::optional<LayerCount> layers;
    std::optional<std::filesystem::path> hw_profile;
    std::filesystem::path out_dir = "qmon_out";
};

/// Parses "FIRST,LAST".
NRange parse_n_range(std::string_view text);

/// Writes fit.json into cfg.out_dir; returns it.
Json cmd_fit_noise(const FitConfig &cfg);

enum class RenderKind { heatmap, lines, rho_grid };
RenderKind parse_render_kind(std::string_view name);
std::string_view to_string(RenderKind k);

struct RenderConfig {
    std::filesystem::path input;
    RenderKind kind = RenderKind::heatmap;
    /// Defaults to <out_dir>/<kind>.svg.
    std::optional<std::filesystem::path> output;
    std::filesystem::path out_dir = "qmon_out";
    std::vector<std::size_t> n_list{1, 2, 5, 10, 20};
    /// rho_grid only.
    std::optional<ModelChoice> model;
    std::optional<double> tau;
    std::optional<std::size_t> n;
};

/// Returns the SVG text for the table; exposed for tests.
std::string render_svg(const SweepTable &table, const RenderConfig &cfg);

/// Writes the SVG; returns {"schema_version", "files": [...]}.
Json cmd_render(const RenderConfig &cfg);

struct TimingConfig {
    LayerCount layers;
    std::optional<double> gamma;
    std::optional<std::filesystem::path> hw_profile;
};

Json cmd_timing(const TimingConfig &cfg);

} // namespace qmon::cli
