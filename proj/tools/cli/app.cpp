#include "cli/app.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace qmon::cli {

namespace {

struct Flags {
    std::string model = "single_qubit";
    std::string model_file;
    std::string engine = "exact";
    double tau_start = 0.0;
    double tau_stop = std::numbers::pi;
    std::size_t tau_count = 33;
    std::size_t n_max = 32;
    double gamma = 0.0;
    std::size_t shots = 8192;
    std::uint64_t seed = 0;
    std::string out_dir = "qmon_out";
    std::string input;
    std::string n_fit_range;
    std::string layers;
    std::string hw_profile;
    std::string kind = "heatmap";
    std::string output;
    std::vector<std::size_t> n_list{1, 2, 5, 10, 20};
    double tau = 0.0;
    std::size_t n = 0;
};

void add_model(CLI::App *cmd, Flags &f) {
    cmd->add_option("--model", f.model, "single_qubit | two_qubit_singlet_triplet | two_qubit_bell")
        ->capture_default_str();
    cmd->add_option("--model-file", f.model_file, "custom model JSON (overrides --model)");
}

void add_out(CLI::App *cmd, Flags &f) {
    cmd->add_option("--out", f.out_dir, "output directory")->envname("QMON_OUT_DIR")->capture_default_str();
}

void add_run_options(CLI::App *cmd, Flags &f) {
    add_model(cmd, f);
    cmd->add_option("--tau-start", f.tau_start, "first tau")->capture_default_str();
    cmd->add_option("--tau-stop", f.tau_stop, "last tau")->capture_default_str();
    cmd->add_option("--tau-count", f.tau_count, "number of tau points")->capture_default_str();
    add_out(cmd, f);
}

ModelChoice model_choice(const Flags &f) { return {f.model, f.model_file}; }

RunConfig run_config(const Flags &f) {
    RunConfig c;
    c.model = model_choice(f);
    c.tau = {f.tau_start, f.tau_stop, f.tau_count};
    c.n_max = f.n_max;
    c.gamma = f.gamma;
    c.n_shots = f.shots;
    c.seed = f.seed;
    c.engine = parse_engine(f.engine);
    c.out_dir = f.out_dir;
    c.validate();
    return c;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulate quantum systems under repeated projective measurements", "qmon"};
    app.set_version_flag("--version", version());
    app.set_config("--config", "", "INI config file; [simulate], [analyze], ... sections set subcommand flags");
    app.require_subcommand(1);
    Flags f;

    auto *simulate = app.add_subcommand("simulate", "write outcome probabilities over a tau grid as CSV");
    add_run_options(simulate, f);
    simulate->add_option("--engine", f.engine, "exact | markov | closed_form | sample")->capture_default_str();
    simulate->add_option("--n-max", f.n_max, "last measurement cycle")->capture_default_str();
    simulate->add_option("--gamma", f.gamma, "depolarizing strength per cycle")->capture_default_str();
    simulate->add_option("--shots", f.shots, "shots per tau (sample engine)")->capture_default_str();
    simulate->add_option("--seed", f.seed, "RNG seed (sample engine)")->capture_default_str();

    auto *analyze = app.add_subcommand("analyze", "spectrum, regime and n -> infinity limit of the outcome chain");
    add_run_options(analyze, f);

    auto *fit = app.add_subcommand("fit-noise", "fit the depolarizing strength to a simulate CSV");
    fit->add_option("input", f.input, "CSV written by simulate")->required();
    add_model(fit, f);
    fit->add_option("--n-fit-range", f.n_fit_range, "FIRST,LAST cycles to fit (default 1,n_max)");
    fit->add_option("--layers", f.layers, "1q,cnot,meas layer counts for the decay rate");
    fit->add_option("--hw-profile", f.hw_profile, "hardware profile JSON");
    add_out(fit, f);

    auto *render = app.add_subcommand("render", "draw a simulate CSV as SVG");
    render->add_option("input", f.input, "CSV written by simulate")->required();
    render->add_option("--kind", f.kind, "heatmap | lines | rho_grid")->capture_default_str();
    render->add_option("--output", f.output, "SVG path (default <out>/<kind>.svg)");
    render->add_option("--n-list", f.n_list, "cycles drawn by --kind lines")->delimiter(',');
    add_model(render, f);
    auto *tau_opt = render->add_option("--tau", f.tau, "tau of the rho_grid snapshot");
    auto *n_opt = render->add_option("--n", f.n, "cycle of the rho_grid snapshot");
    add_out(render, f);

    auto *timing = app.add_subcommand("timing", "cycle duration and decay rate from layer counts");
    timing->add_option("--layers", f.layers, "1q,cnot,meas layer counts")->required();
    auto *gamma_opt = timing->add_option("--gamma", f.gamma, "depolarizing strength for the decay rate");
    timing->add_option("--hw-profile", f.hw_profile, "hardware profile JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion &) {
        out << version() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "qmon: configuration error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        Json result;
        if (*simulate) {
            result = cmd_simulate(run_config(f));
        } else if (*analyze) {
            result = cmd_analyze(run_config(f));
        } else if (*fit) {
            FitConfig c;
            c.input = f.input;
            c.model = model_choice(f);
            if (!f.n_fit_range.empty()) c.range = parse_n_range(f.n_fit_range);
            if (!f.layers.empty()) c.layers = parse_layers(f.layers);
            if (!f.hw_profile.empty()) c.hw_profile = f.hw_profile;
            c.out_dir = f.out_dir;
            result = cmd_fit_noise(c);
        } else if (*render) {
            RenderConfig c;
            c.input = f.input;
            c.kind = parse_render_kind(f.kind);
            if (!f.output.empty()) c.output = f.output;
            c.out_dir = f.out_dir;
            c.n_list = f.n_list;
            if (render->count("--model") || render->count("--model-file")) c.model = model_choice(f);
            if (tau_opt->count()) c.tau = f.tau;
            if (n_opt->count()) c.n = f.n;
            result = cmd_render(c);
        } else if (*timing) {
            TimingConfig c;
            c.layers = parse_layers(f.layers);
            if (gamma_opt->count()) c.gamma = f.gamma;
            if (!f.hw_profile.empty()) c.hw_profile = f.hw_profile;
            result = cmd_timing(c);
        }
        out << result.dump(2) << '\n';
        return exit_ok;
    } catch (const InvalidArgument &e) {
        err << "qmon: configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const DataError &e) {
        err << "qmon: data error: " << e.what() << '\n';
        return exit_data;
    } catch (const NumericalError &e) {
        err << "qmon: numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace qmon::cli
