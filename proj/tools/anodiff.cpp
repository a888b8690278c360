// Command-line driver: single runs, eps sweeps against the limit equation,
// and dt self-convergence sweeps. Settings come from defaults, then an
// optional key=value file (--config), then --key value flags.

#include "anodiff/harness/config.hpp"
#include "anodiff/harness/runner.hpp"
#include "anodiff/harness/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <map>
#include <string>

namespace {

namespace h = anodiff::harness;

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Overrides {
    std::string config_file;
    std::map<std::string, std::string> values;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "key=value settings file")->check(CLI::ExistingFile);
    for (const auto& key : h::config_keys()) {
        cmd->add_option_function<std::string>(
            "--" + key, [&o, key](const std::string& v) { o.values[key] = v; }, "override '" + key + "'");
    }
}

h::RunConfig resolve(const Overrides& o) {
    std::map<std::string, std::string> file;
    if (!o.config_file.empty()) file = h::read_settings_file(o.config_file);
    return h::resolve_config(file, o.values);
}

void emit(const h::CsvTable& table, const std::string& path) {
    if (path.empty()) h::write_csv(table, std::cout);
    else h::write_csv(table, path);
}

int cmd_run(const Overrides& o) {
    auto cfg = resolve(o);
    const std::string path = cfg.output;
    cfg.output.clear();
    const auto r = h::run_single(cfg);
    emit(h::density_table(r), path);
    return 0;
}

int cmd_sweep_eps(const Overrides& o) {
    const auto cfg = resolve(o);
    const auto s = h::sweep_eps(cfg, cfg.eps_list);
    emit(h::sweep_table(s), cfg.output);
    std::cerr << "scheme " << h::to_string(cfg.scheme) << ", compared quantity " << s.quantity
              << ", error decreases with eps: " << (s.monotone_in_eps() ? "yes" : "no") << '\n';
    return 0;
}

int cmd_sweep_dt(const Overrides& o) {
    const auto cfg = resolve(o);
    const auto s = h::sweep_dt(cfg, cfg.eps_list, cfg.dt_list);
    emit(h::sweep_table(s), cfg.output);
    std::cerr << "scheme " << h::to_string(cfg.scheme) << ", compared quantity " << s.quantity << '\n';
    for (double eps : cfg.eps_list) {
        const auto rows = s.rows_for(eps);
        std::cerr << "  eps " << eps << ": finest observed order " << rows.back().order << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinetic solvers in the anomalous diffusion scaling"};
    app.require_subcommand(1);
    Overrides run_o, eps_o, dt_o;
    auto* run = app.add_subcommand("run", "run one scheme and write the densities");
    auto* sweep_eps = app.add_subcommand("sweep-eps", "error against the limit equation for a list of eps");
    auto* sweep_dt = app.add_subcommand("sweep-dt", "self-convergence in dt for a list of eps");
    add_config_options(run, run_o);
    add_config_options(sweep_eps, eps_o);
    add_config_options(sweep_dt, dt_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (run->parsed()) return cmd_run(run_o);
        if (sweep_eps->parsed()) return cmd_sweep_eps(eps_o);
        return cmd_sweep_dt(dt_o);
    } catch (const anodiff::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const anodiff::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
