// grp-solve: run presets or config files, convergence studies, preset listing.
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "grp/harness/presets.hpp"
#include "grp/harness/problem.hpp"

using namespace grp;
using namespace grp::harness;

namespace {

std::string preset_dir_default() {
    if (const char* env = std::getenv("GRP_PRESET_DIR")) return env;
    return GRP_PRESET_DIR;
}

struct Source {
    std::string preset, config;
};

ProblemConfig load(const Source& s, const std::string& dir) {
    if (!s.preset.empty()) return load_preset(dir, s.preset);
    ProblemConfig c = load_config_file(s.config);
    if (c.name.empty()) c.name = s.config;
    return c;
}

void print_errors(const ErrorReport& e) {
    std::cout << "error vs " << e.reference << ":\n";
    for (std::size_t i = 0; i < e.names.size(); ++i)
        std::cout << "  " << std::left << std::setw(6) << e.names[i] << " L1 " << std::setprecision(6)
                  << std::scientific << e.l1[i] << "  L2 " << e.l2[i] << "  Linf " << e.linf[i] << '\n';
    std::cout << std::defaultfloat;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-order HLL/HLLI generalized Riemann problem solver for 1D hyperbolic systems"};
    app.require_subcommand(1);
    std::string preset_dir = preset_dir_default();
    app.add_option("--preset-dir", preset_dir, "Directory holding <name>.cfg presets");

    Source run_src;
    std::optional<int> zones;
    std::optional<double> cfl, tend;
    std::string solver, out;
    auto* run = app.add_subcommand("run", "Run one problem to its end time");
    auto* p1 = run->add_option("--preset", run_src.preset, "Preset name");
    auto* c1 = run->add_option("--config", run_src.config, "Config file")->check(CLI::ExistingFile);
    p1->excludes(c1);
    run->add_option("--zones", zones, "Override n_zones")->check(CLI::Range(8, 100000000));
    run->add_option("--cfl", cfl, "Override CFL number")->check(CLI::Range(1e-12, 1.0));
    run->add_option("--tend", tend, "Override end time")->check(CLI::PositiveNumber);
    run->add_option("--solver", solver, "hll-grp | hlli-grp | hll | hlli");
    run->add_option("--out", out, "CSV output path (overrides the config's output key)");

    Source conv_src;
    std::string grids = "50,100,200,400";
    auto* conv = app.add_subcommand("convergence", "L1 errors and observed orders over a list of grids");
    auto* p2 = conv->add_option("--preset", conv_src.preset, "Preset name");
    auto* c2 = conv->add_option("--config", conv_src.config, "Config file")->check(CLI::ExistingFile);
    p2->excludes(c2);
    conv->add_option("--grids", grids, "Comma-separated zone counts");

    auto* list = app.add_subcommand("list-presets", "List available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : list_presets(preset_dir)) {
                const auto c = load_preset(preset_dir, name);
                std::cout << std::left << std::setw(28) << name << std::setw(9) << c.system << "zones " << std::setw(5)
                          << c.n_zones << " t_end " << c.t_end << '\n';
            }
            return 0;
        }

        if (run->parsed()) {
            if (run_src.preset.empty() == run_src.config.empty()) throw ConfigError("run: give exactly one of --preset or --config");
            ProblemConfig c = load(run_src, preset_dir);
            if (zones) c.n_zones = *zones;
            if (cfl) c.cfl = *cfl;
            if (tend) c.t_end = *tend;
            if (!solver.empty()) c.solver = parse_solver(solver);
            if (!out.empty()) c.output = out;

            const auto r = run_problem(c);
            std::cout << "problem   " << c.name << " (" << c.system << ", " << to_string(c.solver) << ", "
                      << c.n_zones << " zones)\n"
                      << "steps     " << r.summary.steps << "  t = " << r.summary.t_final << '\n'
                      << "floors    " << r.summary.floors_applied << "  degraded faces " << r.summary.faces_degraded
                      << "  picard failures " << r.summary.picard_failures << '\n'
                      << "drift     " << std::setprecision(6) << std::scientific << r.drift << std::defaultfloat << '\n';
            if (r.error) print_errors(*r.error);
            if (!c.output.empty()) {
                write_csv(r.grid, *r.sys, c.output);
                std::cout << "wrote     " << c.output << '\n';
            }
            return 0;
        }

        if (conv->parsed()) {
            if (conv_src.preset.empty() == conv_src.config.empty())
                throw ConfigError("convergence: give exactly one of --preset or --config");
            const ProblemConfig c = load(conv_src, preset_dir);
            std::vector<int> ns;
            for (double v : grp::harness::detail::parse_list("--grids", grids)) {
                if (v != std::floor(v) || v < 8) throw ConfigError("--grids: zone counts must be integers >= 8");
                ns.push_back(static_cast<int>(v));
            }
            const auto rows = convergence_study(c, ns);
            std::cout << std::setw(8) << "zones" << std::setw(16) << "L1" << (rows.size() > 1 ? "       order" : "") << '\n';
            for (std::size_t i = 0; i < rows.size(); ++i) {
                std::cout << std::setw(8) << rows[i].n_zones << std::setw(16) << std::scientific << std::setprecision(6)
                          << rows[i].l1 << std::defaultfloat;
                if (rows.size() > 1) {
                    if (rows[i].order)
                        std::cout << std::setw(12) << std::fixed << std::setprecision(3) << *rows[i].order << std::defaultfloat;
                    else
                        std::cout << std::setw(12) << (i == 0 ? "" : "n/a");
                }
                std::cout << '\n';
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
