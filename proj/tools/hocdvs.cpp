#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hocdvs/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"HOC vibration detection for phase-sensitive OTDR traces"};
    app.require_subcommand(1);

    std::string config_path, sim_out;
    auto* simulate = app.add_subcommand("simulate", "synthesize a trace file from a config");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--out", sim_out, "output trace file")->required();

    std::string trace_path, method = "hoc", analyze_out;
    hocdvs::AnalysisOptions opt;
    std::optional<std::size_t> guard;
    std::optional<double> min_snr;
    auto* analyze = app.add_subcommand("analyze", "locate a vibration in a trace file");
    analyze->add_option("--traces", trace_path, "input trace file")->required();
    analyze->add_option("--method", method, "hoc | mdiff | mavg")
        ->check(CLI::IsMember({"hoc", "mdiff", "mavg", "moving_differential", "moving_average"}));
    analyze->add_option("--window", opt.window, "traces per profile")->capture_default_str();
    analyze->add_option("--out", analyze_out, "output directory")->required();
    analyze->add_option("--avg-len", opt.avg_len, "block length for mavg")->capture_default_str();
    analyze->add_option("--pulse-width", opt.pulse_width_points, "pulse width in points")->capture_default_str();
    analyze->add_option("--guard", guard, "guard band in points (default 3 pulse widths)");
    analyze->add_option("--min-snr-db", min_snr, "location SNR needed to count as a detection");

    std::string preset, exp_out;
    std::optional<std::string> seeds;
    std::vector<std::string> sets;
    auto* experiment = app.add_subcommand("experiment", "regenerate figure data");
    experiment->add_option("--preset", preset,
                           "fig1_asymmetry | fig2a_length_sweep | fig2b_snr_sweep | e2e_localization")
        ->required();
    experiment->add_option("--out", exp_out, "output directory")->required();
    experiment->add_option("--seeds", seeds, "inclusive seed range a..b");
    experiment->add_option("--set", sets, "parameter override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hocdvs::kExitConfig;
    }

    if (*simulate) return hocdvs::cmd_simulate(config_path, sim_out, std::cout, std::cerr);
    if (*analyze) {
        opt.method = hocdvs::parse_method(method);
        opt.guard = guard;
        opt.min_snr_db = min_snr;
        return hocdvs::cmd_analyze(trace_path, opt, analyze_out, std::cout, std::cerr);
    }
    return hocdvs::cmd_experiment(preset, exp_out, seeds, sets, std::cout, std::cerr);
}
