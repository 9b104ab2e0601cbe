#include "hocdvs/commands.hpp"

#include <ostream>

#include "hocdvs/config.hpp"
#include "hocdvs/io.hpp"

namespace hocdvs {
namespace {

int report_error(const Error& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IoError:
        case ErrorCode::NotATraceFile:
        case ErrorCode::CorruptHeader:
        case ErrorCode::TruncatedPayload: return kExitIo;
        case ErrorCode::NoPeak: return kExitNoDetection;
        default: return kExitConfig;
    }
}

std::string analysis_digest(const std::string& trace_bytes, const AnalysisOptions& options) {
    std::string text = trace_bytes;
    text += "\nmethod = ";
    text += to_string(options.method);
    text += "\nwindow = " + std::to_string(options.window);
    text += "\navg_len = " + std::to_string(options.avg_len);
    text += "\npulse_width_points = " + std::to_string(options.pulse_width_points);
    text += "\nguard = " + std::to_string(options.guard.value_or(3 * options.pulse_width_points));
    if (options.min_snr_db) text += "\nmin_snr_db = " + format_real(*options.min_snr_db);
    text += '\n';
    return hex_digest(text);
}

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
                 std::ostream& out, std::ostream& err) {
    try {
        const SimConfig cfg = load_sim_config(config_path);
        write_traces(out_path, synth_traces(cfg));
        out << "config_digest " << config_digest(cfg) << "\nseed " << cfg.seed << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int cmd_analyze(const std::filesystem::path& trace_path, const AnalysisOptions& options,
                const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
    try {
        const std::string bytes = read_file(trace_path);
        TraceMatrix traces = [&] {
            try {
                return decode_traces(bytes);
            } catch (const Error& e) {
                throw Error(e.code(), trace_path.string() + ": " + e.what());
            }
        }();
        const Analysis result = analyze(traces, options);
        const std::string digest = analysis_digest(bytes, options);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());
        export_profile_csv(result.profile, out_dir / "profile.csv");
        write_report_json(result.report, digest, out_dir / "report.json");

        const auto& r = result.report;
        out << "peak " << r.peak_position_m << " m, location SNR " << r.location_snr_db << " dB\n";
        if (!r.detected) {
            err << "peak below the SNR threshold\n";
            return kExitNoDetection;
        }
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

int cmd_experiment(const std::string& preset, const std::filesystem::path& out_dir,
                   const std::optional<std::string>& seeds, const std::vector<std::string>& overrides,
                   std::ostream& out, std::ostream& err) {
    try {
        const Preset p = parse_preset(preset);
        const SeedRange range = seeds ? parse_seed_range(*seeds) : default_seeds(p);
        for (const auto& path : write_experiment(p, out_dir, range, parse_overrides(overrides))) {
            out << path.string() << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        return report_error(e, err);
    }
}

}  // namespace hocdvs
