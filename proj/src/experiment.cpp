#include "hocdvs/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "hocdvs/config.hpp"
#include "hocdvs/error.hpp"
#include "hocdvs/io.hpp"
#include "hocdvs/stats.hpp"

namespace hocdvs {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw Error(ErrorCode::BadConfig, "bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

std::uint64_t parse_seed(std::string_view text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw Error(ErrorCode::BadSeedRange, "bad seed '" + std::string(text) + "'");
    }
    return v;
}

struct Stats {
    double mean = 0.0;
    double std = 0.0;
    double stderr_ = 0.0;
};

Stats summarize(const std::vector<double>& xs) {
    Stats s;
    const auto n = static_cast<double>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
        s.stderr_ = s.std / std::sqrt(n);
    }
    return s;
}

void require_keys(Preset preset, const Overrides& overrides) {
    const auto keys = preset_keys(preset);
    for (const auto& [k, v] : overrides) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            throw Error(ErrorCode::UnknownKey,
                        "preset " + std::string(to_string(preset)) + " does not accept '" + k + "'");
        }
    }
}

Fig2Params fig2_params(Preset preset, const Overrides& overrides) {
    Fig2Params p;
    for (const auto& [k, v] : overrides) {
        if (k == "snr1_db") p.snr1_db = parse_number<double>(k, v);
        else if (k == "length") p.length = parse_number<std::size_t>(k, v);
        else if (k == "period_samples") p.period_samples = parse_number<std::int64_t>(k, v);
    }
    if (preset == Preset::Fig2bSnrSweep && p.length < 2) {
        throw Error(ErrorCode::BadConfig, "length must be >= 2");
    }
    if (p.period_samples < 1) throw Error(ErrorCode::BadConfig, "period_samples must be >= 1");
    return p;
}

std::string snr2_csv(const std::vector<Snr2Row>& rows) {
    std::string out = "duty,length,snr1_db,snr2_db,pair_mean_db,pair_std_db,realizations,degenerate\n";
    for (const auto& r : rows) {
        out += fmt(r.duty) + ',' + std::to_string(r.length) + ',' + fmt(r.snr1_db) + ',' + fmt(r.snr2_db) +
               ',' + fmt(r.pair_mean_db) + ',' + fmt(r.pair_std_db) + ',' + std::to_string(r.realizations) +
               ',' + std::to_string(r.degenerate) + '\n';
    }
    return out;
}

nlohmann::json report_json(const DetectionReport& r) {
    nlohmann::json j;
    j["method"] = std::string(to_string(r.method));
    j["peak_index"] = r.peak_index;
    j["peak_position_m"] = r.peak_position_m;
    j["location_snr_db"] = r.location_snr_db;
    j["spatial_resolution_m"] =
        r.spatial_resolution_m ? nlohmann::json(*r.spatial_resolution_m) : nlohmann::json(nullptr);
    j["window"] = r.window;
    j["detected"] = r.detected;
    return j;
}

}  // namespace

std::string_view to_string(Preset preset) noexcept {
    switch (preset) {
        case Preset::Fig1Asymmetry: return "fig1_asymmetry";
        case Preset::Fig2aLengthSweep: return "fig2a_length_sweep";
        case Preset::Fig2bSnrSweep: return "fig2b_snr_sweep";
        case Preset::E2eLocalization: return "e2e_localization";
    }
    return "unknown";
}

Preset parse_preset(std::string_view name) {
    for (auto p : {Preset::Fig1Asymmetry, Preset::Fig2aLengthSweep, Preset::Fig2bSnrSweep,
                   Preset::E2eLocalization}) {
        if (name == to_string(p)) return p;
    }
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

SeedRange parse_seed_range(std::string_view text) {
    const auto dots = text.find("..");
    SeedRange r;
    if (dots == std::string_view::npos) {
        r.first = r.last = parse_seed(text);
    } else {
        r.first = parse_seed(text.substr(0, dots));
        r.last = parse_seed(text.substr(dots + 2));
    }
    if (r.last < r.first) throw Error(ErrorCode::BadSeedRange, "seed range '" + std::string(text) + "' is empty");
    return r;
}

SeedRange default_seeds(Preset preset) {
    switch (preset) {
        case Preset::Fig2aLengthSweep:
        case Preset::Fig2bSnrSweep: return {0, 3999};
        case Preset::Fig1Asymmetry:
        case Preset::E2eLocalization: break;
    }
    return {0, 49};
}

std::vector<AsymmetryRow> run_fig1(SeedRange seeds, std::size_t length) {
    constexpr std::size_t kCount = 1 + kFragmentaryIntervals.size();
    std::array<std::vector<double>, kCount> c3;
    for (std::uint64_t s = seeds.first; s <= seeds.last; ++s) {
        const Sequence k1 = gen_truncated_gaussian(length, s);
        c3[0].push_back(third_cumulant_zero_lag(center(k1)));
        for (std::size_t j = 0; j < kFragmentaryIntervals.size(); ++j) {
            const Sequence kj = asymmetrize(k1, kFragmentaryIntervals[j], s);
            c3[j + 1].push_back(third_cumulant_zero_lag(center(kj)));
        }
        if (s == seeds.last) break;  // guards last == UINT64_MAX
    }
    std::vector<AsymmetryRow> rows;
    for (std::size_t j = 0; j < kCount; ++j) {
        const Stats st = summarize(c3[j]);
        AsymmetryRow row;
        row.k_index = static_cast<int>(j + 1);
        if (j > 0) {
            row.interval_lo = kFragmentaryIntervals[j - 1].lo;
            row.interval_hi = kFragmentaryIntervals[j - 1].hi;
        }
        row.mean_c3 = st.mean;
        row.std_c3 = st.std;
        row.stderr_c3 = st.stderr_;
        rows.push_back(row);
    }
    return rows;
}

Snr2Row measure_snr2(double duty, std::size_t length, double snr1_db, SeedRange seeds,
                     std::int64_t period_samples) {
    const Sequence signal = gen_square_wave(length, SquareWaveSpec{duty, period_samples, 1.0, 0});
    Snr2Accumulator acc;
    for (std::uint64_t s = seeds.first; s <= seeds.last; ++s) {
        const Sequence mixed = center(mix_at_snr1(signal, snr1_db, s));
        const Sequence noise = gen_noise_reference(length, power(mixed), s);
        acc.add(mixed, noise);
        if (s == seeds.last) break;
    }
    Snr2Row row;
    row.duty = duty;
    row.length = length;
    row.snr1_db = snr1_db;
    row.snr2_db = acc.ensemble_db();
    row.pair_mean_db = acc.per_pair_mean_db();
    row.pair_std_db = acc.per_pair_std_db();
    row.realizations = acc.count();
    row.degenerate = acc.degenerate_count();
    return row;
}

std::vector<Snr2Row> run_fig2a(SeedRange seeds, const Fig2Params& params) {
    std::vector<Snr2Row> rows;
    for (double duty : kDutyCycles) {
        for (std::size_t len : kCalculatedLengths) {
            rows.push_back(measure_snr2(duty, len, params.snr1_db, seeds, params.period_samples));
        }
    }
    return rows;
}

std::vector<Snr2Row> run_fig2b(SeedRange seeds, const Fig2Params& params) {
    std::vector<Snr2Row> rows;
    for (double duty : kDutyCycles) {
        for (double snr1 : kSnr1SweepDb) {
            rows.push_back(measure_snr2(duty, params.length, snr1, seeds, params.period_samples));
        }
    }
    return rows;
}

E2eResult run_e2e(SeedRange seeds, const SimConfig& base, const AnalysisOptions& options) {
    E2eResult result;
    AnalysisOptions hoc_opt = options;
    hoc_opt.method = Method::Hoc;
    AnalysisOptions md_opt = options;
    md_opt.method = Method::MovingDifferential;
    const auto tolerance = static_cast<std::size_t>(base.pulse_width_points);
    const auto truth = static_cast<std::size_t>(base.vibration_point);

    for (double duty : kDutyCycles) {
        E2eDuty d;
        d.duty = duty;
        double snr_sum = 0.0;
        double md_sum = 0.0;
        std::size_t hits = 0;
        for (std::uint64_t s = seeds.first; s <= seeds.last; ++s) {
            SimConfig cfg = base;
            cfg.vibration.duty = duty;
            cfg.seed = s;
            const TraceMatrix traces = synth_traces(cfg);
            E2eRun run;
            run.seed = s;
            run.hoc = analyze(traces, hoc_opt).report;
            run.moving_differential = analyze(traces, md_opt).report;
            const std::size_t dist =
                run.hoc.peak_index > truth ? run.hoc.peak_index - truth : truth - run.hoc.peak_index;
            run.localized = dist <= tolerance;
            hits += run.localized ? 1 : 0;
            snr_sum += run.hoc.location_snr_db;
            md_sum += run.moving_differential.location_snr_db;
            d.runs.push_back(std::move(run));
            if (s == seeds.last) break;
        }
        const auto n = static_cast<double>(d.runs.size());
        d.localized_fraction = static_cast<double>(hits) / n;
        d.mean_location_snr_db = snr_sum / n;
        d.mean_md_location_snr_db = md_sum / n;
        result.duties.push_back(std::move(d));
    }

    std::vector<std::size_t> order(result.duties.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.duties[a].mean_location_snr_db > result.duties[b].mean_location_snr_db;
    });
    for (std::size_t i : order) result.duty_order_by_snr.push_back(result.duties[i].duty);
    return result;
}

Overrides parse_overrides(const std::vector<std::string>& assignments) {
    Overrides out;
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::BadConfig, "override '" + a + "' is not key=value");
        }
        auto [it, inserted] = out.emplace(a.substr(0, eq), a.substr(eq + 1));
        if (!inserted) throw Error(ErrorCode::BadConfig, "override '" + it->first + "' given twice");
    }
    return out;
}

std::vector<std::string> preset_keys(Preset preset) {
    switch (preset) {
        case Preset::Fig1Asymmetry: return {"length"};
        case Preset::Fig2aLengthSweep: return {"snr1_db", "period_samples"};
        case Preset::Fig2bSnrSweep: return {"length", "period_samples"};
        case Preset::E2eLocalization: break;
    }
    std::vector<std::string> keys;
    for (const auto& k : sim_config_keys()) {
        if (k != "vibration.duty" && k != "seed") keys.push_back(k);
    }
    keys.emplace_back("window");
    keys.emplace_back("guard");
    return keys;
}

std::vector<std::filesystem::path> write_experiment(Preset preset, const std::filesystem::path& out_dir,
                                                    SeedRange seeds, const Overrides& overrides) {
    require_keys(preset, overrides);
    const std::string name(to_string(preset));

    // Canonical parameter text: preset, seeds, then the resolved parameters.
    std::string params = "preset = " + name + "\nseeds = " + std::to_string(seeds.first) + ".." +
                         std::to_string(seeds.last) + "\n";
    nlohmann::json pj = nlohmann::json::object();

    std::vector<std::pair<std::string, std::string>> files;  // (filename, bytes)

    switch (preset) {
        case Preset::Fig1Asymmetry: {
            std::size_t length = 99947;
            if (auto it = overrides.find("length"); it != overrides.end()) {
                length = parse_number<std::size_t>("length", it->second);
                if (length == 0) throw Error(ErrorCode::BadConfig, "length must be >= 1");
            }
            params += "length = " + std::to_string(length) + "\n";
            pj["length"] = length;
            std::string csv = "k_index,interval_lo,interval_hi,mean_c3,std_c3,stderr_c3\n";
            for (const auto& r : run_fig1(seeds, length)) {
                csv += std::to_string(r.k_index) + ',' + fmt(r.interval_lo) + ',' + fmt(r.interval_hi) + ',' +
                       fmt(r.mean_c3) + ',' + fmt(r.std_c3) + ',' + fmt(r.stderr_c3) + '\n';
            }
            files.emplace_back(name + ".csv", std::move(csv));
            break;
        }
        case Preset::Fig2aLengthSweep:
        case Preset::Fig2bSnrSweep: {
            const Fig2Params p = fig2_params(preset, overrides);
            if (preset == Preset::Fig2aLengthSweep) {
                params += "snr1_db = " + format_real(p.snr1_db) + "\n";
                pj["snr1_db"] = p.snr1_db;
            } else {
                params += "length = " + std::to_string(p.length) + "\n";
                pj["length"] = p.length;
            }
            params += "period_samples = " + std::to_string(p.period_samples) + "\n";
            pj["period_samples"] = p.period_samples;
            const auto rows = preset == Preset::Fig2aLengthSweep ? run_fig2a(seeds, p) : run_fig2b(seeds, p);
            files.emplace_back(name + ".csv", snr2_csv(rows));
            break;
        }
        case Preset::E2eLocalization: {
            SimConfig cfg = bench_config();
            AnalysisOptions opt;
            opt.pulse_width_points = static_cast<std::size_t>(cfg.pulse_width_points);
            for (const auto& [k, v] : overrides) {
                if (k == "window") opt.window = parse_number<std::size_t>(k, v);
                else if (k == "guard") opt.guard = parse_number<std::size_t>(k, v);
                else set_config_value(cfg, k, v);
            }
            validate(cfg);
            opt.pulse_width_points = static_cast<std::size_t>(cfg.pulse_width_points);
            const std::size_t guard = opt.guard.value_or(3 * opt.pulse_width_points);
            params += to_config_text(cfg) + "window = " + std::to_string(opt.window) +
                      "\nguard = " + std::to_string(guard) + "\n";
            pj["config"] = to_config_text(cfg);
            pj["swept"] = {"vibration.duty", "seed"};
            pj["window"] = opt.window;
            pj["guard"] = guard;

            const E2eResult res = run_e2e(seeds, cfg, opt);
            std::string csv =
                "duty,runs,localized_fraction,mean_location_snr_db,mean_md_location_snr_db\n";
            nlohmann::json rj;
            rj["duty_order_by_snr"] = res.duty_order_by_snr;
            rj["duties"] = nlohmann::json::array();
            for (const auto& d : res.duties) {
                csv += fmt(d.duty) + ',' + std::to_string(d.runs.size()) + ',' + fmt(d.localized_fraction) +
                       ',' + fmt(d.mean_location_snr_db) + ',' + fmt(d.mean_md_location_snr_db) + '\n';
                nlohmann::json dj;
                dj["duty"] = d.duty;
                dj["localized_fraction"] = d.localized_fraction;
                dj["mean_location_snr_db"] = d.mean_location_snr_db;
                dj["mean_md_location_snr_db"] = d.mean_md_location_snr_db;
                dj["runs"] = nlohmann::json::array();
                for (const auto& r : d.runs) {
                    dj["runs"].push_back({{"seed", r.seed},
                                          {"localized", r.localized},
                                          {"hoc", report_json(r.hoc)},
                                          {"moving_differential", report_json(r.moving_differential)}});
                }
                rj["duties"].push_back(std::move(dj));
            }
            files.emplace_back(name + ".csv", std::move(csv));
            files.emplace_back(name + ".json", rj.dump(2) + "\n");
            break;
        }
    }

    nlohmann::json meta;
    meta["preset"] = name;
    meta["seeds"] = {{"first", seeds.first}, {"last", seeds.last}, {"count", seeds.count()}};
    meta["parameters"] = pj;
    meta["config_digest"] = hex_digest(params);
    files.emplace_back(name + ".meta.json", meta.dump(2) + "\n");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());
    std::vector<std::filesystem::path> written;
    for (const auto& [fname, bytes] : files) {
        const auto path = out_dir / fname;
        write_file(path, bytes);
        written.push_back(path);
    }
    return written;
}

}  // namespace hocdvs
