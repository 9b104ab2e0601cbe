#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hocdvs/detect.hpp"
#include "hocdvs/synth.hpp"

namespace hocdvs {

enum class Preset { Fig1Asymmetry, Fig2aLengthSweep, Fig2bSnrSweep, E2eLocalization };

[[nodiscard]] std::string_view to_string(Preset preset) noexcept;
[[nodiscard]] Preset parse_preset(std::string_view name);

/// Inclusive seed list `first..last`.
struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;

    [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(last - first + 1); }
};

/// Parses "a..b" (inclusive, a <= b) or a single seed "a".
[[nodiscard]] SeedRange parse_seed_range(std::string_view text);

/// fig1: 0..49, fig2a/fig2b: 0..3999, e2e: 0..49.
[[nodiscard]] SeedRange default_seeds(Preset preset);

inline constexpr std::array<double, 4> kDutyCycles{0.1, 0.2, 0.3, 0.4};
inline constexpr std::array<std::size_t, 5> kCalculatedLengths{20, 40, 80, 120, 240};
inline constexpr std::array<double, 5> kSnr1SweepDb{-6.0, -3.0, 0.0, 3.0, 6.0};

struct AsymmetryRow {
    int k_index = 1;  // 1 = K1 (untouched), 2..6 = fragmentary intervals
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    double mean_c3 = 0.0;
    double std_c3 = 0.0;
    double stderr_c3 = 0.0;
};

/// Mean centered zero-lag c3 of K1..K6 over the seed list.
[[nodiscard]] std::vector<AsymmetryRow> run_fig1(SeedRange seeds, std::size_t length = 99947);

struct Snr2Row {
    double duty = 0.0;
    std::size_t length = 0;
    double snr1_db = 0.0;
    double snr2_db = 0.0;        // ensemble ratio of averaged HOCs
    double pair_mean_db = 0.0;   // mean of per-realization snr2_db
    double pair_std_db = 0.0;
    std::size_t realizations = 0;
    std::size_t degenerate = 0;
};

/// One SNR2 point: a unit square wave of `duty` mixed at `snr1_db`, against
/// an equal-power Gaussian reference, over every seed in the range.
[[nodiscard]] Snr2Row measure_snr2(double duty, std::size_t length, double snr1_db, SeedRange seeds,
                                   std::int64_t period_samples = 20);

struct Fig2Params {
    double snr1_db = 0.0;
    std::size_t length = 120;
    std::int64_t period_samples = 20;
};

/// Lengths {20, 40, 80, 120, 240} x duties {10..40}% at params.snr1_db.
[[nodiscard]] std::vector<Snr2Row> run_fig2a(SeedRange seeds, const Fig2Params& params = {});
/// SNR1 {-6, -3, 0, 3, 6} dB x duties {10..40}% at params.length.
[[nodiscard]] std::vector<Snr2Row> run_fig2b(SeedRange seeds, const Fig2Params& params = {});

struct E2eRun {
    std::uint64_t seed = 0;
    DetectionReport hoc;
    DetectionReport moving_differential;
    bool localized = false;
};

struct E2eDuty {
    double duty = 0.0;
    std::vector<E2eRun> runs;
    double localized_fraction = 0.0;
    double mean_location_snr_db = 0.0;
    double mean_md_location_snr_db = 0.0;
};

struct E2eResult {
    std::vector<E2eDuty> duties;
    std::vector<double> duty_order_by_snr;  // descending mean HOC location SNR
};

/// Bench-scale localization over every duty cycle and seed. A run counts as
/// localized when the HOC peak is within one pulse width of the vibration.
[[nodiscard]] E2eResult run_e2e(SeedRange seeds, const SimConfig& base, const AnalysisOptions& options);

/// Key/value overrides accepted by a preset (validated against its key set).
using Overrides = std::map<std::string, std::string, std::less<>>;

[[nodiscard]] Overrides parse_overrides(const std::vector<std::string>& assignments);
[[nodiscard]] std::vector<std::string> preset_keys(Preset preset);

/// Runs a preset and writes its CSV/JSON outputs plus `<preset>.meta.json`
/// (seed list and parameter digest). Returns the written paths.
std::vector<std::filesystem::path> write_experiment(Preset preset, const std::filesystem::path& out_dir,
                                                    SeedRange seeds, const Overrides& overrides = {});

}  // namespace hocdvs
