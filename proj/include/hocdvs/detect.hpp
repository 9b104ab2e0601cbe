#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hocdvs/synth.hpp"

namespace hocdvs {

enum class Method { Hoc, MovingDifferential, MovingAverage };

[[nodiscard]] std::string_view to_string(Method method) noexcept;

/// Accepts the long names and the CLI short forms `mdiff` / `mavg`.
[[nodiscard]] Method parse_method(std::string_view name);

/// One value per fiber point.
struct HocProfile {
    std::vector<double> values;
    std::size_t window = 100;
    double meters_per_point = 1.0;
    Method method = Method::Hoc;
};

struct Peak {
    std::size_t index = 0;
    double position_m = 0.0;
};

struct DetectionReport {
    std::size_t peak_index = 0;
    double peak_position_m = 0.0;
    double location_snr_db = 0.0;
    std::optional<double> spatial_resolution_m;
    Method method = Method::Hoc;
    std::size_t window = 0;
    bool detected = true;
};

/// Subtracts each fiber point's mean over all traces. Needs W >= 2.
[[nodiscard]] TraceMatrix detrend(const TraceMatrix& traces);

/// True when every column mean is zero within 1e-9 * max(1, max|column|).
[[nodiscard]] bool is_detrended(const TraceMatrix& traces);

/// Per-point zero-lag third cumulant of the first `window` residuals.
[[nodiscard]] HocProfile hoc_profile(const TraceMatrix& residuals, std::size_t window);

/// Mean |x(i+1) - x(i)| over consecutive trace pairs in the window.
[[nodiscard]] HocProfile moving_differential_profile(const TraceMatrix& traces, std::size_t window);

/// Moving differential over non-overlapping block averages of `avg_len` traces.
[[nodiscard]] HocProfile moving_average_profile(const TraceMatrix& traces, std::size_t window,
                                                std::size_t avg_len);

/// Index of max |value|, lowest index on ties. Throws NoPeak on an all-zero profile.
[[nodiscard]] Peak locate_peak(const HocProfile& profile);

/// 10 lg(value[peak]^2 / mean(value[m]^2 for |m - peak| > guard)).
[[nodiscard]] double location_snr(const HocProfile& profile, std::size_t peak, std::size_t guard);

/// 10%-90% rise distance in meters on the side left of the peak, levels taken
/// relative to the local background (median |value| three to six pulse widths
/// left of the peak). Crossings are linearly interpolated. Throws NoEdge when
/// either crossing lies more than three pulse widths from the peak.
[[nodiscard]] double spatial_resolution(const HocProfile& profile, std::size_t peak,
                                        std::size_t pulse_width_points);

struct AnalysisOptions {
    Method method = Method::Hoc;
    std::size_t window = 100;
    std::size_t avg_len = 5;
    std::size_t pulse_width_points = 10;
    std::optional<std::size_t> guard;  // defaults to 3 pulse widths
    std::optional<double> min_snr_db;  // unset: any peak counts as a detection
};

struct Analysis {
    HocProfile profile;
    DetectionReport report;
};

/// Full pipeline on raw traces: profile, peak, location SNR, spatial resolution.
[[nodiscard]] Analysis analyze(const TraceMatrix& traces, const AnalysisOptions& options);

}  // namespace hocdvs
