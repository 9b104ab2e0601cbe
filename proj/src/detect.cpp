#include "hocdvs/detect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hocdvs/error.hpp"
#include "hocdvs/stats.hpp"

namespace hocdvs {
namespace {

void check_window(const TraceMatrix& traces, std::size_t window) {
    if (window < 2) throw Error(ErrorCode::BadWindow, "window must be >= 2");
    if (window > traces.num_traces()) {
        throw Error(ErrorCode::WindowExceedsTraces, "window " + std::to_string(window) + " exceeds " +
                                                        std::to_string(traces.num_traces()) + " traces");
    }
}

HocProfile differential_of(const std::vector<double>& rows, std::size_t num_rows, std::size_t points,
                           const TraceMatrix& meta, std::size_t window, Method method) {
    HocProfile out{std::vector<double>(points, 0.0), window, meta.meters_per_point(), method};
    for (std::size_t i = 0; i + 1 < num_rows; ++i) {
        const double* a = rows.data() + i * points;
        const double* b = a + points;
        for (std::size_t m = 0; m < points; ++m) out.values[m] += std::abs(b[m] - a[m]);
    }
    const auto pairs = static_cast<double>(num_rows - 1);
    for (double& v : out.values) v /= pairs;
    return out;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Hoc: return "hoc";
        case Method::MovingDifferential: return "moving_differential";
        case Method::MovingAverage: return "moving_average";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "hoc") return Method::Hoc;
    if (name == "mdiff" || name == "moving_differential") return Method::MovingDifferential;
    if (name == "mavg" || name == "moving_average") return Method::MovingAverage;
    throw Error(ErrorCode::BadConfig, "unknown method '" + std::string(name) + "'");
}

TraceMatrix detrend(const TraceMatrix& traces) {
    const std::size_t w = traces.num_traces();
    const std::size_t m = traces.fiber_points();
    if (w < 2) throw Error(ErrorCode::TooFewTraces, "detrending needs at least two traces");

    std::vector<double> col_mean(m, 0.0);
    for (std::size_t i = 0; i < w; ++i) {
        const auto row = traces.trace(i);
        for (std::size_t k = 0; k < m; ++k) col_mean[k] += row[k];
    }
    for (double& v : col_mean) v /= static_cast<double>(w);

    std::vector<double> out(traces.amplitudes().begin(), traces.amplitudes().end());
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t k = 0; k < m; ++k) out[i * m + k] -= col_mean[k];
    }
    return traces.with_amplitudes(std::move(out));
}

bool is_detrended(const TraceMatrix& traces) {
    const std::size_t w = traces.num_traces();
    const std::size_t m = traces.fiber_points();
    std::vector<double> sum(m, 0.0);
    std::vector<double> peak(m, 1.0);
    for (std::size_t i = 0; i < w; ++i) {
        const auto row = traces.trace(i);
        for (std::size_t k = 0; k < m; ++k) {
            sum[k] += row[k];
            peak[k] = std::max(peak[k], std::abs(row[k]));
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(sum[k] / static_cast<double>(w)) > 1e-9 * peak[k]) return false;
    }
    return true;
}

HocProfile hoc_profile(const TraceMatrix& residuals, std::size_t window) {
    check_window(residuals, window);
    if (!is_detrended(residuals)) {
        throw Error(ErrorCode::NotDetrended, "hoc_profile expects per-point zero-mean residuals");
    }
    const std::size_t m = residuals.fiber_points();
    HocProfile out{std::vector<double>(m, 0.0), window, residuals.meters_per_point(), Method::Hoc};
    // Each point sums its own column in trace order, so results do not depend
    // on how points might be split across workers.
    std::vector<double> column(window);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < window; ++i) column[i] = residuals.at(i, k);
        out.values[k] = mean_cube(column);
    }
    return out;
}

HocProfile moving_differential_profile(const TraceMatrix& traces, std::size_t window) {
    check_window(traces, window);
    const std::size_t m = traces.fiber_points();
    std::vector<double> rows(traces.amplitudes().begin(),
                             traces.amplitudes().begin() + static_cast<std::ptrdiff_t>(window * m));
    return differential_of(rows, window, m, traces, window, Method::MovingDifferential);
}

HocProfile moving_average_profile(const TraceMatrix& traces, std::size_t window, std::size_t avg_len) {
    check_window(traces, window);
    if (avg_len < 1 || avg_len > window) {
        throw Error(ErrorCode::BadAverageLength, "avg_len must lie in [1, window]");
    }
    const std::size_t blocks = window / avg_len;
    if (blocks < 2) {
        throw Error(ErrorCode::BadAverageLength, "window / avg_len leaves fewer than two blocks");
    }
    const std::size_t m = traces.fiber_points();
    std::vector<double> averaged(blocks * m, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        double* dst = averaged.data() + b * m;
        for (std::size_t j = 0; j < avg_len; ++j) {
            const auto row = traces.trace(b * avg_len + j);
            for (std::size_t k = 0; k < m; ++k) dst[k] += row[k];
        }
        for (std::size_t k = 0; k < m; ++k) dst[k] /= static_cast<double>(avg_len);
    }
    return differential_of(averaged, blocks, m, traces, window, Method::MovingAverage);
}

Peak locate_peak(const HocProfile& profile) {
    std::size_t best = 0;
    double best_abs = 0.0;
    bool found = false;
    for (std::size_t k = 0; k < profile.values.size(); ++k) {
        const double a = std::abs(profile.values[k]);
        if (!std::isfinite(a)) continue;
        if (a > best_abs) {
            best_abs = a;
            best = k;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::NoPeak, "profile has no nonzero finite value");
    return {best, static_cast<double>(best) * profile.meters_per_point};
}

double location_snr(const HocProfile& profile, std::size_t peak, std::size_t guard) {
    if (peak >= profile.values.size()) throw Error(ErrorCode::BadGuard, "peak index outside profile");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < profile.values.size(); ++k) {
        const std::size_t dist = k > peak ? k - peak : peak - k;
        if (dist <= guard) continue;
        acc += profile.values[k] * profile.values[k];
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::BadGuard, "guard band leaves no background points");
    const double background = acc / static_cast<double>(n);
    if (!(background > 0.0)) throw Error(ErrorCode::ZeroBackground, "background power is zero");
    const double p = profile.values[peak];
    return 10.0 * std::log10(p * p / background);
}

double spatial_resolution(const HocProfile& profile, std::size_t peak, std::size_t pulse_width_points) {
    const auto& v = profile.values;
    if (peak >= v.size()) throw Error(ErrorCode::NoEdge, "peak index outside profile");
    if (pulse_width_points < 1) throw Error(ErrorCode::NoEdge, "pulse width must be >= 1");

    const std::size_t span = 3 * pulse_width_points;
    std::vector<double> ring;
    if (peak > span) {
        const std::size_t lo = peak > 2 * span ? peak - 2 * span : 0;
        for (std::size_t k = lo; k < peak - span; ++k) ring.push_back(std::abs(v[k]));
    }
    double background = 0.0;
    if (!ring.empty()) {
        const auto mid = ring.begin() + static_cast<std::ptrdiff_t>(ring.size() / 2);
        std::nth_element(ring.begin(), mid, ring.end());
        background = *mid;
    }

    const double top = std::abs(v[peak]);
    if (!(top > background)) throw Error(ErrorCode::NoEdge, "peak does not rise above background");
    const double level90 = background + 0.9 * (top - background);
    const double level10 = background + 0.1 * (top - background);

    // Walk left from the peak; `i` always sits at or above the current level.
    std::size_t i = peak;
    auto crossing = [&](double level) -> std::optional<double> {
        while (i > 0 && peak - i < span) {
            const double lower = std::abs(v[i - 1]);
            if (lower < level) {
                const double upper = std::abs(v[i]);
                return static_cast<double>(i - 1) + (level - lower) / (upper - lower);
            }
            --i;
        }
        return std::nullopt;
    };
    const auto x90 = crossing(level90);
    if (!x90) throw Error(ErrorCode::NoEdge, "90% crossing not found within three pulse widths");
    const auto x10 = crossing(level10);
    if (!x10) throw Error(ErrorCode::NoEdge, "10% crossing not found within three pulse widths");
    return (*x90 - *x10) * profile.meters_per_point;
}

Analysis analyze(const TraceMatrix& traces, const AnalysisOptions& options) {
    HocProfile profile;
    switch (options.method) {
        case Method::Hoc: profile = hoc_profile(detrend(traces), options.window); break;
        case Method::MovingDifferential:
            profile = moving_differential_profile(traces, options.window);
            break;
        case Method::MovingAverage:
            profile = moving_average_profile(traces, options.window, options.avg_len);
            break;
    }
    const Peak peak = locate_peak(profile);
    const std::size_t guard = options.guard.value_or(3 * options.pulse_width_points);

    DetectionReport report;
    report.peak_index = peak.index;
    report.peak_position_m = peak.position_m;
    report.location_snr_db = location_snr(profile, peak.index, guard);
    report.method = options.method;
    report.window = options.window;
    try {
        report.spatial_resolution_m = spatial_resolution(profile, peak.index, options.pulse_width_points);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEdge) throw;
    }
    report.detected = !options.min_snr_db || report.location_snr_db >= *options.min_snr_db;
    return {std::move(profile), report};
}

}  // namespace hocdvs
