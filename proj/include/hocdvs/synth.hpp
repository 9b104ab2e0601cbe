#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hocdvs/stats.hpp"

namespace hocdvs {

inline constexpr double kTruncationLimit = 3.46;

/// Half-open value interval [lo, hi) whose samples are removed and refilled.
struct AsymmetrySpec {
    double lo = 0.0;
    double hi = 0.0;
};

/// The five fragmentary intervals producing K2..K6, each holding ~10% of the
/// standard normal mass.
inline constexpr std::array<AsymmetrySpec, 5> kFragmentaryIntervals{{
    {-3.46, -1.28},
    {-1.28, -0.84},
    {-0.84, -0.52},
    {-0.52, -0.25},
    {-0.25, 0.00},
}};

struct SquareWaveSpec {
    double duty = 0.2;
    std::int64_t period_samples = 10;
    double amplitude = 1.0;
    std::int64_t phase_samples = 0;

    [[nodiscard]] std::int64_t on_samples() const;

    friend bool operator==(const SquareWaveSpec&, const SquareWaveSpec&) = default;
};

enum class Provenance : std::uint8_t { Synthetic = 0, Recorded = 1 };

/// Full description of one synthetic acquisition. Spatial quantities are in
/// fiber sampling points; the vibration square wave is clocked in DAQ samples.
struct SimConfig {
    std::int64_t fiber_points = 1500;
    std::int64_t num_traces = 100;
    std::int64_t pulse_width_points = 10;
    double meters_per_point = 1.0;
    double trace_rate_hz = 10e3;
    double sample_rate_hz = 100e6;
    std::int64_t vibration_point = 1049;
    SquareWaveSpec vibration{0.2, 142857, 1.0, 0};  // 700 Hz at 100 MS/s
    double vibration_depth = 0.5;
    double noise_sigma = 0.02;
    double sop_sigma = 0.01;
    std::uint64_t seed = 0;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Geometry of the bench experiment: 1500 points, 100 traces, 100 ns pulse.
[[nodiscard]] SimConfig bench_config();

/// Throws BadConfig naming the first violated constraint.
void validate(const SimConfig& cfg);
void validate(const SquareWaveSpec& spec);

/// W traces x M fiber points, trace-major.
class TraceMatrix {
public:
    TraceMatrix(std::size_t num_traces, std::size_t fiber_points, std::vector<double> amplitudes,
                double meters_per_point, double trace_rate_hz,
                Provenance provenance = Provenance::Synthetic);

    [[nodiscard]] std::size_t num_traces() const noexcept { return num_traces_; }
    [[nodiscard]] std::size_t fiber_points() const noexcept { return fiber_points_; }
    [[nodiscard]] double meters_per_point() const noexcept { return meters_per_point_; }
    [[nodiscard]] double trace_rate_hz() const noexcept { return trace_rate_hz_; }
    [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }

    [[nodiscard]] double at(std::size_t trace, std::size_t point) const noexcept {
        return amplitudes_[trace * fiber_points_ + point];
    }
    [[nodiscard]] std::span<const double> trace(std::size_t i) const noexcept {
        return {amplitudes_.data() + i * fiber_points_, fiber_points_};
    }
    [[nodiscard]] std::vector<double> column(std::size_t point) const;
    [[nodiscard]] std::span<const double> amplitudes() const noexcept { return amplitudes_; }

    /// Same metadata, amplitudes replaced.
    [[nodiscard]] TraceMatrix with_amplitudes(std::vector<double> amplitudes) const;

    friend bool operator==(const TraceMatrix&, const TraceMatrix&) = default;

private:
    std::size_t num_traces_;
    std::size_t fiber_points_;
    std::vector<double> amplitudes_;
    double meters_per_point_;
    double trace_rate_hz_;
    Provenance provenance_;
};

/// Independent RNG streams derived from one user seed.
enum class Stream : std::uint32_t {
    TruncatedGaussian = 1,
    Refill = 2,
    MixNoise = 3,
    NoiseReference = 4,
    Baseline = 5,
    Sop = 6,
    TraceNoise = 7,
};

[[nodiscard]] std::mt19937_64 make_rng(std::uint64_t seed, Stream stream);

struct TruncatedDraw {
    Sequence samples;
    std::uint64_t rejected = 0;  // raw draws discarded outside the window
};

/// n standard-normal draws restricted to [-3.46, 3.46] by rejection.
[[nodiscard]] TruncatedDraw draw_truncated_gaussian(std::size_t n, std::uint64_t seed);
[[nodiscard]] Sequence gen_truncated_gaussian(std::size_t n, std::uint64_t seed);

/// Empties the interval [lo, hi) and refills each removed slot with a value
/// drawn uniformly from the samples lying outside it, so the length is kept
/// and ~10% of probability mass leaves one side of the distribution.
/// The result is not centered; center it before cumulant use.
[[nodiscard]] Sequence asymmetrize(const Sequence& x, AsymmetrySpec spec, std::uint64_t seed);

[[nodiscard]] double square_wave_value(const SquareWaveSpec& spec, std::int64_t sample_index);
[[nodiscard]] Sequence gen_square_wave(std::size_t n, const SquareWaveSpec& spec);

/// signal + g * noise with g chosen from the realized sample powers so the
/// mixture's SNR is exactly snr1_db.
[[nodiscard]] Sequence mix_at_snr1(const Sequence& signal, double snr1_db, std::uint64_t seed);

/// Centered Gaussian noise rescaled to exactly `target_power`.
[[nodiscard]] Sequence gen_noise_reference(std::size_t n, double target_power, std::uint64_t seed);

/// Static Rayleigh-like speckle: |sum of P unit phasors| / sqrt(P) per point,
/// consecutive points sharing P-1 scatterers.
[[nodiscard]] std::vector<double> speckle_baseline(std::size_t fiber_points,
                                                   std::size_t pulse_width_points,
                                                   std::uint64_t seed);

/// Triangular pulse-overlap weight, 1 at the vibration point and 0 from one
/// pulse width away.
[[nodiscard]] double overlap_kernel(std::int64_t point, std::int64_t vibration_point,
                                    std::int64_t pulse_width_points);

/// Drive level s(i) seen by trace i.
[[nodiscard]] double drive_at_trace(const SimConfig& cfg, std::int64_t trace_index);

[[nodiscard]] TraceMatrix synth_traces(const SimConfig& cfg);

}  // namespace hocdvs
