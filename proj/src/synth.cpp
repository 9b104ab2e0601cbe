#include "hocdvs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "hocdvs/error.hpp"

namespace hocdvs {
namespace {

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

}  // namespace

std::int64_t SquareWaveSpec::on_samples() const {
    return static_cast<std::int64_t>(std::llround(duty * static_cast<double>(period_samples)));
}

void validate(const SquareWaveSpec& spec) {
    if (!(spec.duty > 0.0 && spec.duty < 1.0)) {
        throw Error(ErrorCode::BadSquareWave, "duty must lie in (0, 1)");
    }
    if (spec.period_samples < 2) throw Error(ErrorCode::BadSquareWave, "period_samples must be >= 2");
    if (spec.on_samples() < 1) {
        throw Error(ErrorCode::BadSquareWave, "duty * period_samples rounds to zero");
    }
    if (!std::isfinite(spec.amplitude)) throw Error(ErrorCode::BadSquareWave, "amplitude not finite");
}

SimConfig bench_config() { return SimConfig{}; }

void validate(const SimConfig& cfg) {
    if (cfg.fiber_points < 1) bad_config("fiber_points must be >= 1");
    if (cfg.num_traces < 1) bad_config("num_traces must be >= 1");
    if (cfg.pulse_width_points < 1) bad_config("pulse_width_points must be >= 1");
    if (!(cfg.meters_per_point > 0.0) || !std::isfinite(cfg.meters_per_point)) {
        bad_config("meters_per_point must be positive");
    }
    if (!(cfg.trace_rate_hz > 0.0) || !std::isfinite(cfg.trace_rate_hz)) {
        bad_config("trace_rate_hz must be positive");
    }
    if (!(cfg.sample_rate_hz > 0.0) || !std::isfinite(cfg.sample_rate_hz)) {
        bad_config("sample_rate_hz must be positive");
    }
    if (cfg.vibration_point < 0 || cfg.vibration_point >= cfg.fiber_points) {
        bad_config("vibration_point outside [0, fiber_points)");
    }
    if (!(cfg.vibration_depth >= 0.0 && cfg.vibration_depth <= 1.0)) {
        bad_config("vibration_depth must lie in [0, 1]");
    }
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) {
        bad_config("noise_sigma must be >= 0");
    }
    if (!(cfg.sop_sigma >= 0.0) || !std::isfinite(cfg.sop_sigma)) bad_config("sop_sigma must be >= 0");
    try {
        validate(cfg.vibration);
    } catch (const Error& e) {
        bad_config(std::string("vibration: ") + e.what());
    }
}

TraceMatrix::TraceMatrix(std::size_t num_traces, std::size_t fiber_points,
                         std::vector<double> amplitudes, double meters_per_point,
                         double trace_rate_hz, Provenance provenance)
    : num_traces_(num_traces),
      fiber_points_(fiber_points),
      amplitudes_(std::move(amplitudes)),
      meters_per_point_(meters_per_point),
      trace_rate_hz_(trace_rate_hz),
      provenance_(provenance) {
    if (num_traces_ < 1 || fiber_points_ < 1) bad_config("trace matrix needs W >= 1 and M >= 1");
    if (amplitudes_.size() != num_traces_ * fiber_points_) {
        bad_config("trace matrix payload is not W x M");
    }
    for (double v : amplitudes_) {
        if (!std::isfinite(v)) bad_config("trace matrix holds a non-finite amplitude");
    }
}

std::vector<double> TraceMatrix::column(std::size_t point) const {
    std::vector<double> out(num_traces_);
    for (std::size_t i = 0; i < num_traces_; ++i) out[i] = at(i, point);
    return out;
}

TraceMatrix TraceMatrix::with_amplitudes(std::vector<double> amplitudes) const {
    return TraceMatrix(num_traces_, fiber_points_, std::move(amplitudes), meters_per_point_,
                       trace_rate_hz_, provenance_);
}

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

TruncatedDraw draw_truncated_gaussian(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::EmptyRequest, "requested zero samples");
    auto rng = make_rng(seed, Stream::TruncatedGaussian);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out;
    out.reserve(n);
    std::uint64_t rejected = 0;
    while (out.size() < n) {
        const double v = normal(rng);
        if (std::abs(v) <= kTruncationLimit) {
            out.push_back(v);
        } else {
            ++rejected;
        }
    }
    return {Sequence(std::move(out)), rejected};
}

Sequence gen_truncated_gaussian(std::size_t n, std::uint64_t seed) {
    return draw_truncated_gaussian(n, seed).samples;
}

Sequence asymmetrize(const Sequence& x, AsymmetrySpec spec, std::uint64_t seed) {
    if (!(spec.lo < spec.hi) || spec.lo < -kTruncationLimit || spec.hi > kTruncationLimit) {
        throw Error(ErrorCode::BadInterval, "interval must satisfy -3.46 <= lo < hi <= 3.46");
    }
    std::vector<double> outside;
    std::vector<std::size_t> inside;
    outside.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (std::abs(v) > kTruncationLimit) {
            throw Error(ErrorCode::BadInterval, "input sample outside the truncation window");
        }
        if (v >= spec.lo && v < spec.hi) {
            inside.push_back(i);
        } else {
            outside.push_back(v);
        }
    }
    std::vector<double> out(x.samples().begin(), x.samples().end());
    if (inside.empty()) return Sequence(std::move(out));
    if (outside.empty()) {
        throw Error(ErrorCode::BadInterval, "every sample lies in the interval; nothing to refill from");
    }
    auto rng = make_rng(seed, Stream::Refill);
    std::uniform_int_distribution<std::size_t> pick(0, outside.size() - 1);
    for (std::size_t i : inside) out[i] = outside[pick(rng)];
    return Sequence(std::move(out));
}

double square_wave_value(const SquareWaveSpec& spec, std::int64_t sample_index) {
    const std::int64_t p = spec.period_samples;
    const std::int64_t pos = ((sample_index + spec.phase_samples) % p + p) % p;
    return pos < spec.on_samples() ? spec.amplitude : 0.0;
}

Sequence gen_square_wave(std::size_t n, const SquareWaveSpec& spec) {
    validate(spec);
    if (n == 0) throw Error(ErrorCode::EmptyRequest, "requested zero samples");
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = square_wave_value(spec, static_cast<std::int64_t>(j));
    return Sequence(std::move(out));
}

Sequence mix_at_snr1(const Sequence& signal, double snr1_db, std::uint64_t seed) {
    const double ps = power(signal);
    if (!(ps > 0.0)) throw Error(ErrorCode::ZeroSignal, "signal has zero power");
    auto rng = make_rng(seed, Stream::MixNoise);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noise(signal.size());
    for (double& v : noise) v = normal(rng);
    const double pn = power(noise);
    const double gain = std::sqrt(ps / (std::pow(10.0, snr1_db / 10.0) * pn));
    std::vector<double> out(signal.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = signal[i] + gain * noise[i];
    return Sequence(std::move(out));
}

Sequence gen_noise_reference(std::size_t n, double target_power, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::EmptyRequest, "noise reference needs at least two samples");
    if (!(target_power > 0.0)) throw Error(ErrorCode::NonPositiveNoise, "target power must be positive");
    auto rng = make_rng(seed, Stream::NoiseReference);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> raw(n);
    for (double& v : raw) v = normal(rng);
    Sequence c = center(Sequence(std::move(raw)));
    const double scale = std::sqrt(target_power / power(c));
    std::vector<double> out(c.samples().begin(), c.samples().end());
    for (double& v : out) v *= scale;
    return Sequence::centered(std::move(out));
}

std::vector<double> speckle_baseline(std::size_t fiber_points, std::size_t pulse_width_points,
                                     std::uint64_t seed) {
    auto rng = make_rng(seed, Stream::Baseline);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::size_t scatterers = fiber_points + pulse_width_points - 1;
    std::vector<std::complex<double>> phasor(scatterers);
    for (auto& z : phasor) z = std::polar(1.0, phase(rng));

    // Direct window sums: a running sum would drift over long fibers.
    std::vector<double> b(fiber_points);
    const double norm = 1.0 / std::sqrt(static_cast<double>(pulse_width_points));
    for (std::size_t m = 0; m < fiber_points; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < pulse_width_points; ++j) acc += phasor[m + j];
        b[m] = std::abs(acc) * norm;
    }
    return b;
}

double overlap_kernel(std::int64_t point, std::int64_t vibration_point,
                      std::int64_t pulse_width_points) {
    const auto d = static_cast<double>(std::abs(point - vibration_point));
    const auto p = static_cast<double>(pulse_width_points);
    return d < p ? 1.0 - d / p : 0.0;
}

double drive_at_trace(const SimConfig& cfg, std::int64_t trace_index) {
    const auto daq_index = static_cast<std::int64_t>(
        std::llround(static_cast<double>(trace_index) * cfg.sample_rate_hz / cfg.trace_rate_hz));
    return square_wave_value(cfg.vibration, daq_index);
}

TraceMatrix synth_traces(const SimConfig& cfg) {
    validate(cfg);
    const auto w = static_cast<std::size_t>(cfg.num_traces);
    const auto m = static_cast<std::size_t>(cfg.fiber_points);
    const auto pulse = static_cast<std::size_t>(cfg.pulse_width_points);

    const std::vector<double> base = speckle_baseline(m, pulse, cfg.seed);
    const double local = base[static_cast<std::size_t>(cfg.vibration_point)];

    const std::int64_t first = std::max<std::int64_t>(0, cfg.vibration_point - cfg.pulse_width_points + 1);
    const std::int64_t last =
        std::min<std::int64_t>(cfg.fiber_points - 1, cfg.vibration_point + cfg.pulse_width_points - 1);

    auto sop_rng = make_rng(cfg.seed, Stream::Sop);
    auto noise_rng = make_rng(cfg.seed, Stream::TraceNoise);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> amp(w * m);
    for (std::size_t i = 0; i < w; ++i) {
        double* row = amp.data() + i * m;
        for (std::size_t k = 0; k < m; ++k) row[k] = base[k];

        const double s = drive_at_trace(cfg, static_cast<std::int64_t>(i));
        if (s != 0.0 && cfg.vibration_depth > 0.0) {
            for (std::int64_t k = first; k <= last; ++k) {
                row[k] += cfg.vibration_depth * local *
                          overlap_kernel(k, cfg.vibration_point, cfg.pulse_width_points) * s;
            }
        }
        if (cfg.sop_sigma > 0.0) {
            const double factor = 1.0 + cfg.sop_sigma * normal(sop_rng);
            for (std::size_t k = 0; k < m; ++k) row[k] *= factor;
        }
        if (cfg.noise_sigma > 0.0) {
            for (std::size_t k = 0; k < m; ++k) row[k] += cfg.noise_sigma * normal(noise_rng);
        }
    }
    return TraceMatrix(w, m, std::move(amp), cfg.meters_per_point, cfg.trace_rate_hz,
                       Provenance::Synthetic);
}

}  // namespace hocdvs
