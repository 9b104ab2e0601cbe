#include "hocdvs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hocdvs/error.hpp"

namespace hocdvs {
namespace {

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void require_centered(const Sequence& x, const char* what) {
    if (!x.is_centered()) {
        throw Error(ErrorCode::NotCentered, std::string(what) + " requires a centered sequence");
    }
}

}  // namespace

Sequence::Sequence(std::vector<double> samples) : Sequence(std::move(samples), false) {}

Sequence::Sequence(std::vector<double> samples, bool centered)
    : samples_(std::move(samples)), centered_(centered) {
    if (samples_.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no samples");
}

Sequence Sequence::centered(std::vector<double> samples) {
    if (samples.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no samples");
    const double m = mean(samples);
    const double tol = 1e-12 * std::max(1.0, max_abs(samples));
    if (std::abs(m) > tol) {
        throw Error(ErrorCode::NotCentered, "sample mean " + std::to_string(m) + " is not zero");
    }
    return Sequence(std::move(samples), true);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::EmptySequence, "mean of empty range");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double mean_cube(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::EmptySequence, "mean cube of empty range");
    double acc = 0.0;
    for (double v : x) acc += v * v * v;
    return acc / static_cast<double>(x.size());
}

Sequence center(const Sequence& x) {
    const double m = mean(x.samples());
    std::vector<double> out(x.samples().begin(), x.samples().end());
    for (double& v : out) v -= m;
    // Second pass removes the rounding residue left by a large offset.
    const double residue = mean(out);
    for (double& v : out) v -= residue;
    return Sequence::centered(std::move(out));
}

double joint_cumulant3(const Sequence& x1, const Sequence& x2, const Sequence& x3) {
    if (x1.size() != x2.size() || x1.size() != x3.size()) {
        throw Error(ErrorCode::LengthMismatch, "joint cumulant inputs differ in length");
    }
    require_centered(x1, "joint_cumulant3");
    require_centered(x2, "joint_cumulant3");
    require_centered(x3, "joint_cumulant3");
    double acc = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) acc += x1[i] * x2[i] * x3[i];
    return acc / static_cast<double>(x1.size());
}

double third_cumulant_lagged(const Sequence& x, LagRequest req) {
    require_centered(x, "third_cumulant_lagged");
    const auto n = static_cast<std::int64_t>(x.size());
    if (req.tau1 < 0 || req.tau2 < 0 || req.tau1 >= n || req.tau2 >= n) {
        throw Error(ErrorCode::LagTooLarge, "lags (" + std::to_string(req.tau1) + ", " +
                                                std::to_string(req.tau2) + ") invalid for length " +
                                                std::to_string(n));
    }
    const std::int64_t count = n - std::max(req.tau1, req.tau2);
    const auto s = x.samples();
    double acc = 0.0;
    for (std::int64_t t = 0; t < count; ++t) {
        acc += s[static_cast<std::size_t>(t)] * s[static_cast<std::size_t>(t + req.tau1)] *
               s[static_cast<std::size_t>(t + req.tau2)];
    }
    return acc / static_cast<double>(count);
}

double third_cumulant_zero_lag(const Sequence& x) {
    require_centered(x, "third_cumulant_zero_lag");
    return mean_cube(x.samples());
}

double power(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::EmptySequence, "power of empty range");
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

double power(const Sequence& x) { return power(x.samples()); }

double snr_db(double p_signal, double p_noise, SnrMode mode) {
    if (!(p_noise > 0.0)) throw Error(ErrorCode::NonPositiveNoise, "noise power must be positive");
    if (p_signal < 0.0) throw Error(ErrorCode::NegativeSignal, "signal power must be non-negative");
    if (p_signal == 0.0) {
        if (mode == SnrMode::Strict) throw Error(ErrorCode::ZeroSignal, "signal power is zero");
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(p_signal / p_noise);
}

double degenerate_hoc_floor(double noise_power) { return 1e-3 * std::pow(noise_power, 1.5); }

namespace {

struct PairHoc {
    double mixed;
    double noise;
    double noise_power;
};

PairHoc pair_hoc(const Sequence& mixed, const Sequence& noise_ref) {
    require_centered(mixed, "snr2_db");
    require_centered(noise_ref, "snr2_db");
    const double pm = power(mixed);
    const double pn = power(noise_ref);
    if (!(pn > 0.0) || std::abs(pm - pn) > 0.01 * pn) {
        throw Error(ErrorCode::PowerMismatch, "mixture power " + std::to_string(pm) +
                                                  " and noise power " + std::to_string(pn) +
                                                  " differ by more than 1%");
    }
    return {mean_cube(mixed.samples()), mean_cube(noise_ref.samples()), pn};
}

}  // namespace

double snr2_db(const Sequence& mixed, const Sequence& noise_ref) {
    const PairHoc h = pair_hoc(mixed, noise_ref);
    if (std::abs(h.noise) < degenerate_hoc_floor(h.noise_power)) {
        throw Error(ErrorCode::DegenerateNoiseReference,
                    "noise reference HOC too close to zero; average over noise realizations");
    }
    return 10.0 * std::log10(std::abs(h.mixed) / std::abs(h.noise));
}

void Snr2Accumulator::add(const Sequence& mixed, const Sequence& noise_ref) {
    const PairHoc h = pair_hoc(mixed, noise_ref);
    ++count_;
    sum_mixed_hoc_ += h.mixed;
    sum_abs_noise_hoc_ += std::abs(h.noise);
    if (std::abs(h.noise) < degenerate_hoc_floor(h.noise_power)) {
        ++degenerate_;
        return;
    }
    pair_db_.push_back(10.0 * std::log10(std::abs(h.mixed) / std::abs(h.noise)));
}

double Snr2Accumulator::ensemble_db() const {
    if (count_ == 0 || !(sum_abs_noise_hoc_ > 0.0)) {
        throw Error(ErrorCode::DegenerateNoiseReference, "no usable noise realizations");
    }
    return 10.0 * std::log10(std::abs(sum_mixed_hoc_) / sum_abs_noise_hoc_);
}

double Snr2Accumulator::per_pair_mean_db() const {
    if (pair_db_.empty()) throw Error(ErrorCode::DegenerateNoiseReference, "no usable pairs");
    return mean(pair_db_);
}

double Snr2Accumulator::per_pair_std_db() const {
    if (pair_db_.size() < 2) return 0.0;
    const double m = mean(pair_db_);
    double ss = 0.0;
    for (double v : pair_db_) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(pair_db_.size() - 1));
}

Histogram histogram(std::span<const double> x, int bins, double lo, double hi) {
    if (bins < 1 || !std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw Error(ErrorCode::BadRange, "histogram needs bins >= 1 and finite lo < hi");
    }
    const auto nb = static_cast<std::size_t>(bins);
    Histogram h;
    h.bin_edges.resize(nb + 1);
    const double width = (hi - lo) / static_cast<double>(nb);
    for (std::size_t i = 0; i <= nb; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
    h.bin_edges.back() = hi;
    h.counts.assign(nb, 0);

    for (double v : x) {
        if (!(v >= lo && v <= hi)) {
            ++h.out_of_range;
            continue;
        }
        auto idx = static_cast<std::size_t>((v - lo) / width);
        idx = std::min(idx, nb - 1);
        // Settle rounding at interior edges against the stored edges.
        while (idx > 0 && v < h.bin_edges[idx]) --idx;
        while (idx + 1 < nb && v >= h.bin_edges[idx + 1]) ++idx;
        ++h.counts[idx];
        ++h.total;
    }
    return h;
}

Histogram histogram(const Sequence& x, int bins, double lo, double hi) {
    return histogram(x.samples(), bins, lo, hi);
}

}  // namespace hocdvs
