#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hocdvs {

/// A non-empty real time series. The `centered` flag is only ever set by
/// `center()` or by `Sequence::centered()` after the mean has been checked,
/// so cumulant estimators can rely on it instead of re-centering silently.
class Sequence {
public:
    /// Throws EmptySequence for an empty sample vector.
    explicit Sequence(std::vector<double> samples);

    /// Adopts samples that are already zero-mean. Throws NotCentered when the
    /// mean exceeds 1e-12 * max(1, max|x|).
    [[nodiscard]] static Sequence centered(std::vector<double> samples);

    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] bool is_centered() const noexcept { return centered_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return samples_[i]; }

private:
    Sequence(std::vector<double> samples, bool centered);

    std::vector<double> samples_;
    bool centered_ = false;
};

struct LagRequest {
    std::int64_t tau1 = 0;
    std::int64_t tau2 = 0;
};

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;         // in-range samples; equals the sum of counts
    std::uint64_t out_of_range = 0;  // samples outside [lo, hi]
};

enum class SnrMode { Lenient, Strict };

[[nodiscard]] double mean(std::span<const double> x);

/// (1/N) * sum x^3 with no centering check. Shared kernel behind the
/// zero-lag estimator and the per-point profile.
[[nodiscard]] double mean_cube(std::span<const double> x);

[[nodiscard]] Sequence center(const Sequence& x);

/// cum(x1, x2, x3) = E{x1 x2 x3} for zero-mean inputs.
[[nodiscard]] double joint_cumulant3(const Sequence& x1, const Sequence& x2, const Sequence& x3);

/// Lagged third cumulant c3(tau1, tau2). Sums t = 0 .. N-1-max(tau1, tau2)
/// and divides by that effective count, so (0, 0) is the mean cube.
[[nodiscard]] double third_cumulant_lagged(const Sequence& x, LagRequest req);

[[nodiscard]] double third_cumulant_zero_lag(const Sequence& x);

/// Mean square.
[[nodiscard]] double power(const Sequence& x);
[[nodiscard]] double power(std::span<const double> x);

/// 10 lg(p_signal / p_noise). A zero signal yields -inf in lenient mode and
/// ZeroSignal in strict mode.
[[nodiscard]] double snr_db(double p_signal, double p_noise, SnrMode mode = SnrMode::Lenient);

/// Floor below which a noise reference's |HOC| is treated as degenerate.
[[nodiscard]] double degenerate_hoc_floor(double noise_power);

/// SNR2 for one (mixture, equal-power pure noise) pair:
/// 10 lg(|HOC(mixed)| / |HOC(noise_ref)|).
[[nodiscard]] double snr2_db(const Sequence& mixed, const Sequence& noise_ref);

/// Aggregates SNR2 over many noise realizations. The ensemble figure averages
/// the HOCs before taking the ratio: 10 lg(|mean HOC(mixed)| / mean |HOC(noise)|).
/// Per-pair dB values are tracked alongside for spread reporting.
class Snr2Accumulator {
public:
    /// Same preconditions as snr2_db except that a degenerate noise reference
    /// is counted rather than rejected.
    void add(const Sequence& mixed, const Sequence& noise_ref);

    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] std::size_t degenerate_count() const noexcept { return degenerate_; }
    [[nodiscard]] double ensemble_db() const;
    /// Mean and sample standard deviation of the non-degenerate per-pair values.
    [[nodiscard]] double per_pair_mean_db() const;
    [[nodiscard]] double per_pair_std_db() const;

private:
    std::size_t count_ = 0;
    std::size_t degenerate_ = 0;
    double sum_mixed_hoc_ = 0.0;
    double sum_abs_noise_hoc_ = 0.0;
    std::vector<double> pair_db_;
};

/// Equal-width bins over [lo, hi]; bins are half-open except the last.
[[nodiscard]] Histogram histogram(std::span<const double> x, int bins, double lo, double hi);
[[nodiscard]] Histogram histogram(const Sequence& x, int bins, double lo, double hi);

}  // namespace hocdvs
