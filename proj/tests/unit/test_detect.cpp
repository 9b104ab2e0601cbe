#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "hocdvs/detect.hpp"
#include "hocdvs/stats.hpp"
#include "hocdvs/synth.hpp"

using namespace hocdvs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

HocProfile profile_of(std::vector<double> v, double mpp = 1.0) {
    return HocProfile{std::move(v), 100, mpp, Method::Hoc};
}

TraceMatrix noise_traces(std::size_t w, std::size_t m, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sigma);
    std::vector<double> a(w * m);
    for (auto& x : a) x = d(rng);
    return TraceMatrix(w, m, std::move(a), 1.0, 1e4);
}

// Ramp of `len` points rising from 0 to 1 into a flat top at `peak`, raised to `power`.
HocProfile ramp(std::size_t len, int power) {
    std::vector<double> v(200, 0.0);
    const std::size_t peak = 150;
    for (std::size_t j = 0; j <= len; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(len);
        v[peak - len + j] = std::pow(u, power);
    }
    return profile_of(std::move(v));
}

// Noise sigma giving per-point SNR1 (drive power at the vibration point over noise power).
double sigma_for_snr1(const SimConfig& cfg, double snr1_db) {
    const double bv = speckle_baseline(static_cast<std::size_t>(cfg.fiber_points),
                                       static_cast<std::size_t>(cfg.pulse_width_points),
                                       cfg.seed)[static_cast<std::size_t>(cfg.vibration_point)];
    double ps = 0.0;
    for (std::int64_t i = 0; i < cfg.num_traces; ++i) {
        const double s = cfg.vibration_depth * bv * drive_at_trace(cfg, i);
        ps += s * s;
    }
    ps /= static_cast<double>(cfg.num_traces);
    return std::sqrt(ps / std::pow(10.0, snr1_db / 10.0));
}

}  // namespace

TEST_CASE("detrend examples", "[detect]") {
    const TraceMatrix t(2, 2, {1, 5, 3, 5}, 1.0, 1.0);
    const TraceMatrix r = detrend(t);
    CHECK(r.column(0) == std::vector<double>{-1, 1});
    CHECK(r.column(1) == std::vector<double>{0, 0});
    CHECK(is_detrended(r));
    CHECK_FALSE(is_detrended(t));
    REQUIRE_ERROR_CODE(detrend(TraceMatrix(1, 2, {1, 2}, 1.0, 1.0)), ErrorCode::TooFewTraces);

    SimConfig cfg = bench_config();
    cfg.vibration_depth = 0.0;
    cfg.noise_sigma = 0.0;
    cfg.sop_sigma = 0.0;
    const TraceMatrix flat = detrend(synth_traces(cfg));
    for (double v : flat.amplitudes()) REQUIRE_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("hoc_profile preconditions and zero input", "[detect]") {
    const TraceMatrix z(3, 4, std::vector<double>(12, 0.0), 1.0, 1.0);
    CHECK(hoc_profile(z, 3).values == std::vector<double>(4, 0.0));
    REQUIRE_ERROR_CODE(hoc_profile(z, 4), ErrorCode::WindowExceedsTraces);
    REQUIRE_ERROR_CODE(hoc_profile(z, 1), ErrorCode::BadWindow);
    REQUIRE_ERROR_CODE(hoc_profile(TraceMatrix(2, 1, {1, 2}, 1.0, 1.0), 2), ErrorCode::NotDetrended);
}

TEST_CASE("hoc_profile equals the zero-lag estimator per column", "[detect][property]") {
    const TraceMatrix r = detrend(noise_traces(50, 30, 3));
    const HocProfile p = hoc_profile(r, 50);
    for (std::size_t k = 0; k < 30; ++k) {
        const double ref = third_cumulant_zero_lag(center(Sequence(r.column(k))));
        CHECK_THAT(p.values[k], WithinAbs(ref, 1e-12 * std::max(1.0, std::abs(ref))));
    }
}

TEST_CASE("cubic equivariance of the profile", "[detect][property]") {
    SimConfig cfg = bench_config();
    const TraceMatrix t = synth_traces(cfg);
    const HocProfile p = hoc_profile(detrend(t), 100);
    for (double a : {0.5, 2.0, 3.7}) {
        std::vector<double> scaled(t.amplitudes().begin(), t.amplitudes().end());
        for (auto& v : scaled) v *= a;
        const HocProfile q = hoc_profile(detrend(t.with_amplitudes(scaled)), 100);
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            REQUIRE_THAT(q.values[k], WithinAbs(a * a * a * p.values[k], 1e-9 * std::abs(a * a * a * p.values[k]) + 1e-18));
        }
        CHECK(locate_peak(q).index == locate_peak(p).index);
    }
}

TEST_CASE("moving differential baselines", "[detect]") {
    const TraceMatrix same(4, 3, {1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3}, 1.0, 1.0);
    CHECK(moving_differential_profile(same, 4).values == std::vector<double>(3, 0.0));
    const TraceMatrix t(3, 1, {0, 2, 1}, 1.0, 1.0);
    CHECK(moving_differential_profile(t, 3).values[0] == 1.5);

    const TraceMatrix n = noise_traces(100, 40, 9);
    CHECK(moving_average_profile(n, 100, 1).values == moving_differential_profile(n, 100).values);
    REQUIRE_ERROR_CODE(moving_average_profile(n, 100, 0), ErrorCode::BadAverageLength);
    REQUIRE_ERROR_CODE(moving_average_profile(n, 100, 101), ErrorCode::BadAverageLength);
    REQUIRE_ERROR_CODE(moving_average_profile(n, 100, 60), ErrorCode::BadAverageLength);
}

TEST_CASE("block averaging lowers the white-noise profile", "[detect]") {
    const TraceMatrix n = noise_traces(100, 500, 13);
    double prev = 1e300;
    for (std::size_t len : {1u, 2u, 5u, 10u}) {
        const auto p = moving_average_profile(n, 100, len);
        const double level = mean(p.values);
        CHECK(level < prev);
        prev = level;
    }
}

TEST_CASE("zero-noise moving differential is a triangle of width 2P-1", "[detect]") {
    SimConfig cfg = bench_config();
    cfg.noise_sigma = 0.0;
    cfg.sop_sigma = 0.0;
    const HocProfile p = moving_differential_profile(synth_traces(cfg), 100);
    std::size_t support = 0;
    for (std::size_t k = 0; k < p.values.size(); ++k) support += p.values[k] != 0.0;
    CHECK(support == 19);
    for (std::int64_t d = 1; d < 10; ++d) {
        CHECK_THAT(p.values[1049 - d] / p.values[1049], WithinAbs(1.0 - d / 10.0, 1e-12));
    }
}

TEST_CASE("methods agree on the peak at high SNR", "[detect]") {
    const TraceMatrix t = synth_traces(bench_config());
    const auto hoc = locate_peak(hoc_profile(detrend(t), 100)).index;
    const auto md = locate_peak(moving_differential_profile(t, 100)).index;
    const auto ma1 = locate_peak(moving_average_profile(t, 100, 1)).index;
    const auto ma5 = locate_peak(moving_average_profile(t, 100, 5)).index;
    CHECK(std::abs(static_cast<long>(hoc) - 1049) <= 5);
    CHECK(std::abs(static_cast<long>(md) - static_cast<long>(hoc)) <= 5);
    CHECK(ma1 == md);
    CHECK(std::abs(static_cast<long>(ma5) - static_cast<long>(ma1)) <= 5);
}

TEST_CASE("locate_peak", "[detect]") {
    CHECK(locate_peak(profile_of({0, 0, 5, 0})).index == 2);
    CHECK(locate_peak(profile_of({0, -7, 3})).index == 1);
    CHECK(locate_peak(profile_of({2, -2, 1})).index == 0);
    CHECK(locate_peak(profile_of({0, 0, 5, 0}, 2.5)).position_m == 5.0);
    REQUIRE_ERROR_CODE(locate_peak(profile_of({0, 0, 0})), ErrorCode::NoPeak);
}

TEST_CASE("location_snr", "[detect]") {
    CHECK_THAT(location_snr(profile_of({3, 1, 1, 1, 1}), 0, 1), WithinAbs(10 * std::log10(9.0), 1e-12));
    REQUIRE_ERROR_CODE(location_snr(profile_of({1, 0, 0, 0}), 0, 1), ErrorCode::ZeroBackground);
    REQUIRE_ERROR_CODE(location_snr(profile_of({3, 1, 1}), 0, 5), ErrorCode::BadGuard);
}

TEST_CASE("spatial resolution of linear and cubed ramps", "[detect]") {
    CHECK_THAT(spatial_resolution(ramp(10, 1), 150, 10), WithinAbs(8.0, 1e-12));
    // Cubing sampled ramp: crossings of u^3 at 0.1 and 0.9, interpolated between samples.
    const double cubed = spatial_resolution(ramp(10, 3), 150, 10);
    CHECK_THAT(cubed, WithinAbs(5.0408, 1e-3));
    const double analytic = 10.0 * (std::cbrt(0.9) - std::cbrt(0.1));
    CHECK_THAT(cubed / 8.0, WithinAbs(analytic / 8.0, 0.05));
    CHECK(cubed / 8.0 > 0.4);
    CHECK(cubed / 8.0 < 0.7);
    REQUIRE_ERROR_CODE(spatial_resolution(ramp(40, 1), 150, 10), ErrorCode::NoEdge);
}

TEST_CASE("edge sharpening on zero-noise runs", "[detect][property]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SimConfig cfg = bench_config();
        cfg.noise_sigma = 0.0;
        cfg.sop_sigma = 0.0;
        cfg.seed = seed;
        const TraceMatrix t = synth_traces(cfg);
        const HocProfile h = hoc_profile(detrend(t), 100);
        const HocProfile m = moving_differential_profile(t, 100);
        const double sh = spatial_resolution(h, locate_peak(h).index, 10);
        const double sm = spatial_resolution(m, locate_peak(m).index, 10);
        CHECK(sh < sm);
        CHECK(sh / sm >= 0.4);
        CHECK(sh / sm <= 0.7);
    }
}

TEST_CASE("Gaussian-noise profiles show no systematic peak", "[detect][property]") {
    // Peak locations of pure-noise profiles spread over the fiber.
    std::vector<int> hits(4, 0);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const HocProfile p = hoc_profile(detrend(noise_traces(100, 200, 1000 + seed)), 100);
        hits[locate_peak(p).index / 50]++;
    }
    for (int h : hits) CHECK(h > 25);
}

TEST_CASE("localization within a pulse width at SNR1 between 0 and 6 dB", "[detect][property]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> snr1(0.0, 6.0);
    int localized = 0;
    const int runs = 100;
    for (int r = 0; r < runs; ++r) {
        SimConfig cfg = bench_config();
        cfg.vibration.duty = 0.1;
        cfg.seed = static_cast<std::uint64_t>(r);
        cfg.noise_sigma = sigma_for_snr1(cfg, snr1(rng));
        const auto a = analyze(synth_traces(cfg), AnalysisOptions{});
        localized += std::abs(static_cast<long>(a.report.peak_index) - cfg.vibration_point) <=
                     cfg.pulse_width_points;
    }
    CHECK(localized >= 95);
}

TEST_CASE("HOC location SNR beats the moving differential at SNR1 = 0 dB", "[detect][property]") {
    double hoc = 0.0, md = 0.0;
    const int runs = 50;
    for (int r = 0; r < runs; ++r) {
        SimConfig cfg = bench_config();
        cfg.vibration.duty = 0.1;
        cfg.seed = static_cast<std::uint64_t>(r);
        cfg.noise_sigma = sigma_for_snr1(cfg, 0.0);
        const TraceMatrix t = synth_traces(cfg);
        AnalysisOptions opt;
        hoc += analyze(t, opt).report.location_snr_db / runs;
        opt.method = Method::MovingDifferential;
        md += analyze(t, opt).report.location_snr_db / runs;
    }
    CHECK(hoc > md);
}

TEST_CASE("analyze fills the report", "[detect]") {
    const TraceMatrix t = synth_traces(bench_config());
    AnalysisOptions opt;
    opt.min_snr_db = 1000.0;
    const Analysis a = analyze(t, opt);
    CHECK(a.report.method == Method::Hoc);
    CHECK(a.report.window == 100);
    CHECK(a.report.peak_position_m == a.report.peak_index * 1.0);
    CHECK(std::isfinite(a.report.location_snr_db));
    CHECK(a.report.spatial_resolution_m.has_value());
    CHECK_FALSE(a.report.detected);
    CHECK(parse_method("mdiff") == Method::MovingDifferential);
    CHECK(parse_method("mavg") == Method::MovingAverage);
    REQUIRE_ERROR_CODE(parse_method("fft"), ErrorCode::BadConfig);
}
