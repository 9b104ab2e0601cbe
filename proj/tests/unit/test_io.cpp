#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "helpers.hpp"
#include "hocdvs/io.hpp"

using namespace hocdvs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hocdvs_unit";
    fs::create_directories(dir);
    return dir / name;
}

TraceMatrix random_matrix(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    std::uniform_real_distribution<double> val(-1e3, 1e3);
    const std::size_t w = dim(rng), m = dim(rng);
    std::vector<double> a(w * m);
    for (auto& x : a) x = static_cast<double>(static_cast<float>(val(rng)));
    return TraceMatrix(w, m, std::move(a), val(rng) + 2000.0, val(rng) + 5000.0,
                       rng() % 2 ? Provenance::Recorded : Provenance::Synthetic);
}

}  // namespace

TEST_CASE("trace file layout", "[io]") {
    const TraceMatrix t(2, 3, {1, 2, 3, 4, 5, 6}, 1.0, 1e4);
    const std::string bytes = encode_traces(t);
    CHECK(bytes.size() == kTraceHeaderSize + 24);
    CHECK(bytes.substr(0, 8) == "HOCDVS01");
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);
    CHECK(static_cast<unsigned char>(bytes[12]) == 2);
    CHECK(static_cast<unsigned char>(bytes[16]) == 3);
    CHECK(static_cast<unsigned char>(bytes[36]) == 0);
    // 1.0f little-endian
    CHECK(bytes.substr(37, 4) == std::string("\x00\x00\x80\x3f", 4));
}

TEST_CASE("trace files round-trip", "[io][property]") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const TraceMatrix t = random_matrix(rng);
        CHECK(decode_traces(encode_traces(t)) == t);
    }
    const auto path = scratch("rt.bin");
    const TraceMatrix t = random_matrix(rng);
    write_traces(path, t);
    CHECK(read_traces(path) == t);
}

TEST_CASE("bench-scale matrix survives float32 storage", "[io]") {
    const TraceMatrix t = synth_traces(bench_config());
    const TraceMatrix back = decode_traces(encode_traces(t));
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < t.amplitudes().size(); ++i) {
        peak = std::max(peak, std::abs(t.amplitudes()[i]));
        worst = std::max(worst, std::abs(t.amplitudes()[i] - back.amplitudes()[i]));
    }
    CHECK(worst <= std::nextafter(static_cast<float>(peak), INFINITY) - static_cast<float>(peak));
}

TEST_CASE("malformed trace files", "[io]") {
    const std::string good = encode_traces(TraceMatrix(2, 3, {1, 2, 3, 4, 5, 6}, 1.0, 1e4));
    REQUIRE_ERROR_CODE(decode_traces(good.substr(0, good.size() - 1)), ErrorCode::TruncatedPayload);
    REQUIRE_ERROR_CODE(decode_traces(good + "x"), ErrorCode::CorruptHeader);
    REQUIRE_ERROR_CODE(decode_traces("NOTATRACEFILE"), ErrorCode::NotATraceFile);
    REQUIRE_ERROR_CODE(decode_traces(good.substr(0, 20)), ErrorCode::CorruptHeader);
    std::string v2 = good;
    v2[8] = 2;
    REQUIRE_ERROR_CODE(decode_traces(v2), ErrorCode::CorruptHeader);
    std::string prov = good;
    prov[36] = 7;
    REQUIRE_ERROR_CODE(decode_traces(prov), ErrorCode::CorruptHeader);
    std::string zero = good;
    zero[12] = 0;
    REQUIRE_ERROR_CODE(decode_traces(zero), ErrorCode::CorruptHeader);

    const auto path = scratch("short.bin");
    write_file(path, good.substr(0, 50));
    try {
        (void)read_traces(path);
        FAIL("expected TruncatedPayload");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TruncatedPayload);
        CHECK(std::string(e.what()).find("short.bin") != std::string::npos);
    }
    REQUIRE_ERROR_CODE(read_traces(scratch("missing.bin")), ErrorCode::IoError);
    REQUIRE_ERROR_CODE(write_traces("/nonexistent-dir/x.bin", TraceMatrix(1, 1, {1}, 1.0, 1.0)),
                       ErrorCode::IoError);
}

TEST_CASE("profile CSV", "[io]") {
    const HocProfile p{{0.5, -1.25}, 100, 2.0, Method::Hoc};
    const std::string csv = profile_to_csv(p);
    CHECK(csv == "position_m,value\n0,0.5\n2,-1.25\n");
    const auto rows = parse_profile_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].position_m == 2.0);
    REQUIRE_ERROR_CODE(parse_profile_csv("x,y\n"), ErrorCode::BadConfig);
    REQUIRE_ERROR_CODE(parse_profile_csv("position_m,value\n1;2\n"), ErrorCode::BadConfig);
}

TEST_CASE("profile CSV round-trips", "[io][property]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-20, 5);
    for (int i = 0; i < 100; ++i) {
        HocProfile p;
        p.meters_per_point = 0.5 + (i % 7);
        p.values.resize(1 + rng() % 50);
        for (auto& v : p.values) v = val(rng) * std::pow(10.0, expo(rng));
        const auto rows = parse_profile_csv(profile_to_csv(p));
        REQUIRE(rows.size() == p.values.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            CHECK(std::abs(rows[k].value - p.values[k]) <= 1e-9 * std::abs(p.values[k]));
            CHECK(std::abs(rows[k].position_m - k * p.meters_per_point) <= 1e-9 * k * p.meters_per_point);
        }
    }
}

TEST_CASE("report JSON schema", "[io]") {
    DetectionReport r;
    r.peak_index = 1049;
    r.peak_position_m = 1049.0;
    r.location_snr_db = 12.5;
    r.window = 100;
    auto j = nlohmann::json::parse(report_to_json(r, "00ff"));
    for (const char* key : {"method", "peak_index", "peak_position_m", "location_snr_db",
                            "spatial_resolution_m", "window", "config_digest", "detected"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["spatial_resolution_m"].is_null());
    CHECK(j["method"] == "hoc");
    r.spatial_resolution_m = 5.0;
    j = nlohmann::json::parse(report_to_json(r, "00ff"));
    CHECK(j["spatial_resolution_m"] == 5.0);
    CHECK(j["config_digest"] == "00ff");
}
