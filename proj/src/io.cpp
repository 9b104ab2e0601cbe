#include "hocdvs/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hocdvs/error.hpp"

namespace hocdvs {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::string& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, in.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string encode_traces(const TraceMatrix& traces) {
    const std::size_t w = traces.num_traces();
    const std::size_t m = traces.fiber_points();
    if (w > UINT32_MAX || m > UINT32_MAX) {
        throw Error(ErrorCode::CorruptHeader, "matrix dimensions exceed the u32 header fields");
    }
    std::string out;
    out.reserve(kTraceHeaderSize + 4 * w * m);
    out.append(kTraceMagic);
    put_le<std::uint32_t>(out, kTraceVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m));
    put_le<double>(out, traces.meters_per_point());
    put_le<double>(out, traces.trace_rate_hz());
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(traces.provenance()));
    for (double v : traces.amplitudes()) put_le<float>(out, static_cast<float>(v));
    return out;
}

TraceMatrix decode_traces(std::string_view bytes) {
    if (bytes.size() < kTraceMagic.size() || bytes.substr(0, kTraceMagic.size()) != kTraceMagic) {
        throw Error(ErrorCode::NotATraceFile, "missing HOCDVS01 magic");
    }
    if (bytes.size() < kTraceHeaderSize) throw Error(ErrorCode::CorruptHeader, "header is truncated");

    TraceFileHeader h;
    h.version = get_le<std::uint32_t>(bytes, 8);
    h.num_traces = get_le<std::uint32_t>(bytes, 12);
    h.fiber_points = get_le<std::uint32_t>(bytes, 16);
    h.meters_per_point = get_le<double>(bytes, 20);
    h.trace_rate_hz = get_le<double>(bytes, 28);
    const auto prov = get_le<std::uint8_t>(bytes, 36);

    if (h.version != kTraceVersion) {
        throw Error(ErrorCode::CorruptHeader, "unsupported version " + std::to_string(h.version));
    }
    if (h.num_traces == 0 || h.fiber_points == 0) throw Error(ErrorCode::CorruptHeader, "zero dimension");
    if (prov > 1) throw Error(ErrorCode::CorruptHeader, "unknown provenance tag");
    h.provenance = static_cast<Provenance>(prov);

    const std::size_t count = static_cast<std::size_t>(h.num_traces) * h.fiber_points;
    const std::size_t expected = kTraceHeaderSize + 4 * count;
    if (bytes.size() < expected) {
        throw Error(ErrorCode::TruncatedPayload, "payload holds " +
                                                     std::to_string(bytes.size() - kTraceHeaderSize) +
                                                     " bytes, header promises " + std::to_string(4 * count));
    }
    if (bytes.size() > expected) {
        throw Error(ErrorCode::CorruptHeader, "payload is longer than the header dimensions");
    }
    std::vector<double> amp(count);
    for (std::size_t i = 0; i < count; ++i) {
        amp[i] = static_cast<double>(get_le<float>(bytes, kTraceHeaderSize + 4 * i));
    }
    try {
        return TraceMatrix(h.num_traces, h.fiber_points, std::move(amp), h.meters_per_point,
                           h.trace_rate_hz, h.provenance);
    } catch (const Error& e) {
        throw Error(ErrorCode::CorruptHeader, e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into place at " + path.string());
    }
}

void write_traces(const std::filesystem::path& path, const TraceMatrix& traces) {
    write_file(path, encode_traces(traces));
}

TraceMatrix read_traces(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    try {
        return decode_traces(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string profile_to_csv(const HocProfile& profile) {
    std::string out = "position_m,value\n";
    for (std::size_t k = 0; k < profile.values.size(); ++k) {
        out += format_sig(static_cast<double>(k) * profile.meters_per_point);
        out += ',';
        out += format_sig(profile.values[k]);
        out += '\n';
    }
    return out;
}

void export_profile_csv(const HocProfile& profile, const std::filesystem::path& path) {
    write_file(path, profile_to_csv(profile));
}

std::vector<ProfileCsvRow> parse_profile_csv(std::string_view text) {
    std::vector<ProfileCsvRow> rows;
    std::size_t pos = text.find('\n');
    if (pos == std::string_view::npos || text.substr(0, pos) != "position_m,value") {
        throw Error(ErrorCode::BadConfig, "profile CSV lacks the position_m,value header");
    }
    ++pos;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorCode::BadConfig, "malformed CSV row '" + std::string(line) + "'");
        }
        ProfileCsvRow row{};
        const auto a = std::from_chars(line.data(), line.data() + comma, row.position_m);
        const auto b = std::from_chars(line.data() + comma + 1, line.data() + line.size(), row.value);
        if (a.ec != std::errc{} || b.ec != std::errc{}) {
            throw Error(ErrorCode::BadConfig, "malformed CSV row '" + std::string(line) + "'");
        }
        rows.push_back(row);
    }
    return rows;
}

std::string report_to_json(const DetectionReport& report, std::string_view config_digest) {
    nlohmann::json j;
    j["method"] = std::string(to_string(report.method));
    j["peak_index"] = report.peak_index;
    j["peak_position_m"] = report.peak_position_m;
    j["location_snr_db"] = report.location_snr_db;
    j["spatial_resolution_m"] =
        report.spatial_resolution_m ? nlohmann::json(*report.spatial_resolution_m) : nlohmann::json(nullptr);
    j["window"] = report.window;
    j["config_digest"] = std::string(config_digest);
    j["detected"] = report.detected;
    return j.dump(2) + "\n";
}

void write_report_json(const DetectionReport& report, std::string_view config_digest,
                       const std::filesystem::path& path) {
    write_file(path, report_to_json(report, config_digest));
}

}  // namespace hocdvs
