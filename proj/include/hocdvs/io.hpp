#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hocdvs/detect.hpp"
#include "hocdvs/synth.hpp"

namespace hocdvs {

/// Binary trace file layout (little-endian, packed):
///
///   offset  size  field
///   0       8     magic "HOCDVS01"
///   8       4     version (u32, = 1)
///   12      4     num_traces (u32)
///   16      4     fiber_points (u32)
///   20      8     meters_per_point (f64)
///   28      8     trace_rate_hz (f64)
///   36      1     provenance (u8: 0 synthetic, 1 recorded)
///   37      4*W*M amplitudes (f32), trace-major
inline constexpr std::string_view kTraceMagic = "HOCDVS01";
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderSize = 37;

struct TraceFileHeader {
    std::uint32_t version = kTraceVersion;
    std::uint32_t num_traces = 0;
    std::uint32_t fiber_points = 0;
    double meters_per_point = 1.0;
    double trace_rate_hz = 1.0;
    Provenance provenance = Provenance::Synthetic;
};

[[nodiscard]] std::string encode_traces(const TraceMatrix& traces);
[[nodiscard]] TraceMatrix decode_traces(std::string_view bytes);

void write_traces(const std::filesystem::path& path, const TraceMatrix& traces);
[[nodiscard]] TraceMatrix read_traces(const std::filesystem::path& path);

/// `position_m,value` header, one row per fiber point, 12 significant digits.
[[nodiscard]] std::string profile_to_csv(const HocProfile& profile);
void export_profile_csv(const HocProfile& profile, const std::filesystem::path& path);

struct ProfileCsvRow {
    double position_m;
    double value;
};
[[nodiscard]] std::vector<ProfileCsvRow> parse_profile_csv(std::string_view text);

/// {method, peak_index, peak_position_m, location_snr_db, spatial_resolution_m,
///  window, config_digest, detected}; spatial_resolution_m is null when absent.
[[nodiscard]] std::string report_to_json(const DetectionReport& report, std::string_view config_digest);
void write_report_json(const DetectionReport& report, std::string_view config_digest,
                       const std::filesystem::path& path);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling then renames over the target.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace hocdvs
