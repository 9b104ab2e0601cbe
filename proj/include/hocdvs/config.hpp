#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hocdvs/synth.hpp"

namespace hocdvs {

/// Keys accepted in a SimConfig file, in canonical order.
[[nodiscard]] const std::vector<std::string>& sim_config_keys();

/// Parses `key = value` lines. Blank lines and `#` comments are ignored.
/// Every key must appear exactly once; integers are plain decimal and reals
/// must carry a decimal point. Throws MissingKey / UnknownKey / BadConfig
/// with the offending key in the message.
[[nodiscard]] SimConfig parse_sim_config(std::string_view text);
[[nodiscard]] SimConfig load_sim_config(const std::filesystem::path& path);

/// Sets a single field from its textual value, with the same typing rules as
/// the file parser. Does not validate the whole config.
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text form; parse_sim_config(to_config_text(c)) == c.
[[nodiscard]] std::string to_config_text(const SimConfig& cfg);

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);
[[nodiscard]] std::string hex_digest(std::string_view bytes);

/// Digest of the canonical config text.
[[nodiscard]] std::string config_digest(const SimConfig& cfg);

/// Shortest round-trip decimal that always contains a decimal point.
[[nodiscard]] std::string format_real(double v);

}  // namespace hocdvs
