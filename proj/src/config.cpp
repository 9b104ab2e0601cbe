#include "hocdvs/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hocdvs/error.hpp"

namespace hocdvs {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
    throw Error(ErrorCode::BadConfig,
                "key '" + std::string(key) + "': '" + std::string(value) + "' is not " + expected);
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
    Int out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end) bad_value(key, value, "a decimal integer");
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    if (value.find('.') == std::string_view::npos) {
        bad_value(key, value, "a real with a decimal point");
    }
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) bad_value(key, value, "a real number");
    return out;
}

struct Field {
    std::function<void(SimConfig&, std::string_view, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <typename Int>
Field int_field(Int SimConfig::*member) {
    return {[member](SimConfig& c, std::string_view k, std::string_view v) {
                c.*member = parse_int<Int>(k, v);
            },
            [member](const SimConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(double SimConfig::*member) {
    return {[member](SimConfig& c, std::string_view k, std::string_view v) {
                c.*member = parse_real(k, v);
            },
            [member](const SimConfig& c) { return format_real(c.*member); }};
}

template <typename T>
Field wave_field(T SquareWaveSpec::*member) {
    if constexpr (std::is_same_v<T, double>) {
        return {[member](SimConfig& c, std::string_view k, std::string_view v) {
                    c.vibration.*member = parse_real(k, v);
                },
                [member](const SimConfig& c) { return format_real(c.vibration.*member); }};
    } else {
        return {[member](SimConfig& c, std::string_view k, std::string_view v) {
                    c.vibration.*member = parse_int<T>(k, v);
                },
                [member](const SimConfig& c) { return std::to_string(c.vibration.*member); }};
    }
}

const std::vector<std::pair<std::string, Field>>& field_table() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"fiber_points", int_field(&SimConfig::fiber_points)},
        {"num_traces", int_field(&SimConfig::num_traces)},
        {"pulse_width_points", int_field(&SimConfig::pulse_width_points)},
        {"meters_per_point", real_field(&SimConfig::meters_per_point)},
        {"trace_rate_hz", real_field(&SimConfig::trace_rate_hz)},
        {"sample_rate_hz", real_field(&SimConfig::sample_rate_hz)},
        {"vibration_point", int_field(&SimConfig::vibration_point)},
        {"vibration.duty", wave_field(&SquareWaveSpec::duty)},
        {"vibration.period_samples", wave_field(&SquareWaveSpec::period_samples)},
        {"vibration.amplitude", wave_field(&SquareWaveSpec::amplitude)},
        {"vibration.phase_samples", wave_field(&SquareWaveSpec::phase_samples)},
        {"vibration_depth", real_field(&SimConfig::vibration_depth)},
        {"noise_sigma", real_field(&SimConfig::noise_sigma)},
        {"sop_sigma", real_field(&SimConfig::sop_sigma)},
        {"seed", int_field(&SimConfig::seed)},
    };
    return table;
}

const Field* find_field(std::string_view key) {
    for (const auto& [name, field] : field_table()) {
        if (name == key) return &field;
    }
    return nullptr;
}

}  // namespace

const std::vector<std::string>& sim_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& entry : field_table()) out.push_back(entry.first);
        return out;
    }();
    return keys;
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    std::string out = ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
    if (out.find('.') == std::string::npos) out += ".0";
    return out;
}

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
    const Field* field = find_field(key);
    if (field == nullptr) throw Error(ErrorCode::UnknownKey, "unknown key '" + std::string(key) + "'");
    field->set(cfg, key, value);
}

SimConfig parse_sim_config(std::string_view text) {
    SimConfig cfg;
    std::map<std::string, bool, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::BadConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (seen.contains(key)) {
            throw Error(ErrorCode::BadConfig, "duplicate key '" + std::string(key) + "'");
        }
        set_config_value(cfg, key, value);
        seen.emplace(std::string(key), true);
    }
    for (const auto& key : sim_config_keys()) {
        if (!seen.contains(key)) throw Error(ErrorCode::MissingKey, "missing key '" + key + "'");
    }
    validate(cfg);
    return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sim_config(buf.str());
}

std::string to_config_text(const SimConfig& cfg) {
    std::string out;
    for (const auto& [name, field] : field_table()) out += name + " = " + field.get(cfg) + "\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_digest(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string config_digest(const SimConfig& cfg) { return hex_digest(to_config_text(cfg)); }

}  // namespace hocdvs
