#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hocdvs/detect.hpp"
#include "hocdvs/error.hpp"
#include "hocdvs/experiment.hpp"

namespace hocdvs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoDetection = 3;
inline constexpr int kExitIo = 4;

/// I/O and file-format failures map to 4, NoPeak to 3, everything else to 2.
[[nodiscard]] int exit_code_for(ErrorCode code) noexcept;

/// Each command returns its exit code; messages go to `out` / `err`.
int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
                 std::ostream& out, std::ostream& err);

int cmd_analyze(const std::filesystem::path& trace_path, const AnalysisOptions& options,
                const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

int cmd_experiment(const std::string& preset, const std::filesystem::path& out_dir,
                   const std::optional<std::string>& seeds, const std::vector<std::string>& overrides,
                   std::ostream& out, std::ostream& err);

/// Digest of the trace file bytes plus the analysis options.
[[nodiscard]] std::string analysis_digest(const std::string& trace_bytes, const AnalysisOptions& options);

}  // namespace hocdvs
