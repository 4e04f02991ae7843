#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "zigpcast/report_io.hpp"

namespace zigpcast::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFit = 3;
inline constexpr int kExitIo = 4;

// Directory searched for engine.cfg when --config is not given.
inline constexpr const char* kConfigDirEnv = "ZIGPCAST_CONFIG_DIR";

// Everything that determines a command's output; embedded in every file the
// command writes.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> inputs;  // role -> path
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_runs;
  std::string reference_date;
  std::string output;
  std::vector<std::string> overrides;  // --set key=value, in order

  Metadata to_metadata() const;
};

// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zigpcast::cli
