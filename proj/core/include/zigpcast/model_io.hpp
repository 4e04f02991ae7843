#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zigpcast/match_forecast.hpp"
#include "zigpcast/regression.hpp"

namespace zigpcast {

inline constexpr const char* kModelFormat = "zigpcast-team-models";
inline constexpr int kModelFormatVersion = 1;

// Fitted team models plus free-form provenance (seed, window, tool version).
struct ModelFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  TeamModelSet models;
};

// JSON serialization; doubles are written with round-trip precision so
// read(write(x)) reproduces every coefficient bit for bit.
std::string serialize_models(const ModelFile& file);
ModelFile deserialize_models(std::string_view text, const std::string& source = "<models>");

void write_models(const std::filesystem::path& path, const ModelFile& file);
ModelFile read_models(const std::filesystem::path& path);

}  // namespace zigpcast
