#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polarmwd::cli {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Everything needed to re-derive one output file. The timestamp is recorded
// but never part of the digest.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // the command line, minus --out
  nlohmann::ordered_json parameters;
  std::filesystem::path output;
  std::string output_digest;
  std::string timestamp;
};

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

nlohmann::ordered_json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& json);

void write_manifest(const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace polarmwd::cli
