#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "polarmwd/errors.hpp"

namespace polarmwd::cli {

namespace {
constexpr const char* kToolName = "polarmwd";
constexpr const char* kToolVersion = "1.0.0";
}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path path = output;
  path += ".manifest.json";
  return path;
}

nlohmann::ordered_json to_json(const RunManifest& manifest) {
  nlohmann::ordered_json json;
  json["tool"] = kToolName;
  json["version"] = kToolVersion;
  json["command"] = manifest.command;
  json["args"] = manifest.args;
  json["parameters"] = manifest.parameters;
  json["output"] = {{"path", manifest.output.string()}, {"fnv1a64", manifest.output_digest}};
  json["timestamp"] = manifest.timestamp;
  return json;
}

RunManifest manifest_from_json(const nlohmann::json& json) {
  try {
    RunManifest manifest;
    manifest.command = json.at("command").get<std::string>();
    manifest.args = json.at("args").get<std::vector<std::string>>();
    manifest.parameters = json.value("parameters", nlohmann::ordered_json::object());
    manifest.output = json.at("output").at("path").get<std::string>();
    manifest.output_digest = json.at("output").at("fnv1a64").get<std::string>();
    manifest.timestamp = json.value("timestamp", "");
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
}

void write_manifest(const RunManifest& manifest) {
  const auto path = manifest_path_for(manifest.output);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw IoError("write failed for manifest " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path.string() + " is not JSON: " + e.what());
  }
  return manifest_from_json(json);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace polarmwd::cli
