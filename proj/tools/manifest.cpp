#include "manifest.hpp"

#include <cstdio>

#include <json.hpp>

#include "sessbot/io.hpp"

namespace sessbot::cli {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const std::vector<std::string>& args, std::string_view extra) {
  std::uint64_t h = fnv1a64({});
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--quiet" || a == "-q") continue;
    if (a.rfind("--threads=", 0) == 0) continue;
    if (a == "--threads" || a == "-j") {
      ++i;
      continue;
    }
    h = fnv1a64(a, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  h = fnv1a64(extra, h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_json(const RunManifest& m) {
  ordered_json doc = {
      {"subcommand", m.subcommand},
      {"args", m.args},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"inputs", m.inputs},
      {"outputs", m.outputs},
      {"duration_seconds", m.duration_seconds},
      {"version", m.version},
  };
  return doc.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view json) {
  const auto doc = ordered_json::parse(json);
  RunManifest m;
  m.subcommand = doc.at("subcommand").get<std::string>();
  m.args = doc.at("args").get<std::vector<std::string>>();
  m.config_hash = doc.at("config_hash").get<std::string>();
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.inputs = doc.at("inputs").get<std::vector<std::string>>();
  m.outputs = doc.at("outputs").get<std::vector<std::string>>();
  m.duration_seconds = doc.at("duration_seconds").get<double>();
  m.version = doc.at("version").get<std::string>();
  return m;
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

void write_manifests(const RunManifest& manifest) {
  const std::string body = to_json(manifest);
  for (const auto& out : manifest.outputs) io::write_file_atomic(manifest_path(out), body);
}

}  // namespace sessbot::cli
