#include "prnuforge/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "prnuforge/errors.hpp"

namespace prnuforge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (!path.is_absolute()) path = base / path;
  return path.lexically_normal().string();
}

std::vector<std::string> path_list(const json& j, const fs::path& base,
                                   const std::string& sensor_id, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError("manifest sensor '" + sensor_id + "': missing '" + key + "' array");
  std::vector<std::string> out;
  for (const auto& entry : j[key]) {
    if (!entry.is_string())
      throw ValidationError("manifest sensor '" + sensor_id + "': non-string path in '" +
                            key + "'");
    out.push_back(resolve(base, entry.get<std::string>()));
  }
  return out;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest " + path + " is not valid JSON: " + e.what());
  }
  if (!root.is_object() || !root.contains("sensors") || !root["sensors"].is_array())
    throw ValidationError("manifest " + path + ": expected top-level 'sensors' array");

  const fs::path base = fs::path(path).parent_path();
  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  std::set<std::string> seen_paths;
  for (const auto& js : root["sensors"]) {
    if (!js.is_object() || !js.contains("sensor_id") || !js["sensor_id"].is_string())
      throw ValidationError("manifest " + path + ": sensor entry without string sensor_id");
    SensorManifest sensor;
    sensor.sensor_id = js["sensor_id"].get<std::string>();
    if (sensor.sensor_id.empty()) throw ValidationError("manifest: empty sensor_id");
    if (!seen_ids.insert(sensor.sensor_id).second)
      throw ValidationError("manifest: duplicate sensor_id '" + sensor.sensor_id + "'");
    if (!js.contains("native_size") || !js["native_size"].is_array() ||
        js["native_size"].size() != 2)
      throw ValidationError("manifest sensor '" + sensor.sensor_id +
                            "': native_size must be [height, width]");
    sensor.native_height = js["native_size"][0].get<std::size_t>();
    sensor.native_width = js["native_size"][1].get<std::size_t>();
    sensor.training_paths = path_list(js, base, sensor.sensor_id, "training");
    sensor.test_paths = path_list(js, base, sensor.sensor_id, "test");

    std::set<std::string> train_set(sensor.training_paths.begin(),
                                    sensor.training_paths.end());
    for (const auto& p : sensor.test_paths) {
      if (train_set.count(p))
        throw ValidationError("manifest sensor '" + sensor.sensor_id +
                              "': path in both training and test sets: " + p);
    }
    for (const auto& p : sensor.training_paths) {
      if (!seen_paths.insert(p).second)
        throw ValidationError("manifest: duplicate path " + p);
      if (!fs::exists(p)) throw ValidationError("manifest references missing file: " + p);
    }
    for (const auto& p : sensor.test_paths) {
      if (!seen_paths.insert(p).second)
        throw ValidationError("manifest: duplicate path " + p);
      if (!fs::exists(p)) throw ValidationError("manifest references missing file: " + p);
    }
    manifest.sensors.push_back(std::move(sensor));
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  json sensors = json::array();
  for (const auto& s : manifest.sensors) {
    sensors.push_back({{"sensor_id", s.sensor_id},
                       {"native_size", {s.native_height, s.native_width}},
                       {"training", s.training_paths},
                       {"test", s.test_paths}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path);
  out << json{{"sensors", sensors}}.dump(2) << "\n";
  if (!out) throw IoError("failed writing manifest " + path);
}

const SensorManifest& find_sensor(const DatasetManifest& manifest,
                                  const std::string& sensor_id) {
  for (const auto& s : manifest.sensors) {
    if (s.sensor_id == sensor_id) return s;
  }
  throw ValidationError("unknown sensor_id '" + sensor_id + "'");
}

}  // namespace prnuforge
