#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace prnuforge {

struct SensorManifest {
  std::string sensor_id;
  std::size_t native_height = 0;
  std::size_t native_width = 0;
  std::vector<std::string> training_paths;
  std::vector<std::string> test_paths;
};

struct DatasetManifest {
  std::vector<SensorManifest> sensors;
};

// Parse and validate a dataset manifest. Relative paths resolve against the
// manifest's directory. Rejects duplicate sensor ids, any path declared
// twice, overlapping training/test sets, and paths that do not exist.
DatasetManifest load_manifest(const std::string& path);

// Write a manifest; paths are stored as given.
void save_manifest(const DatasetManifest& manifest, const std::string& path);

const SensorManifest& find_sensor(const DatasetManifest& manifest, const std::string& sensor_id);

}  // namespace prnuforge
