#pragma once

#include <string>
#include <vector>

#include "prnuforge/experiment.hpp"

namespace prnuforge {

// A single report serializes as one JSON object; a sweep as an array.
void write_anon_reports_json(const std::vector<AnonymizationReport>& reports,
                             const std::string& path);
void write_anon_reports_csv(const std::vector<AnonymizationReport>& reports,
                            const std::string& path);

void write_spoof_reports_json(const std::vector<SpoofReport>& reports,
                              const std::string& path);
void write_spoof_reports_csv(const std::vector<SpoofReport>& reports,
                             const std::string& path);

struct AttributionRecord {
  std::string path;
  std::string true_sensor;  // empty when unknown
  std::string predicted_sensor;
  std::vector<std::pair<std::string, double>> scores;  // sensor_id -> ncc, sorted by id
};

void write_attribution_json(const std::vector<AttributionRecord>& records,
                            const std::string& path);
void write_attribution_csv(const std::vector<AttributionRecord>& records,
                           const std::string& path);

}  // namespace prnuforge
