#include "prnuforge/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prnuforge/errors.hpp"

namespace prnuforge {
namespace {

using nlohmann::ordered_json;

// JSON has no literal for infinities; report them as strings.
ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// Quote a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void write_json_doc(const ordered_json& doc, const std::string& path) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed to write " + path);
}

ordered_json anon_report_json(const AnonymizationReport& report) {
  ordered_json sensors = ordered_json::object();
  for (const auto& [id, stats] : report.per_sensor) {
    sensors[id] = {{"original_acc", stats.original_acc},
                   {"after_acc", stats.after_acc},
                   {"after_acc_unquantized", stats.after_acc_unquantized},
                   {"change", stats.change}};
  }
  return ordered_json{
      {"scheme", scheme_name(report.scheme)},
      {"eta", report.eta},
      {"per_sensor", sensors},
      {"average_change", report.average_change},
      {"utility",
       {{"median_psnr_db", number_or_string(report.utility.median_psnr_db)},
        {"median_low_freq_ncc", report.utility.median_low_freq_ncc},
        {"min_low_freq_ncc", report.utility.min_low_freq_ncc}}}};
}

ordered_json spoof_report_json(const SpoofReport& report) {
  ordered_json pairs = ordered_json::array();
  for (const SpoofPairStat& stat : report.per_pair) {
    pairs.push_back({{"source", stat.source},
                     {"target", stat.target},
                     {"ssr", stat.ssr},
                     {"ssr_unquantized", stat.ssr_unquantized}});
  }
  return ordered_json{{"scheme", scheme_name(report.scheme)},
                      {"eta", report.eta},
                      {"per_pair", pairs},
                      {"average_ssr", report.average_ssr}};
}

}  // namespace

void write_anon_reports_json(const std::vector<AnonymizationReport>& reports,
                             const std::string& path) {
  if (reports.empty()) throw ParamError("write_anon_reports_json: no reports");
  if (reports.size() == 1) {
    write_json_doc(anon_report_json(reports[0]), path);
    return;
  }
  ordered_json arr = ordered_json::array();
  for (const AnonymizationReport& report : reports) arr.push_back(anon_report_json(report));
  write_json_doc(arr, path);
}

void write_anon_reports_csv(const std::vector<AnonymizationReport>& reports,
                            const std::string& path) {
  if (reports.empty()) throw ParamError("write_anon_reports_csv: no reports");
  std::ofstream out = open_out(path);
  out << "eta,scheme,sensor_id,original_acc,after_acc,after_acc_unquantized,change\n";
  for (const AnonymizationReport& report : reports) {
    for (const auto& [id, stats] : report.per_sensor) {
      out << csv_number(report.eta) << "," << scheme_name(report.scheme) << ","
          << csv_field(id) << "," << csv_number(stats.original_acc) << ","
          << csv_number(stats.after_acc) << ","
          << csv_number(stats.after_acc_unquantized) << "," << csv_number(stats.change)
          << "\n";
    }
  }
  if (!out) throw IoError("failed to write " + path);
}

void write_spoof_reports_json(const std::vector<SpoofReport>& reports,
                              const std::string& path) {
  if (reports.empty()) throw ParamError("write_spoof_reports_json: no reports");
  if (reports.size() == 1) {
    write_json_doc(spoof_report_json(reports[0]), path);
    return;
  }
  ordered_json arr = ordered_json::array();
  for (const SpoofReport& report : reports) arr.push_back(spoof_report_json(report));
  write_json_doc(arr, path);
}

void write_spoof_reports_csv(const std::vector<SpoofReport>& reports,
                             const std::string& path) {
  if (reports.empty()) throw ParamError("write_spoof_reports_csv: no reports");
  std::ofstream out = open_out(path);
  out << "eta,scheme,source,target,ssr,ssr_unquantized\n";
  for (const SpoofReport& report : reports) {
    for (const SpoofPairStat& stat : report.per_pair) {
      out << csv_number(report.eta) << "," << scheme_name(report.scheme) << ","
          << csv_field(stat.source) << "," << csv_field(stat.target) << ","
          << csv_number(stat.ssr) << "," << csv_number(stat.ssr_unquantized) << "\n";
    }
  }
  if (!out) throw IoError("failed to write " + path);
}

void write_attribution_json(const std::vector<AttributionRecord>& records,
                            const std::string& path) {
  ordered_json images = ordered_json::array();
  for (const AttributionRecord& record : records) {
    ordered_json entry;
    entry["path"] = record.path;
    if (!record.true_sensor.empty()) entry["true_sensor"] = record.true_sensor;
    entry["predicted_sensor"] = record.predicted_sensor;
    ordered_json scores = ordered_json::object();
    for (const auto& [id, score] : record.scores) scores[id] = score;
    entry["scores"] = scores;
    images.push_back(std::move(entry));
  }
  write_json_doc(ordered_json{{"images", images}}, path);
}

void write_attribution_csv(const std::vector<AttributionRecord>& records,
                           const std::string& path) {
  std::set<std::string> sensor_ids;
  for (const AttributionRecord& record : records)
    for (const auto& [id, score] : record.scores) sensor_ids.insert(id);

  std::ofstream out = open_out(path);
  out << "path,true_sensor,predicted_sensor";
  for (const std::string& id : sensor_ids) out << "," << csv_field("score_" + id);
  out << "\n";
  for (const AttributionRecord& record : records) {
    out << csv_field(record.path) << "," << csv_field(record.true_sensor) << ","
        << csv_field(record.predicted_sensor);
    for (const std::string& id : sensor_ids) {
      out << ",";
      for (const auto& [rid, score] : record.scores) {
        if (rid == id) {
          out << csv_number(score);
          break;
        }
      }
    }
    out << "\n";
  }
  if (!out) throw IoError("failed to write " + path);
}

}  // namespace prnuforge
