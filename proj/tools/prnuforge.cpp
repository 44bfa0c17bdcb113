#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prnuforge/deident.hpp"
#include "prnuforge/denoise.hpp"
#include "prnuforge/errors.hpp"
#include "prnuforge/experiment.hpp"
#include "prnuforge/identify.hpp"
#include "prnuforge/image.hpp"
#include "prnuforge/manifest.hpp"
#include "prnuforge/prnu.hpp"
#include "prnuforge/report.hpp"
#include "prnuforge/synthetic.hpp"

namespace fs = std::filesystem;
using namespace prnuforge;

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Expand files-or-directories into a file list; directories contribute their
// matching entries in sorted order.
std::vector<std::string> expand_paths(const std::vector<std::string>& inputs,
                                      const std::vector<std::string>& extensions) {
  std::vector<std::string> out;
  for (const std::string& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = lowercase(entry.path().extension().string());
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end())
          found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(input);
    } else {
      throw IoError("no such file or directory: " + input);
    }
  }
  return out;
}

MaskMode parse_mask(const std::string& name) {
  if (name == "antidiag") return MaskMode::kAntiDiagonal;
  if (name == "rect") return MaskMode::kRectangle;
  throw ParamError("unknown mask mode: " + name + " (expected antidiag or rect)");
}

std::pair<std::string, std::string> parse_pair(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw ParamError("bad --pairs value '" + text + "' (expected source:target)");
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::ostream& pct(std::ostream& os, double v) {
  return os << std::fixed << std::setprecision(2) << 100.0 * v << "%";
}

struct CommonOptions {
  double noise_variance = kDefaultNoiseVariance;
  double enhance_threshold = kDefaultEnhanceThreshold;
  bool enhanced_test_residual = false;
  bool multiplicative = false;
  std::string mask = "antidiag";

  void attach(CLI::App* cmd, bool with_mask = true) {
    cmd->add_option("--noise-var", noise_variance, "Wiener noise variance for residuals")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", enhance_threshold, "Residual enhancement threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--enhanced-test-residual", enhanced_test_residual,
                  "Enhance test residuals before scoring");
    cmd->add_flag("--multiplicative", multiplicative,
                  "Correlate against image .* reference instead of the reference");
    if (with_mask)
      cmd->add_option("--mask", mask, "High-band mask: antidiag or rect")
          ->check(CLI::IsMember({"antidiag", "rect"}));
  }

  ExperimentOptions experiment() const {
    ExperimentOptions options;
    options.noise_variance = noise_variance;
    options.enhance_threshold = enhance_threshold;
    options.enhanced_test_residual = enhanced_test_residual;
    options.multiplicative_score = multiplicative;
    options.mask_mode = parse_mask(mask);
    return options;
  }
};

void run_extract_ref(const std::string& manifest_path, const std::string& scheme_text,
                     const std::vector<std::string>& sensors, const std::string& out_dir,
                     const CommonOptions& common) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const Scheme scheme = parse_scheme(scheme_text);
  BuildOptions options;
  options.noise_variance = common.noise_variance;
  options.enhance_threshold = common.enhance_threshold;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

  std::vector<const SensorManifest*> selected;
  if (sensors.empty()) {
    for (const SensorManifest& s : manifest.sensors) selected.push_back(&s);
  } else {
    for (const std::string& id : sensors) selected.push_back(&find_sensor(manifest, id));
  }
  for (const SensorManifest* sensor : selected) {
    const ReferencePattern ref = build_reference(*sensor, scheme, options);
    const std::string path =
        (fs::path(out_dir) / (sensor->sensor_id + "." + scheme_name(scheme) + ".ref")).string();
    save_reference(ref, path);
    std::cout << "wrote " << path << " (" << ref.values.rows() << "x" << ref.values.cols()
              << ", " << ref.training_count << " training images)\n";
  }
}

void run_attribute(const std::vector<std::string>& ref_inputs,
                   const std::string& manifest_path, const std::vector<std::string>& images,
                   const std::string& report_path, const std::string& csv_path,
                   const CommonOptions& common) {
  const std::vector<std::string> ref_paths = expand_paths(ref_inputs, {".ref"});
  if (ref_paths.empty()) throw IoError("no reference files found");
  std::vector<ReferencePattern> refs;
  refs.reserve(ref_paths.size());
  for (const std::string& path : ref_paths) refs.push_back(load_reference(path));

  struct Job {
    std::string path;
    std::string true_sensor;
  };
  std::vector<Job> jobs;
  for (const std::string& path : images) jobs.push_back({path, ""});
  if (!manifest_path.empty()) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    for (const SensorManifest& sensor : manifest.sensors)
      for (const std::string& path : sensor.test_paths) jobs.push_back({path, sensor.sensor_id});
  }
  if (jobs.empty()) throw ParamError("attribute: provide --manifest and/or --image");

  std::vector<AttributionRecord> records;
  std::vector<std::pair<AttributionResult, std::string>> labeled;
  for (const Job& job : jobs) {
    const GrayImage img = load_image(job.path);
    NoiseResidual residual = extract_residual(img, common.noise_variance);
    if (common.enhanced_test_residual)
      residual = enhance_residual(residual, common.enhance_threshold);
    const AttributionResult result =
        attribute(residual, refs, common.multiplicative ? &img : nullptr);
    AttributionRecord record;
    record.path = job.path;
    record.true_sensor = job.true_sensor;
    record.predicted_sensor = result.predicted_sensor;
    record.scores.assign(result.scores.begin(), result.scores.end());
    records.push_back(record);
    if (!job.true_sensor.empty()) labeled.emplace_back(result, job.true_sensor);
    std::cout << job.path << " -> " << result.predicted_sensor << " (ncc="
              << std::setprecision(6) << result.scores.at(result.predicted_sensor) << ")\n";
  }
  if (!labeled.empty()) {
    std::cout << "accuracy: ";
    pct(std::cout, accuracy(labeled)) << " on " << labeled.size() << " labeled images\n";
  }
  if (!report_path.empty()) write_attribution_json(records, report_path);
  if (!csv_path.empty()) write_attribution_csv(records, csv_path);
}

void run_anonymize_cmd(const std::string& in, const std::string& out, double eta,
                       const std::string& mask) {
  const GrayImage img = load_image(in);
  save_image(anonymize(img, eta, parse_mask(mask)), out);
  std::cout << "wrote " << out << "\n";
}

void run_spoof_cmd(const std::string& in, const std::string& out, double eta,
                   const std::vector<std::string>& candidate_inputs, const std::string& mask) {
  const std::vector<std::string> candidate_paths =
      expand_paths(candidate_inputs, {".pgm", ".png"});
  if (candidate_paths.empty()) throw IoError("no candidate images found");
  const GrayImage img = load_image(in);
  std::vector<GrayImage> candidates;
  candidates.reserve(candidate_paths.size());
  for (const std::string& path : candidate_paths) candidates.push_back(load_image(path));
  save_image(spoof_with_candidates(img, candidates, eta, parse_mask(mask)), out);
  std::cout << "wrote " << out << " (" << candidates.size() << " candidates)\n";
}

void run_simulate(const std::string& out_dir, const SimulationConfig& config) {
  const DatasetManifest manifest = write_synthetic_dataset(config, out_dir);
  std::size_t total = 0;
  for (const SensorManifest& sensor : manifest.sensors)
    total += sensor.training_paths.size() + sensor.test_paths.size();
  std::cout << "wrote " << total << " images for " << manifest.sensors.size()
            << " sensors under " << out_dir << "\n";
  std::cout << "manifest: " << (fs::path(out_dir) / "manifest.json").string() << "\n";
}

void run_evaluate_anon(const std::string& manifest_path,
                       const std::vector<std::string>& scheme_names,
                       std::vector<double> etas, const std::string& report_path,
                       const std::string& csv_path, const CommonOptions& common) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  std::vector<Scheme> schemes;
  for (const std::string& name : scheme_names) schemes.push_back(parse_scheme(name));
  if (etas.empty()) etas.push_back(kDefaultAnonEta);

  std::vector<AnonymizationReport> reports;
  for (double eta : etas) {
    const auto batch = run_anonymization_experiment(manifest, schemes, eta, common.experiment());
    reports.insert(reports.end(), batch.begin(), batch.end());
  }
  for (const AnonymizationReport& report : reports) {
    std::cout << "scheme=" << scheme_name(report.scheme) << " eta=" << report.eta
              << " average_change=";
    pct(std::cout, report.average_change)
        << " median_psnr=" << std::setprecision(2) << report.utility.median_psnr_db
        << "dB min_low_freq_ncc=" << std::setprecision(6) << report.utility.min_low_freq_ncc
        << "\n";
    for (const auto& [id, stats] : report.per_sensor) {
      std::cout << "  " << id << ": original=";
      pct(std::cout, stats.original_acc) << " after=";
      pct(std::cout, stats.after_acc) << " change=";
      pct(std::cout, stats.change) << "\n";
    }
  }
  if (!report_path.empty()) write_anon_reports_json(reports, report_path);
  if (!csv_path.empty()) write_anon_reports_csv(reports, csv_path);
}

void run_evaluate_spoof(const std::string& manifest_path,
                        const std::vector<std::string>& scheme_names,
                        std::vector<double> etas, const std::vector<std::string>& pair_texts,
                        const std::string& report_path, const std::string& csv_path,
                        const CommonOptions& common) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  std::vector<Scheme> schemes;
  for (const std::string& name : scheme_names) schemes.push_back(parse_scheme(name));
  if (etas.empty()) etas.push_back(kDefaultSpoofEta);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& text : pair_texts) pairs.push_back(parse_pair(text));
  if (pairs.empty()) pairs = all_ordered_pairs(manifest);

  std::vector<SpoofReport> reports;
  for (double eta : etas) {
    const auto batch = run_spoof_experiment(manifest, schemes, eta, pairs, common.experiment());
    reports.insert(reports.end(), batch.begin(), batch.end());
  }
  for (const SpoofReport& report : reports) {
    std::cout << "scheme=" << scheme_name(report.scheme) << " eta=" << report.eta
              << " average_ssr=";
    pct(std::cout, report.average_ssr) << "\n";
    for (const SpoofPairStat& stat : report.per_pair) {
      std::cout << "  " << stat.source << " -> " << stat.target << ": ssr=";
      pct(std::cout, stat.ssr) << "\n";
    }
  }
  if (!report_path.empty()) write_spoof_reports_json(reports, report_path);
  if (!csv_path.empty()) write_spoof_reports_csv(reports, csv_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prnuforge: PRNU fingerprint estimation, source attribution, and "
               "DCT-domain anonymization/spoofing"};
  app.require_subcommand(1);

  // extract-ref
  auto* extract_cmd = app.add_subcommand("extract-ref", "Build reference patterns from a manifest");
  std::string er_manifest, er_scheme, er_out_dir;
  std::vector<std::string> er_sensors;
  CommonOptions er_common;
  extract_cmd->add_option("--manifest", er_manifest, "Dataset manifest JSON")->required();
  extract_cmd->add_option("--scheme", er_scheme, "enhanced, mle, or phase")->required();
  extract_cmd->add_option("--sensor", er_sensors, "Restrict to these sensor ids");
  extract_cmd->add_option("--out-dir", er_out_dir, "Directory for .ref files")->required();
  extract_cmd->add_option("--noise-var", er_common.noise_variance, "Wiener noise variance")
      ->check(CLI::PositiveNumber);
  extract_cmd->add_option("--threshold", er_common.enhance_threshold, "Enhancement threshold")
      ->check(CLI::PositiveNumber);
  extract_cmd->callback(
      [&] { run_extract_ref(er_manifest, er_scheme, er_sensors, er_out_dir, er_common); });

  // attribute
  auto* attr_cmd = app.add_subcommand("attribute", "Attribute images to sensors via NCC");
  std::vector<std::string> at_refs, at_images;
  std::string at_manifest, at_report, at_csv;
  CommonOptions at_common;
  attr_cmd->add_option("--refs", at_refs, ".ref files or directories of them")->required();
  attr_cmd->add_option("--manifest", at_manifest, "Score every test image in this manifest");
  attr_cmd->add_option("--image", at_images, "Individual images to attribute");
  attr_cmd->add_option("--report", at_report, "Write JSON report here");
  attr_cmd->add_option("--csv", at_csv, "Write CSV report here");
  at_common.attach(attr_cmd, /*with_mask=*/false);
  attr_cmd->callback(
      [&] { run_attribute(at_refs, at_manifest, at_images, at_report, at_csv, at_common); });

  // anonymize
  auto* anon_cmd = app.add_subcommand("anonymize", "Suppress the sensor fingerprint");
  std::string an_in, an_out, an_mask = "antidiag";
  double an_eta = kDefaultAnonEta;
  anon_cmd->add_option("--in", an_in, "Input image")->required();
  anon_cmd->add_option("--out", an_out, "Output image")->required();
  anon_cmd->add_option("--eta", an_eta, "Low/high split fraction")->check(CLI::Range(0.0, 1.0));
  anon_cmd->add_option("--mask", an_mask, "antidiag or rect")
      ->check(CLI::IsMember({"antidiag", "rect"}));
  anon_cmd->callback([&] { run_anonymize_cmd(an_in, an_out, an_eta, an_mask); });

  // spoof
  auto* spoof_cmd = app.add_subcommand("spoof", "Replace the high band with a target's");
  std::string sp_in, sp_out, sp_mask = "antidiag";
  double sp_eta = kDefaultSpoofEta;
  std::vector<std::string> sp_candidates;
  spoof_cmd->add_option("--in", sp_in, "Input image")->required();
  spoof_cmd->add_option("--out", sp_out, "Output image")->required();
  spoof_cmd->add_option("--eta", sp_eta, "Low/high split fraction")->check(CLI::Range(0.0, 1.0));
  spoof_cmd->add_option("--candidates", sp_candidates, "Target images or directories")
      ->required();
  spoof_cmd->add_option("--mask", sp_mask, "antidiag or rect")
      ->check(CLI::IsMember({"antidiag", "rect"}));
  spoof_cmd->callback([&] { run_spoof_cmd(sp_in, sp_out, sp_eta, sp_candidates, sp_mask); });

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Render a synthetic multi-sensor dataset");
  std::string sim_out_dir;
  SimulationConfig sim_config;
  sim_cmd->add_option("--out-dir", sim_out_dir, "Output directory")->required();
  sim_cmd->add_option("--sensors", sim_config.sensor_count, "Number of sensors")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--train", sim_config.train_per_sensor, "Training images per sensor")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--test", sim_config.test_per_sensor, "Test images per sensor");
  sim_cmd->add_option("--height", sim_config.height, "Image height")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--width", sim_config.width, "Image width")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--strength", sim_config.strength, "Fingerprint strength");
  sim_cmd->add_option("--read-noise", sim_config.read_noise_std, "Read noise std");
  sim_cmd->add_option("--band-eta", sim_config.fingerprint_band_eta,
                      "Fingerprint DCT band split")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--seed", sim_config.seed, "RNG seed");
  sim_cmd->callback([&] { run_simulate(sim_out_dir, sim_config); });

  // evaluate-anon
  auto* eva_cmd = app.add_subcommand("evaluate-anon", "Run the anonymization protocol");
  std::string eva_manifest, eva_report, eva_csv;
  std::vector<std::string> eva_schemes;
  std::vector<double> eva_etas;
  std::uint64_t eva_seed = 0;
  CommonOptions eva_common;
  eva_cmd->add_option("--manifest", eva_manifest, "Dataset manifest JSON")->required();
  eva_cmd->add_option("--scheme", eva_schemes, "enhanced, mle, or phase (repeatable)")
      ->required();
  eva_cmd->add_option("--eta", eva_etas, "Split fractions to sweep (default 0.9)")
      ->check(CLI::Range(0.0, 1.0));
  eva_cmd->add_option("--report", eva_report, "Write JSON report here");
  eva_cmd->add_option("--csv", eva_csv, "Write CSV report here");
  eva_cmd->add_option("--seed", eva_seed,
                      "Accepted for interface symmetry; the protocol is deterministic");
  eva_common.attach(eva_cmd);
  eva_cmd->callback([&] {
    run_evaluate_anon(eva_manifest, eva_schemes, eva_etas, eva_report, eva_csv, eva_common);
  });

  // evaluate-spoof
  auto* evs_cmd = app.add_subcommand("evaluate-spoof", "Run the spoofing protocol");
  std::string evs_manifest, evs_report, evs_csv;
  std::vector<std::string> evs_schemes, evs_pairs;
  std::vector<double> evs_etas;
  std::uint64_t evs_seed = 0;
  CommonOptions evs_common;
  evs_cmd->add_option("--manifest", evs_manifest, "Dataset manifest JSON")->required();
  evs_cmd->add_option("--scheme", evs_schemes, "enhanced, mle, or phase (repeatable)")
      ->required();
  evs_cmd->add_option("--eta", evs_etas, "Split fractions to sweep (default 0.7)")
      ->check(CLI::Range(0.0, 1.0));
  evs_cmd->add_option("--pairs", evs_pairs,
                      "source:target pairs (default: all ordered pairs)");
  evs_cmd->add_option("--report", evs_report, "Write JSON report here");
  evs_cmd->add_option("--csv", evs_csv, "Write CSV report here");
  evs_cmd->add_option("--seed", evs_seed,
                      "Accepted for interface symmetry; the protocol is deterministic");
  evs_common.attach(evs_cmd);
  evs_cmd->callback([&] {
    run_evaluate_spoof(evs_manifest, evs_schemes, evs_etas, evs_pairs, evs_report, evs_csv,
                       evs_common);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
