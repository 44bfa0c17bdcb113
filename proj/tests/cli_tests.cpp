#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracle_helpers.hpp"
#include "prnuforge/deident.hpp"
#include "prnuforge/image.hpp"
#include "prnuforge/manifest.hpp"
#include "prnuforge/matrix.hpp"
#include "prnuforge/prnu.hpp"
#include "prnuforge/synthetic.hpp"

using namespace prnuforge;
using nlohmann::json;
using testutil::TempDir;
using testutil::TestRng;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PRNUFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

int run_capture(const std::string& args, const std::string& out_file) {
  const std::string cmd =
      std::string(PRNUFORGE_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// A deterministic 16x16 integer-valued image.
GrayImage sample_image(std::uint64_t seed) {
  TestRng rng(seed);
  GrayImage img(16, 16);
  for (double& v : img.values()) v = double(rng.index(256));
  return img;
}

std::string simulate_args(const std::string& out_dir) {
  return "simulate --out-dir " + out_dir +
         " --sensors 2 --train 2 --test 2 --height 16 --width 16";
}

}  // namespace

TEST_CASE("cli: argument errors and help") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("--help") == 0);
  CHECK(run("anonymize --help") == 0);
}

TEST_CASE("cli: anonymize happy path matches the library") {
  TempDir dir("cli_anon");
  const GrayImage img = sample_image(1);
  save_image(img, dir.file("a.pgm"));
  CHECK(run("anonymize --in " + dir.file("a.pgm") + " --out " + dir.file("b.pgm") +
            " --eta 0.8") == 0);
  const GrayImage out = load_image(dir.file("b.pgm"));
  CHECK(max_abs_diff(out, quantize(anonymize(img, 0.8))) == 0.0);
}

TEST_CASE("cli: anonymize failure modes") {
  TempDir dir("cli_anon_bad");
  save_image(sample_image(2), dir.file("a.pgm"));
  CHECK(run("anonymize --in " + dir.file("ghost.pgm") + " --out " + dir.file("b.pgm")) == 2);
  CHECK(run("anonymize --in " + dir.file("a.pgm") + " --out " + dir.file("b.pgm") +
            " --eta 1.5") == 1);
  CHECK(run("anonymize --in " + dir.file("a.pgm") + " --out " + dir.file("b.xyz")) == 1);
}

TEST_CASE("cli: spoofing an image with itself reproduces it exactly") {
  TempDir dir("cli_spoof");
  const GrayImage img = sample_image(3);
  save_image(img, dir.file("a.pgm"));
  CHECK(run("spoof --in " + dir.file("a.pgm") + " --out " + dir.file("s.pgm") +
            " --candidates " + dir.file("a.pgm")) == 0);
  // Integer pixels + a sub-1e-6 reconstruction error survive requantization.
  CHECK(max_abs_diff(load_image(dir.file("s.pgm")), img) == 0.0);
}

TEST_CASE("cli: spoof with an empty candidate directory is an I/O error") {
  TempDir dir("cli_spoof_empty");
  std::filesystem::create_directories(dir.file("cands"));
  save_image(sample_image(4), dir.file("a.pgm"));
  CHECK(run("spoof --in " + dir.file("a.pgm") + " --out " + dir.file("s.pgm") +
            " --candidates " + dir.file("cands")) == 2);
}

TEST_CASE("cli: simulate renders a loadable dataset deterministically") {
  TempDir dir("cli_sim");
  CHECK(run(simulate_args(dir.file("d1"))) == 0);
  const DatasetManifest manifest = load_manifest(dir.file("d1") + "/manifest.json");
  REQUIRE(manifest.sensors.size() == 2);
  CHECK(manifest.sensors[0].training_paths.size() == 2);
  CHECK(manifest.sensors[0].test_paths.size() == 2);

  CHECK(run(simulate_args(dir.file("d2"))) == 0);
  CHECK(slurp(dir.file("d1") + "/manifest.json") == slurp(dir.file("d2") + "/manifest.json"));
  const std::string name =
      std::filesystem::path(manifest.sensors[0].training_paths[0]).filename().string();
  CHECK(slurp(dir.file("d1") + "/" + name) == slurp(dir.file("d2") + "/" + name));
}

TEST_CASE("cli: extract-ref writes loadable reference files") {
  TempDir dir("cli_ref");
  REQUIRE(run(simulate_args(dir.file("data"))) == 0);
  const std::string manifest_arg = " --manifest " + dir.file("data") + "/manifest.json";

  CHECK(run("extract-ref" + manifest_arg + " --scheme mle --out-dir " + dir.file("refs")) == 0);
  for (const char* id : {"cam0", "cam1"}) {
    const ReferencePattern ref =
        load_reference(dir.file("refs") + "/" + id + ".mle.ref");
    CHECK(ref.sensor_id == id);
    CHECK(ref.scheme == Scheme::kMle);
    CHECK(ref.training_count == 2);
    CHECK(ref.values.rows() == 16);
    CHECK(ref.values.cols() == 16);
  }

  // Selecting one sensor writes only that file.
  CHECK(run("extract-ref" + manifest_arg + " --scheme enhanced --sensor cam1 --out-dir " +
            dir.file("solo")) == 0);
  CHECK(std::filesystem::exists(dir.file("solo") + "/cam1.enhanced.ref"));
  CHECK(!std::filesystem::exists(dir.file("solo") + "/cam0.enhanced.ref"));

  CHECK(run("extract-ref" + manifest_arg + " --scheme fourier --out-dir " + dir.file("x")) == 1);
  CHECK(run("extract-ref" + manifest_arg + " --scheme mle --sensor nope --out-dir " +
            dir.file("x")) == 1);
  CHECK(run("extract-ref --manifest " + dir.file("ghost.json") +
            " --scheme mle --out-dir " + dir.file("x")) == 2);
}

TEST_CASE("cli: attribute reports predictions over a manifest") {
  TempDir dir("cli_attr");
  REQUIRE(run(simulate_args(dir.file("data"))) == 0);
  const std::string manifest_path = dir.file("data") + "/manifest.json";
  REQUIRE(run("extract-ref --manifest " + manifest_path + " --scheme enhanced --out-dir " +
              dir.file("refs")) == 0);

  const int rc = run_capture("attribute --refs " + dir.file("refs") + " --manifest " +
                                 manifest_path + " --report " + dir.file("r.json") +
                                 " --csv " + dir.file("r.csv"),
                             dir.file("stdout.txt"));
  CHECK(rc == 0);
  const std::string stdout_text = slurp(dir.file("stdout.txt"));
  CHECK(stdout_text.find(" -> ") != std::string::npos);
  CHECK(stdout_text.find("accuracy") != std::string::npos);

  const json report = json::parse(slurp(dir.file("r.json")));
  REQUIRE(report.contains("images"));
  REQUIRE(report["images"].size() == 4);  // 2 sensors x 2 test images
  for (const auto& entry : report["images"]) {
    CHECK(entry.contains("path"));
    CHECK(entry.contains("true_sensor"));
    CHECK(entry.contains("predicted_sensor"));
    REQUIRE(entry.contains("scores"));
    CHECK(entry["scores"].size() == 2);
  }
  CHECK(first_line(slurp(dir.file("r.csv"))) ==
        "path,true_sensor,predicted_sensor,score_cam0,score_cam1");

  // Unlabeled single images omit the truth field.
  const GrayImage img = sample_image(5);
  save_image(img, dir.file("probe.pgm"));
  CHECK(run("attribute --refs " + dir.file("refs") + " --image " + dir.file("probe.pgm") +
            " --report " + dir.file("probe.json")) == 0);
  const json probe = json::parse(slurp(dir.file("probe.json")));
  REQUIRE(probe["images"].size() == 1);
  CHECK(!probe["images"][0].contains("true_sensor"));

  // A directory with no reference files is an I/O error.
  std::filesystem::create_directories(dir.file("empty"));
  CHECK(run("attribute --refs " + dir.file("empty") + " --manifest " + manifest_path) == 2);
  // No images at all is a usage error.
  CHECK(run("attribute --refs " + dir.file("refs")) == 1);
}

TEST_CASE("cli: evaluate-anon emits json and csv reports") {
  TempDir dir("cli_eanon");
  REQUIRE(run(simulate_args(dir.file("data"))) == 0);
  const std::string manifest_arg = " --manifest " + dir.file("data") + "/manifest.json";

  CHECK(run("evaluate-anon" + manifest_arg + " --scheme enhanced --eta 0.8 --report " +
            dir.file("one.json") + " --csv " + dir.file("one.csv")) == 0);
  const json one = json::parse(slurp(dir.file("one.json")));
  REQUIRE(one.is_object());
  CHECK(one["scheme"] == "enhanced");
  CHECK(one["eta"] == 0.8);
  REQUIRE(one["per_sensor"].size() == 2);
  for (const auto& [id, stats] : one["per_sensor"].items()) {
    CHECK((id == "cam0" || id == "cam1"));
    CHECK(stats.contains("original_acc"));
    CHECK(stats.contains("after_acc"));
    CHECK(stats.contains("after_acc_unquantized"));
    CHECK(stats.contains("change"));
  }
  CHECK(one.contains("average_change"));
  CHECK(one["utility"].contains("median_psnr_db"));
  CHECK(first_line(slurp(dir.file("one.csv"))) ==
        "eta,scheme,sensor_id,original_acc,after_acc,after_acc_unquantized,change");

  CHECK(run("evaluate-anon" + manifest_arg + " --scheme enhanced --scheme mle --report " +
            dir.file("two.json")) == 0);
  const json two = json::parse(slurp(dir.file("two.json")));
  REQUIRE(two.is_array());
  REQUIRE(two.size() == 2);
  CHECK(two[0]["scheme"] == "enhanced");
  CHECK(two[1]["scheme"] == "mle");

  CHECK(run("evaluate-anon" + manifest_arg + " --scheme phase --eta 2.0") == 1);
}

TEST_CASE("cli: evaluate-spoof covers default and explicit pairs") {
  TempDir dir("cli_espoof");
  REQUIRE(run(simulate_args(dir.file("data"))) == 0);
  const std::string manifest_arg = " --manifest " + dir.file("data") + "/manifest.json";

  CHECK(run("evaluate-spoof" + manifest_arg + " --scheme enhanced --report " +
            dir.file("all.json")) == 0);
  const json all = json::parse(slurp(dir.file("all.json")));
  REQUIRE(all.is_object());
  CHECK(all["eta"] == 0.7);
  REQUIRE(all["per_pair"].size() == 2);  // both ordered pairs of two sensors
  CHECK(all.contains("average_ssr"));

  CHECK(run("evaluate-spoof" + manifest_arg + " --scheme enhanced --pairs cam0:cam1 --report " +
            dir.file("one.json") + " --csv " + dir.file("one.csv")) == 0);
  const json one = json::parse(slurp(dir.file("one.json")));
  REQUIRE(one["per_pair"].size() == 1);
  CHECK(one["per_pair"][0]["source"] == "cam0");
  CHECK(one["per_pair"][0]["target"] == "cam1");
  CHECK(first_line(slurp(dir.file("one.csv"))) == "eta,scheme,source,target,ssr,ssr_unquantized");

  CHECK(run("evaluate-spoof" + manifest_arg + " --scheme enhanced --pairs cam0cam1") == 1);
  CHECK(run("evaluate-spoof" + manifest_arg + " --scheme enhanced --pairs cam0:nope") == 1);
}

TEST_CASE("cli: manifest error handling") {
  TempDir dir("cli_manifest");
  CHECK(run("evaluate-anon --manifest " + dir.file("ghost.json") + " --scheme enhanced") == 2);
  testutil::write_text(dir.file("broken.json"), "{not json");
  CHECK(run("evaluate-anon --manifest " + dir.file("broken.json") + " --scheme enhanced") == 1);
}
