#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "expanderlab/builtins.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/harness.hpp"

using namespace expanderlab;

namespace {

const std::string kData = EXPANDERLAB_TEST_DATA;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    parse_generators_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

size_t data_lines(const std::string& csv) {
  size_t n = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) n += !line.empty() && line[0] != '#';
  return n;
}

std::string summary_value(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.summary)
    if (k == key) return v;
  return "";
}

}  // namespace

TEST_CASE("parse_generators") {
  const auto lub = parse_generators(kData + "/lubotzky3.gens");
  CHECK(lub.dim == 2);
  CHECK(lub.generators.size() == 4);
  CHECK(lub.primes.empty());
  CHECK(lub.generators == lubotzky3());

  const auto third = parse_generators(kData + "/third.gens");
  CHECK(third.generators.size() == 2);
  CHECK(third.generators[0](0, 1) == Rational(1, 3));
  CHECK(parse_generators(kData + "/third.gens", true).generators.size() == 4);
  CHECK(parse_generators(kData + "/lubotzky3.gens", true).generators.size() == 4);

  CHECK(code_of([] { parse_generators_text("dim 2\nprimes\n1 1/3 0 1\n"); }) ==
        ErrorCode::DenominatorOutsideS);
  CHECK(code_of([] { parse_generators_text("dim 2\nprimes\n1 2 3\n"); }) == ErrorCode::ParseError);
  CHECK(message_of("dim 2\nprimes\n\n1 0 0 1\n1 x 0 1\n").find("line 5") != std::string::npos);
  CHECK(message_of("dim 2\nprimes 4\n").find("line 2") != std::string::npos);
  CHECK(code_of([] { parse_generators_text("primes\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_generators_text("dim 2\nprimes\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_generators_text("dim 2\nprimes\n1 1 1 1\n"); }) == ErrorCode::SingularMatrix);
  CHECK(code_of([] { parse_generators(kData + "/missing.gens"); }) == ErrorCode::IoError);
}

TEST_CASE("report rendering") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_cell(true) == "true");
  CHECK(format_cell(Cell{}) == "");

  Report empty{"walk", {{"q", "5"}}, {}, {"l", "l2_norm"}, {}};
  const auto csv = render_csv(empty);
  CHECK(csv.find("# expanderlab ") == 0);
  CHECK(csv.find("# config q=5\n") != std::string::npos);
  CHECK(csv.substr(csv.size() - 10) == "l,l2_norm\n");
  CHECK(data_lines(csv) == 1);

  Report r{"x", {}, {{"k", "v"}}, {"name", "value"}, {{std::string("a,b"), 0.5}, {std::string("c"), Cell{}}}};
  const auto text = render_csv(r);
  CHECK(text.find("\"a,b\",0.5\n") != std::string::npos);
  CHECK(text.find("c,\n") != std::string::npos);
  const auto j = nlohmann::json::parse(render_json(r));
  CHECK(j["rows"][0]["name"] == "a,b");
  CHECK(j["rows"][0]["value"] == 0.5);
  CHECK(j["rows"][1]["value"].is_null());
  CHECK(j["summary"]["k"] == "v");

  CHECK(code_of([&] { emit_report(r, ReportFormat::Csv, "/nonexistent-dir/x.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("quotient experiment") {
  ExperimentConfig cfg;
  cfg.command = "quotient";
  cfg.gens_path = kData + "/lubotzky3.gens";
  cfg.q = 35;
  const auto res = run_experiment(cfg);
  CHECK(res.exit_code == kExitOk);
  REQUIRE(res.report.rows.size() == 3);
  CHECK(std::get<uint64_t>(res.report.rows[0][2]) == 120);
  CHECK(std::get<uint64_t>(res.report.rows[1][2]) == 336);
  CHECK(std::get<uint64_t>(res.report.rows[2][2]) == 40320);
  CHECK(summary_value(res.report, "bijective") == "true");
}

TEST_CASE("spectrum experiment") {
  ExperimentConfig cfg;
  cfg.command = "spectrum";
  cfg.gens_path = kData + "/lubotzky3.gens";
  cfg.q = 5;
  const auto res = run_experiment(cfg);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report.rows.size() == 120);
  CHECK(std::stod(summary_value(res.report, "lambda2")) < 1.0);
  uint64_t total = 0;
  for (const auto& row : res.report.rows) total += std::get<uint64_t>(row[2]) > 0;
  CHECK(total == 120);

  // The unipotent control needs inverses from --symmetrize.
  cfg.gens_path = kData + "/unipotent.gens";
  cfg.symmetrize = true;
  cfg.q = 53;
  const auto control = run_experiment(cfg);
  CHECK(std::abs(std::stod(summary_value(control.report, "lambda2")) - std::cos(2 * M_PI / 53)) < 1e-9);
}

TEST_CASE("determinism of reports") {
  ExperimentConfig cfg;
  cfg.command = "growth";
  cfg.q = 7;
  cfg.samples = 5;
  cfg.set_size = 20;
  cfg.seed = 42;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "expanderlab_det_a.csv").string();
  const auto b = (dir / "expanderlab_det_b.csv").string();
  emit_report(run_experiment(cfg).report, ReportFormat::Csv, a);
  emit_report(run_experiment(cfg).report, ReportFormat::Csv, b);
  CHECK(slurp(a) == slurp(b));
  CHECK(data_lines(slurp(a)) == 6);
  cfg.seed = 43;
  emit_report(run_experiment(cfg).report, ReportFormat::Csv, b);
  CHECK(slurp(a) != slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("walk, escape, freeness and kesten experiments") {
  ExperimentConfig cfg;
  cfg.command = "walk";
  cfg.q = 5;
  cfg.l_max = 6;
  cfg.subgroup = "borel";
  auto w = run_experiment(cfg);
  CHECK(w.exit_code == kExitOk);
  CHECK(w.report.rows.size() == 6);
  cfg.exact = true;
  w = run_experiment(cfg);
  CHECK(w.report.rows.size() == 6);
  CHECK(std::get<std::string>(w.report.rows[0][1]) == "1/4");

  cfg.command = "escape";
  cfg.exact = false;
  cfg.q = 11;
  cfg.l_max = 30;
  const auto e = run_experiment(cfg);
  CHECK(summary_value(e.report, "index") == "12");

  cfg.command = "freeness";
  cfg.l_max = 6;
  CHECK(std::get<bool>(run_experiment(cfg).report.rows[0][0]));
  cfg.builtin = "sl2-elementary";
  const auto nf = run_experiment(cfg);
  CHECK_FALSE(std::get<bool>(nf.report.rows[0][0]));

  cfg.command = "kesten";
  cfg.l_max = 10;
  const auto k = run_experiment(cfg);
  CHECK(k.exit_code == kExitOk);
  CHECK(k.report.rows.size() == 10);
  CHECK(summary_value(k.report, "partition_identity") == "exact");

  cfg.command = "nope";
  CHECK(code_of([&] { run_experiment(cfg); }) == ErrorCode::InvalidArgument);
  cfg.command = "walk";
  cfg.subgroup = "parabolic";
  CHECK(code_of([&] { run_experiment(cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("structural suite at p = 5") {
  const auto checks = run_structural_suite(5);
  CHECK(checks.size() == 8);
  for (const auto& c : checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  CHECK(code_of([] { run_structural_suite(4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("size cap from the environment") {
  ::setenv("EXPANDERLAB_CAP_ELEMS", "100", 1);
  CHECK(size_cap_from_env() == 100u);
  ExperimentConfig cfg;
  cfg.command = "quotient";
  cfg.q = 7;
  cfg.size_cap = *size_cap_from_env();
  CHECK(code_of([&] { run_experiment(cfg); }) == ErrorCode::SizeCapExceeded);
  ::setenv("EXPANDERLAB_CAP_ELEMS", "zero", 1);
  CHECK(code_of([] { size_cap_from_env(); }) == ErrorCode::InvalidArgument);
  ::unsetenv("EXPANDERLAB_CAP_ELEMS");
  CHECK_FALSE(size_cap_from_env().has_value());
}
