#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "expanderlab/group_table.hpp"
#include "expanderlab/rational_matrix.hpp"

namespace expanderlab {

inline constexpr std::string_view kVersion = "0.1.0";

struct GeneratorFile {
  int dim = 0;
  PrimeSet primes;
  std::vector<RationalMatrix> generators;
};

// Format: "dim d", then "primes p1 p2 ..." (possibly empty), then one matrix
// per line as d^2 rational tokens, row-major. Blank lines and '#' comments
// are skipped. Throws Error{ParseError} naming the line, and
// Error{DenominatorOutsideS} for a denominator prime missing from the list.
GeneratorFile parse_generators_text(std::string_view text, bool symmetrize = false);
// Throws Error{IoError} when the file cannot be read.
GeneratorFile parse_generators(const std::string& path, bool symmetrize = false);

// ---------------------------------------------------------------------------
// Tabular reports

using Cell = std::variant<std::monostate, bool, int64_t, uint64_t, double, std::string>;

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;   // echoed in order
  std::vector<std::pair<std::string, std::string>> summary;  // scalar results
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class ReportFormat { Csv, Json };

// Floats use 12 significant digits; "nan", "inf" and "-inf" spelled out.
std::string format_double(double x);
std::string format_cell(const Cell& c);

// CSV: '#' lines carry the version stamp, config and summary, then the
// header and rows. Empty results give a header-only table.
std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render(const Report& report, ReportFormat format);
// Writes to `path`, or to stdout for an empty path or "-". Throws Error{IoError}.
void emit_report(const Report& report, ReportFormat format, const std::string& path);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  std::string command;
  std::optional<std::string> gens_path;
  std::string builtin = "lubotzky3";
  bool symmetrize = false;
  uint64_t q = 5;
  uint64_t p = 5;
  int l_max = 20;
  std::string subgroup;  // "", "borel", "torus" or "file:PATH"
  int samples = 100;
  int set_size = 40;
  uint64_t seed = 1;
  bool exact = false;
  int generators_m = 2;  // free rank for the kesten command
  size_t size_cap = kDefaultSizeCap;
  int threads = 1;
  std::string spectrum_mode = "auto";  // auto | full | iterative
};

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAssertion = 2;

struct ExperimentResult {
  Report report;
  int exit_code = kExitOk;
};

// Commands: quotient, spectrum, walk, escape, growth, freeness, lemmas, kesten.
// Library errors propagate as Error; the caller maps them to kExitError.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Structural checks at the prime p (>= 5) and the next prime q:
// product form of normal subgroups of SL2(p) x SL2(q), splitting and
// non-surjection for SL2(p) x| F_p^2, the lower central series and recovery
// in Heisenberg(p), orbit sums for SL2 on F_p^2 and F_q^2, and the
// commutator identities.
std::vector<SuiteCheck> run_structural_suite(uint32_t p, uint64_t seed = 1);

// Reads EXPANDERLAB_CAP_ELEMS, if set and positive.
std::optional<size_t> size_cap_from_env();

}  // namespace expanderlab
