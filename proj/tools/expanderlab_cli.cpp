#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "expanderlab/errors.hpp"
#include "expanderlab/harness.hpp"

using namespace expanderlab;

int main(int argc, char** argv) {
  CLI::App app{"expanderlab: Cayley-graph expansion experiments for arithmetic groups"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string gens, out, format = "csv";
  uint64_t cap = 0;

  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {
      {"quotient", "order of pi_q(Gamma) and its CRT decomposition"},
      {"spectrum", "eigenvalues of the walk operator on the Cayley graph"},
      {"walk", "l2 and sup norms of the random walk"},
      {"escape", "largest coset mass of the walk for a subgroup"},
      {"growth", "tripling sweeps over random symmetric sets"},
      {"freeness", "search for a trivial reduced word"},
      {"lemmas", "structural verification suite"},
      {"kesten", "return probabilities on the free group"},
  };
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--gens", gens, "generator file");
    sub->add_option("--builtin", cfg.builtin, "built-in generator set (lubotzky3, sanov2, sl2-elementary)");
    sub->add_flag("--symmetrize", cfg.symmetrize, "append inverses of the file's matrices");
    sub->add_option("--q", cfg.q, "square-free modulus");
    sub->add_option("--p", cfg.p, "prime for the lemma suite");
    sub->add_option("--lmax", cfg.l_max, "walk length, word length or k range");
    sub->add_option("--subgroup", cfg.subgroup, "borel | torus | file:PATH");
    sub->add_option("--samples", cfg.samples, "number of random samples");
    sub->add_option("--set-size", cfg.set_size, "size of random sets");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_flag("--exact", cfg.exact, "exact rational walk");
    sub->add_option("--M", cfg.generators_m, "free rank for kesten");
    sub->add_option("--mode", cfg.spectrum_mode, "spectrum solver: auto | full | iterative");
    sub->add_option("--out", out, "output path (stdout when omitted)");
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "worker threads (accepted; work runs on one thread)");
    sub->add_option("--cap", cap, "group size cap (overrides EXPANDERLAB_CAP_ELEMS)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!gens.empty()) cfg.gens_path = gens;
    if (const auto env = size_cap_from_env()) cfg.size_cap = *env;
    if (cap) cfg.size_cap = cap;
    const auto res = run_experiment(cfg);
    emit_report(res.report, format == "json" ? ReportFormat::Json : ReportFormat::Csv, out);
    if (res.exit_code == kExitAssertion) std::cerr << cfg.command << ": assertion failed\n";
    return res.exit_code;
  } catch (const Error& e) {
    std::cerr << "error " << e.qualified_code() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
