#include "expanderlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "expanderlab/builtins.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/growth.hpp"
#include "expanderlab/number_theory.hpp"
#include "expanderlab/spectral.hpp"
#include "expanderlab/structure.hpp"
#include "expanderlab/subgroup.hpp"
#include "expanderlab/walk.hpp"
#include "expanderlab/words.hpp"

namespace expanderlab {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(modules::kCliHarness, code, msg);
}

std::vector<std::string> tokens_of(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

template <class T>
std::optional<T> parse_int(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator files

GeneratorFile parse_generators_text(std::string_view text, bool symmetrize) {
  GeneratorFile out;
  bool have_dim = false, have_primes = false;
  size_t line_no = 0;
  std::istringstream in{std::string(text)};
  auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto tok = tokens_of(raw);
    if (tok.empty()) continue;
    if (!have_dim) {
      const auto d = tok.size() == 2 && tok[0] == "dim" ? parse_int<int>(tok[1]) : std::nullopt;
      if (!d || *d < 1) fail(ErrorCode::ParseError, where() + "expected 'dim d' with d >= 1");
      out.dim = *d;
      have_dim = true;
      continue;
    }
    if (!have_primes) {
      if (tok[0] != "primes") fail(ErrorCode::ParseError, where() + "expected 'primes p1 p2 ...'");
      std::vector<uint64_t> ps;
      for (size_t i = 1; i < tok.size(); ++i) {
        const auto p = parse_int<uint64_t>(tok[i]);
        if (!p || !is_prime(*p)) fail(ErrorCode::ParseError, where() + "'" + tok[i] + "' is not a prime");
        if (std::find(ps.begin(), ps.end(), *p) != ps.end()) {
          fail(ErrorCode::ParseError, where() + "prime " + tok[i] + " listed twice");
        }
        ps.push_back(*p);
      }
      out.primes = PrimeSet(std::move(ps));
      have_primes = true;
      continue;
    }
    const size_t want = static_cast<size_t>(out.dim) * static_cast<size_t>(out.dim);
    if (tok.size() != want) {
      fail(ErrorCode::ParseError, where() + "expected " + std::to_string(want) + " entries, found " +
                                      std::to_string(tok.size()));
    }
    std::vector<Rational> entries;
    for (const auto& t : tok) {
      try {
        entries.push_back(parse_rational(t));
      } catch (const Error& e) {
        fail(ErrorCode::ParseError, where() + e.what());
      }
    }
    RationalMatrix m(out.dim, std::move(entries));
    for (uint64_t p : m.denominator_support()) {
      if (!out.primes.contains(p)) {
        fail(ErrorCode::DenominatorOutsideS,
             where() + "denominator prime " + std::to_string(p) + " is not declared");
      }
    }
    if (m.det() == 0) fail(ErrorCode::SingularMatrix, where() + "matrix is singular");
    out.generators.push_back(std::move(m));
  }
  if (!have_dim) fail(ErrorCode::ParseError, "missing 'dim' line");
  if (!have_primes) fail(ErrorCode::ParseError, "missing 'primes' line");
  if (out.generators.empty()) fail(ErrorCode::ParseError, "no matrices");
  if (symmetrize) {
    const size_t n = out.generators.size();
    for (size_t i = 0; i < n; ++i) {
      auto inv = inverse(out.generators[i]);
      if (std::find(out.generators.begin(), out.generators.end(), inv) == out.generators.end()) {
        out.generators.push_back(std::move(inv));
      }
    }
  }
  return out;
}

GeneratorFile parse_generators(const std::string& path, bool symmetrize) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_generators_text(ss.str(), symmetrize);
}

// ---------------------------------------------------------------------------
// Reports

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0 ? 0.0 : x);  // no "-0"
  return buf;
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(int64_t v) const { return std::to_string(v); }
    std::string operator()(uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(int64_t v) const { return v; }
    nlohmann::ordered_json operator()(uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return std::stod(format_double(v));
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

std::string render_csv(const Report& report) {
  std::ostringstream os;
  os << "# expanderlab " << kVersion << "\n";
  os << "# command: " << report.command << "\n";
  for (const auto& [k, v] : report.config) os << "# config " << k << "=" << v << "\n";
  for (const auto& [k, v] : report.summary) os << "# result " << k << "=" << v << "\n";
  for (size_t i = 0; i < report.columns.size(); ++i) {
    os << (i ? "," : "") << csv_escape(report.columns[i]);
  }
  os << "\n";
  for (const auto& row : report.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
    os << "\n";
  }
  return os.str();
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json j;
  j["version"] = std::string(kVersion);
  j["command"] = report.command;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) j["config"][k] = v;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.summary) j["summary"][k] = v;
  j["columns"] = report.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (size_t i = 0; i < row.size() && i < report.columns.size(); ++i) {
      r[report.columns[i]] = json_cell(row[i]);
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string render(const Report& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_csv(report);
}

void emit_report(const Report& report, ReportFormat format, const std::string& path) {
  const std::string text = render(report, format);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot write " + path);
  f << text;
  if (!f) fail(ErrorCode::IoError, "write to " + path + " failed");
}

std::optional<size_t> size_cap_from_env() {
  const char* v = std::getenv("EXPANDERLAB_CAP_ELEMS");
  if (!v || !*v) return std::nullopt;
  const auto n = parse_int<size_t>(v);
  if (!n || *n == 0) fail(ErrorCode::InvalidArgument, "EXPANDERLAB_CAP_ELEMS must be a positive integer");
  return n;
}

// ---------------------------------------------------------------------------
// Structural suite

namespace {

uint64_t next_prime(uint64_t p) {
  do ++p;
  while (!is_prime(p));
  return p;
}

template <class F>
SuiteCheck guarded(std::string name, F&& body) {
  SuiteCheck c{std::move(name), false, ""};
  try {
    body(c);
  } catch (const Error& e) {
    c.pass = false;
    c.detail = e.qualified_code() + ": " + e.what();
  }
  return c;
}

void orbit_checks(uint32_t p, SuiteCheck& c) {
  const ModuleAction act(p, 2, sl2_affine_spec(p).l_generators);
  int worst = 0;
  c.pass = true;
  for (uint64_t code = 1; code < act.space_size(); ++code) {
    const Vec v = act.decode(code);
    const auto sub = orbit_sum_subspace(act, v);
    const auto span = orbit_sum_span(act, v, 4);
    worst = std::max({worst, sub.c, span.c});
    if (sub.subspace.dim() == 0 || !act.is_invariant(sub.subspace) || span.submodule.dim() != 2) {
      c.pass = false;
    }
  }
  c.detail = "all nonzero vectors of F_" + std::to_string(p) + "^2, largest c = " + std::to_string(worst);
}

}  // namespace

std::vector<SuiteCheck> run_structural_suite(uint32_t p, uint64_t seed) {
  if (p < 5 || !is_prime(p)) fail(ErrorCode::InvalidArgument, "the suite needs a prime p >= 5");
  const auto q = static_cast<uint32_t>(next_prime(p));
  const std::string pq = std::to_string(p) + "," + std::to_string(q);
  std::vector<SuiteCheck> out;

  out.push_back(guarded("normal subgroups of SL2(" + pq + ") are products", [&](SuiteCheck& c) {
    const auto g = sl2_group(static_cast<uint64_t>(p) * q);
    const auto dec = product_decompose(g);
    const auto normals = normal_subgroups(g);
    c.pass = dec.bijective;
    for (const auto& h : normals) {
      const auto r = verify_direct_product_form(h, dec);
      if (!r.pass) {
        c.pass = false;
        c.detail = r.witness;
      }
    }
    if (c.pass) c.detail = std::to_string(normals.size()) + " normal subgroups";
  }));

  std::optional<SplitGroup> split;
  out.push_back(guarded("normal subgroups of SL2(" + std::to_string(p) + ") x| F^2 split",
                        [&](SuiteCheck& c) {
                          split = build_split_group({sl2_affine_spec(p)});
                          const auto normals = normal_subgroups(split->group);
                          c.pass = true;
                          for (const auto& h : normals) {
                            const auto r = verify_product_form(h, *split);
                            if (!r.pass) {
                              c.pass = false;
                              c.detail = r.witness;
                            }
                          }
                          if (c.pass) c.detail = std::to_string(normals.size()) + " normal subgroups";
                        }));

  out.push_back(guarded("no proper normal subgroup maps onto L", [&](SuiteCheck& c) {
    if (!split) split = build_split_group({sl2_affine_spec(p)});
    const auto r = verify_normal_perfect(*split);
    c.pass = r.pass && r.precondition_met;
    c.detail = r.pass ? std::to_string(r.normal_subgroups_checked) + " normal subgroups checked"
                      : r.witness;
  }));

  const auto heis = heisenberg_group(p);
  out.push_back(guarded("lower central series of Heisenberg(" + std::to_string(p) + ")",
                        [&](SuiteCheck& c) {
                          const auto series = lower_central_series(heis);
                          std::vector<uint64_t> orders;
                          for (const auto& s : series) orders.push_back(s.order());
                          const uint64_t pp = p;
                          c.pass = orders == std::vector<uint64_t>{pp * pp * pp, pp, 1};
                          for (size_t i = 0; i < orders.size(); ++i) {
                            c.detail += (i ? "," : "") + std::to_string(orders[i]);
                          }
                        }));

  out.push_back(guarded("nilpotent recovery on 100 transversals", [&](SuiteCheck& c) {
    std::mt19937_64 rng(seed);
    int worst = 0;
    c.pass = true;
    for (int i = 0; i < 100; ++i) {
      const auto r = nilpotent_recover(heis, random_transversal(heis, rng));
      if (!r.t) {
        c.pass = false;
        continue;
      }
      worst = std::max(worst, *r.t);
    }
    c.detail = "largest t = " + std::to_string(worst) + ", bound " + std::to_string(kDefaultRecoverBound);
  }));

  out.push_back(guarded("commutator identities in Heisenberg(" + std::to_string(p) + ")",
                        [&](SuiteCheck& c) {
                          const auto r = commutator_identities_check(heis, 1000, seed);
                          c.pass = r.pass;
                          c.detail = r.pass ? "1000 triples" : r.witness;
                        }));

  for (uint32_t r : {p, q}) {
    out.push_back(guarded("orbit sums of SL2 on F_" + std::to_string(r) + "^2",
                          [&](SuiteCheck& c) { orbit_checks(r, c); }));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

struct Loaded {
  std::vector<RationalMatrix> gens;
  PrimeSet primes;
};

Loaded load_generators(const ExperimentConfig& cfg) {
  if (cfg.gens_path) {
    auto f = parse_generators(*cfg.gens_path, cfg.symmetrize);
    return {std::move(f.generators), std::move(f.primes)};
  }
  return {builtin_generators(cfg.builtin), PrimeSet{}};
}

GroupPtr load_group(const ExperimentConfig& cfg, const Loaded& l) {
  QuotientOptions opts;
  opts.group.size_cap = cfg.size_cap;
  opts.denominators = l.primes;
  return generate_group(l.gens, cfg.q, opts);
}

std::optional<SubgroupRecord> resolve_subgroup(const ExperimentConfig& cfg, const GroupPtr& g,
                                               std::string_view fallback = "") {
  const std::string spec = cfg.subgroup.empty() ? std::string(fallback) : cfg.subgroup;
  if (spec.empty()) return std::nullopt;
  if (spec == "borel") return borel_subgroup(g);
  if (spec == "torus") return torus_subgroup(g);
  if (spec.rfind("file:", 0) == 0) {
    const auto f = parse_generators(spec.substr(5), true);
    std::vector<ElementId> ids;
    for (const auto& m : f.generators) {
      const auto id = g->find_rational(m);
      if (!id) fail(ErrorCode::InvalidArgument, "subgroup generator " + m.to_string() + " is not in the group");
      ids.push_back(*id);
    }
    return subgroup_closure(g, ids);
  }
  fail(ErrorCode::InvalidArgument, "unknown subgroup spec '" + spec + "' (borel, torus, file:PATH)");
}

std::string source_of(const ExperimentConfig& cfg) {
  return cfg.gens_path ? "file:" + *cfg.gens_path : "builtin:" + cfg.builtin;
}

double log_rational(const Rational& r) {
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

SpectrumMode parse_mode(const std::string& s) {
  if (s == "auto") return SpectrumMode::Auto;
  if (s == "full") return SpectrumMode::Full;
  if (s == "iterative") return SpectrumMode::Iterative;
  fail(ErrorCode::InvalidArgument, "spectrum mode must be auto, full or iterative");
}

void run_quotient(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)}, {"q", std::to_string(cfg.q)}};
  const auto l = load_generators(cfg);
  const auto g = load_group(cfg, l);
  rep.columns = {"component", "modulus", "order"};
  std::string bijective = "n/a";
  if (g->num_factors() > 1) {
    const auto dec = product_decompose(g);
    for (size_t f = 0; f < dec.factors.size(); ++f) {
      rep.rows.push_back({std::string("factor"), uint64_t{dec.primes[f]}, uint64_t{dec.factors[f]->order()}});
    }
    bijective = dec.bijective ? "true" : "false";
    rep.summary.push_back({"product_of_orders", std::to_string(dec.product_of_orders)});
  }
  rep.rows.push_back({std::string("quotient"), cfg.q, uint64_t{g->order()}});
  rep.summary.push_back({"order", std::to_string(g->order())});
  rep.summary.push_back({"bijective", bijective});
}

void run_spectrum(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)}, {"q", std::to_string(cfg.q)}, {"mode", cfg.spectrum_mode}};
  const auto l = load_generators(cfg);
  const CayleyGraph graph(load_group(cfg, l));
  SpectrumOptions opts;
  opts.mode = parse_mode(cfg.spectrum_mode);
  opts.seed = cfg.seed;
  const auto s = spectrum(graph, opts);
  rep.columns = {"index", "eigenvalue", "multiplicity"};
  // Clusters partition the descending list when the spectrum is complete.
  size_t ci = 0, used = 0;
  for (size_t idx = 0; idx < s.eigenvalues.size(); ++idx) {
    Cell mult;
    if (s.complete) {
      while (used >= s.clusters[ci].multiplicity) ++ci, used = 0;
      ++used;
      mult = uint64_t{s.clusters[ci].multiplicity};
    }
    rep.rows.push_back({uint64_t{idx}, s.eigenvalues[idx], mult});
  }
  const auto br = cheeger_bracket(s);
  rep.summary = {{"order", std::to_string(s.order)},
                 {"degree", std::to_string(s.degree)},
                 {"complete", s.complete ? "true" : "false"},
                 {"converged", s.converged ? "true" : "false"},
                 {"lambda2", format_double(s.lambda2)},
                 {"lambda_min", format_double(s.lambda_min)},
                 {"lambda_star", format_double(s.lambda_star)},
                 {"cheeger_lower", format_double(br.lower)},
                 {"cheeger_upper", format_double(br.upper)}};
  bool ok = std::abs(s.lambda1 - 1.0) <= 1e-9;
  for (double v : s.eigenvalues) ok = ok && std::abs(v) <= 1.0 + 1e-9;
  if (!ok) res.exit_code = kExitAssertion;
}

void run_walk(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)},
                {"q", std::to_string(cfg.q)},
                {"lmax", std::to_string(cfg.l_max)},
                {"subgroup", cfg.subgroup.empty() ? "none" : cfg.subgroup},
                {"exact", cfg.exact ? "true" : "false"}};
  const auto l = load_generators(cfg);
  const auto g = load_group(cfg, l);
  const auto h = resolve_subgroup(cfg, g);
  bool conserved = true;
  if (cfg.exact) {
    rep.columns = {"l", "l2_norm_squared", "l2_norm", "mass_on_H"};
    ExactMeasure m = ExactMeasure::delta(g, GroupTable::identity());
    for (int step = 1; step <= cfg.l_max; ++step) {
      m = walk_step(m);
      conserved = conserved && m.mass() == 1;
      const Rational sq = m.l2_norm_squared();
      Cell on_h;
      if (h) {
        Rational s = 0;
        for (ElementId x : h->elements()) s += m[x];
        on_h = format_rational(s);
      }
      rep.rows.push_back({int64_t{step}, format_rational(sq), std::sqrt(sq.get_d()), on_h});
    }
  } else {
    rep.columns = {"l", "l2_norm", "linf", "mass_on_H"};
    walk_series(g, cfg.l_max, [&](int step, const Measure& m) {
      conserved = conserved && std::abs(m.mass() - 1.0) <= 1e-9;
      rep.rows.push_back({int64_t{step}, m.l2_norm(), m.linf(), h ? Cell{m.mass_on(*h)} : Cell{}});
    });
  }
  rep.summary = {{"order", std::to_string(g->order())},
                 {"uniform_l2_norm", format_double(1.0 / std::sqrt(static_cast<double>(g->order())))},
                 {"mass_conserved", conserved ? "true" : "false"}};
  if (!conserved) res.exit_code = kExitAssertion;
}

void run_escape(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)},
                {"q", std::to_string(cfg.q)},
                {"lmax", std::to_string(cfg.l_max)},
                {"subgroup", cfg.subgroup.empty() ? "borel" : cfg.subgroup}};
  const auto l = load_generators(cfg);
  const auto g = load_group(cfg, l);
  const auto h = resolve_subgroup(cfg, g, "borel");
  const auto prof = escape_profile(*h, cfg.l_max, std::min(20, cfg.l_max));
  const double target = 1.0 / static_cast<double>(prof.index);
  rep.columns = {"l", "max_coset_mass", "excess"};
  for (size_t i = 0; i < prof.max_coset_mass.size(); ++i) {
    rep.rows.push_back({int64_t(i + 1), prof.max_coset_mass[i], prof.max_coset_mass[i] - target});
  }
  rep.summary = {{"index", std::to_string(prof.index)},
                 {"settled", prof.settled ? "true" : "false"},
                 {"monotone", prof.monotone ? "true" : "false"},
                 {"monotone_from", std::to_string(prof.monotone_from)}};
}

void run_growth(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)},
                {"q", std::to_string(cfg.q)},
                {"samples", std::to_string(cfg.samples)},
                {"set_size", std::to_string(cfg.set_size)},
                {"seed", std::to_string(cfg.seed)}};
  const auto l = load_generators(cfg);
  const auto g = load_group(cfg, l);
  rep.columns = {"seed", "size", "triple_size", "exponent", "chain_holds"};
  bool all_hold = true;
  for (int i = 0; i < cfg.samples; ++i) {
    const uint64_t s = cfg.seed + static_cast<uint64_t>(i);
    std::mt19937_64 rng(s);
    const auto a = random_symmetric_set(g, static_cast<size_t>(cfg.set_size), rng);
    const auto t = tripling_report(a);
    const bool holds = chain_inequality(a, 5).holds;
    all_hold = all_hold && holds;
    rep.rows.push_back({s, t.size, t.triple_size, t.exponent, holds});
  }
  rep.summary = {{"order", std::to_string(g->order())}, {"chain_inequality", all_hold ? "holds" : "violated"}};
  if (!all_hold) res.exit_code = kExitAssertion;
}

void run_freeness(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"source", source_of(cfg)}, {"lmax", std::to_string(cfg.l_max)}};
  const auto l = load_generators(cfg);
  const auto basis = free_basis(l.gens);
  const auto cert = certify_free(basis, cfg.l_max);
  rep.columns = {"free", "max_length", "words_checked", "relation"};
  rep.rows.push_back({cert.free, int64_t{cert.max_length}, cert.words_checked,
                      cert.relation ? Cell{cert.relation->to_string()} : Cell{}});
  rep.summary = {{"basis_size", std::to_string(basis.size())}};
}

void run_lemmas(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  rep.config = {{"p", std::to_string(cfg.p)}, {"seed", std::to_string(cfg.seed)}};
  const auto checks = run_structural_suite(static_cast<uint32_t>(cfg.p), cfg.seed);
  rep.columns = {"check", "pass", "detail"};
  size_t passed = 0;
  for (const auto& c : checks) {
    rep.rows.push_back({c.name, c.pass, c.detail});
    passed += c.pass;
  }
  rep.summary = {{"passed", std::to_string(passed) + "/" + std::to_string(checks.size())}};
  if (passed != checks.size()) res.exit_code = kExitAssertion;
}

void run_kesten(const ExperimentConfig& cfg, ExperimentResult& res) {
  auto& rep = res.report;
  const int m = cfg.generators_m;
  rep.config = {{"M", std::to_string(m)}, {"lmax", std::to_string(cfg.l_max)}};
  const auto table = kesten_table(m, cfg.l_max);
  const double target = static_cast<double>(2 * m - 1) / static_cast<double>(m * m);
  rep.columns = {"k", "return_probability", "root", "target"};
  for (const auto& row : table) {
    if (row.k == 0) continue;
    const double root = std::exp(log_rational(row.return_probability) / (2.0 * row.k));
    rep.rows.push_back({int64_t{row.k}, row.return_probability.get_d(), root, target});
  }
  // Partition identity 1 = sum_l P(at distance l), exactly.
  bool exact = true;
  for (int k = 0; k <= std::min(cfg.l_max, 50); ++k) {
    Rational total = 0;
    for (const auto& x : distance_distribution(m, k)) total += x;
    exact = exact && total == 1;
  }
  rep.summary = {{"partition_identity", exact ? "exact" : "violated"}};
  if (!exact) res.exit_code = kExitAssertion;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.report.command = cfg.command;
  if (cfg.l_max < 0 || cfg.samples < 0 || cfg.set_size < 1 || cfg.size_cap == 0) {
    fail(ErrorCode::InvalidArgument, "lmax and samples must be non-negative, set size and caps positive");
  }
  if (cfg.command == "quotient") run_quotient(cfg, res);
  else if (cfg.command == "spectrum") run_spectrum(cfg, res);
  else if (cfg.command == "walk") run_walk(cfg, res);
  else if (cfg.command == "escape") run_escape(cfg, res);
  else if (cfg.command == "growth") run_growth(cfg, res);
  else if (cfg.command == "freeness") run_freeness(cfg, res);
  else if (cfg.command == "lemmas") run_lemmas(cfg, res);
  else if (cfg.command == "kesten") run_kesten(cfg, res);
  else fail(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
  return res;
}

}  // namespace expanderlab
