#include "bvtrace/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvtrace/cache.hpp"
#include "bvtrace/checks.hpp"
#include "bvtrace/correlation.hpp"
#include "bvtrace/dgbv.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/qmod.hpp"
#include "bvtrace/vertex.hpp"

namespace bvtrace {
namespace {

using json = nlohmann::json;

constexpr const char* kSchema = "bvtrace/1";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  int hbar_order = 8;
  int q_order = 30;
  std::optional<int> degree;
  std::optional<int> n;
  int jobs = 1;
  std::string cache_dir;
  std::uint64_t seed = 1;
  std::string format = "json";
  bool verify_cache = false;
};

// jobs and the cache location never change a result, so they stay out of the
// echoed configuration and outputs remain byte-identical across them
json config_json(const Config& c) {
  json j;
  j["hbar_order"] = c.hbar_order;
  j["q_order"] = c.q_order;
  j["degree"] = c.degree ? json(*c.degree) : json(nullptr);
  j["n"] = c.n ? json(*c.n) : json(nullptr);
  j["seed"] = c.seed;
  return j;
}

struct Command {
  std::string name;
  std::vector<std::string> args;
  // subcommand options
  int cases = 0;
  bool random = false;
  std::string op = "identity";
};

void require_args(const Command& cmd, std::size_t lo, std::size_t hi, const char* usage) {
  if (cmd.args.size() < lo || cmd.args.size() > hi)
    throw UsageError(cmd.name + " expects " + usage + ", got " + std::to_string(cmd.args.size()) + " argument(s)");
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v < -1000000 || v > 1000000) throw std::out_of_range(s);
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + " must be an integer, got '" + s + "'");
  }
}

int weyl_n(const Config& cfg, std::initializer_list<std::string_view> texts) {
  if (cfg.n) return *cfg.n;
  int n = 1;
  for (auto t : texts) n = std::max(n, infer_weyl_n(t));
  return n;
}

std::string read_json_argument(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("cannot read " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_argument(const std::string& arg) {
  try {
    return json::parse(read_json_argument(arg));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

Rational json_rational(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw DomainError("expected an integer or a \"p/q\" string, got " + v.dump());
}

std::vector<std::vector<Rational>> json_matrix(const json& m, int dim, const char* what) {
  std::vector<std::vector<Rational>> out(dim, std::vector<Rational>(dim));
  if (m.is_null()) return out;
  if (!m.is_array() || static_cast<int>(m.size()) != dim) throw DomainError(std::string(what) + " must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  for (int i = 0; i < dim; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != dim) throw DomainError(std::string(what) + " row " + std::to_string(i) + " has the wrong length");
    for (int j = 0; j < dim; ++j) out[i][j] = json_rational(m[i][j]);
  }
  return out;
}

std::vector<std::vector<std::string>> matrix_strings(const std::vector<std::vector<Rational>>& m) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& v : row) out.back().push_back(v.to_string());
  }
  return out;
}

DgSymplecticSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("degrees")) throw DomainError("space needs a \"degrees\" array");
  DgSymplecticSpace s;
  s.degrees = j.at("degrees").get<std::vector<int>>();
  int dim = s.dim();
  if (dim < 1 || dim > kMaxVars) throw DomainError("space dimension must be between 1 and " + std::to_string(kMaxVars));
  if (j.contains("names")) {
    s.names = j.at("names").get<std::vector<std::string>>();
  } else {
    for (int i = 0; i < dim; ++i) s.names.push_back("x" + std::to_string(i + 1));
  }
  if (static_cast<int>(s.names.size()) != dim) throw DomainError("names and degrees differ in length");
  s.omega = json_matrix(j.value("omega", json()), dim, "omega");
  s.q = json_matrix(j.value("q", json()), dim, "q");
  s.validate();
  return s;
}

FourierKernel kernel_from_json(const json& k, int truncation) {
  int k_max = k.value("k_max", 0);
  if (k_max < 0 || k_max > 1000) throw DomainError("k_max out of range");
  FourierKernel out(k_max, truncation);
  for (const auto& t : k.value("terms", json::array())) {
    if (!t.is_array() || t.size() != 3) throw DomainError("kernel terms are [k, n, c] triples");
    int fk = t[0].get<int>(), qn = t[1].get<int>();
    if (std::abs(fk) > k_max) throw DomainError("Fourier index " + std::to_string(fk) + " exceeds k_max");
    if (qn < 0) throw DomainError("negative q-power in kernel");
    if (qn <= truncation) out.at(fk, qn) += json_rational(t[2]);
  }
  return out;
}

KernelMap kernel_map_from_json(const json& list, int truncation) {
  KernelMap out;
  for (const auto& k : list) {
    auto pair = k.at("pair").get<std::vector<int>>();
    if (pair.size() != 2) throw DomainError("kernel pair must have two indices");
    out[{pair[0], pair[1]}] = kernel_from_json(k, truncation);
  }
  return out;
}

DiagonalOperator parse_operator(const std::string& op) {
  if (op == "identity") return DiagonalOperator::identity();
  if (op == "energy" || op == "L0") return DiagonalOperator::energy();
  if (op.rfind("N:", 0) == 0) {
    auto rest = op.substr(2);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw UsageError("number operator syntax is N:species:mode");
    int s = to_int(rest.substr(0, colon), "species"), k = to_int(rest.substr(colon + 1), "mode");
    if (s < 0 || s > 1 || k < 1) throw DomainError("number operator needs species 0 or 1 and mode >= 1");
    return DiagonalOperator::number(s, k);
  }
  throw UsageError("unknown operator '" + op + "' (identity, energy, N:species:mode)");
}

FockSystem parse_system(const std::string& s) {
  if (s == "bc") return FockSystem::bc;
  if (s == "beta_gamma" || s == "betagamma") return FockSystem::beta_gamma;
  throw UsageError("unknown system '" + s + "' (bc, beta_gamma)");
}

json check_json(const CheckResult& r) {
  json j{{"name", r.name}, {"checked", r.checked}, {"failures", r.failures}};
  if (r.failures) j["first_failure"] = r.first_failure;
  return j;
}

json run_selftest(const Config& cfg, bool& passed) {
  std::uint64_t s = cfg.seed;
  std::vector<CheckResult> suites;
  suites.push_back(check_moyal(1000, 3, 4, 6, s));
  suites.push_back(check_cyclic_identities(300, 2, 4, 3, 6, s + 1));
  auto chain = check_chain_map(1, 3, 3, cfg.jobs);
  chain.merge(check_chain_map(2, 2, 3, cfg.jobs));
  suites.push_back(chain);
  suites.push_back(check_trace_cocycle(200, 2, 4, 3, 6, s + 2));
  suites.push_back(check_forms(200, 2, 3, 6, s + 3));
  suites.push_back(check_wheels(9));
  suites.push_back(check_dgbv(10, 3, 6, 4, s + 4));
  suites.push_back(check_vertex(100, s + 5));
  suites.push_back(check_quasi_modular(30, 12, s + 6));
  suites.push_back(check_fock(20));
  suites.push_back(check_fedosov(25, 1, 3, 6, s + 7));
  json list = json::array();
  passed = true;
  for (const auto& r : suites) {
    passed = passed && r.passed();
    list.push_back(check_json(r));
  }
  return {{"passed", passed}, {"suites", list}};
}

struct Outcome {
  json input;
  json result;
  bool failed = false;  // selftest failure: result is still reported
};

Outcome dispatch(const Command& cmd, const Config& cfg) {
  const auto& a = cmd.args;
  const int order = cfg.hbar_order;
  Outcome o;
  auto named = [&](std::initializer_list<const char*> keys) {
    json in = json::object();
    std::size_t i = 0;
    for (const char* k : keys)
      if (i < a.size()) in[k] = a[i++];
    return in;
  };

  if (cmd.name == "star" || cmd.name == "bracket") {
    require_args(cmd, 2, 2, "two Weyl expressions");
    o.input = named({"A", "B"});
    int n = weyl_n(cfg, {a[0], a[1]});
    auto f = parse_weyl(a[0], n, order), g = parse_weyl(a[1], n, order);
    auto pi = PoissonTensor::standard(n);
    o.result = (cmd.name == "star" ? moyal_star(f, g, pi) : star_commutator(f, g, pi)).to_string();
  } else if (cmd.name == "hoch") {
    require_args(cmd, 1, 1, "one chain expression");
    o.input = named({"chain"});
    int n = weyl_n(cfg, {a[0]});
    auto pi = PoissonTensor::standard(n);
    if (mentions_identifier(a[0], "u")) {
      o.result = {{"b+uB", periodic_diff(parse_periodic(a[0], n, order), pi).to_string()}};
    } else {
      auto c = parse_chain(a[0], n, order);
      o.result = {{"b", hochschild_b(c, pi).to_string()}, {"B", connes_B(c).to_string()}};
    }
  } else if (cmd.name == "correlate") {
    require_args(cmd, 1, 1, "one chain expression");
    o.input = named({"chain"});
    int n = weyl_n(cfg, {a[0]});
    auto pi = PoissonTensor::standard(n);
    auto form = correlation_free(parse_chain(a[0], n, order), pi);
    o.result = {{"form", form.to_string()}, {"berezin", berezin_integral(form, pi).to_string()}};
  } else if (cmd.name == "trace") {
    require_args(cmd, 1, 1, "one periodic chain expression");
    o.input = named({"chain"});
    int n = weyl_n(cfg, {a[0]});
    o.result = trace(parse_periodic(a[0], n, order), PoissonTensor::standard(n)).to_string();
  } else if (cmd.name == "wheel") {
    require_args(cmd, 1, 1, "a positive integer");
    o.input = named({"k"});
    int k = to_int(a[0], "k");
    if (k < 1 || k > 64) throw DomainError("wheel size must be between 1 and 64");
    o.result = wheel_integral(k).to_string();
  } else if (cmd.name == "ahat") {
    require_args(cmd, 0, 0, "no arguments");
    int deg = cfg.degree.value_or(8);
    if (deg < 0 || deg > 200) throw DomainError("--degree must be between 0 and 200");
    o.input = json::object();
    auto coeffs = a_hat_factor(deg);
    std::vector<std::pair<Rational, std::string>> terms;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) terms.emplace_back(coeffs[k], text::power("x", k));
    o.result = text::join_terms(terms);
  } else if (cmd.name == "fedosov-check") {
    require_args(cmd, 0, 0, "no arguments");
    o.input = json::object();
    int cases = cmd.cases > 0 ? cmd.cases : 5;
    int n = cfg.n.value_or(1), x_order = cfg.degree.value_or(3);
    if (n < 1 || n > kMaxVars / 2) throw DomainError("n out of range");
    if (x_order < 1 || x_order > 6) throw DomainError("--degree (x-order) must be between 1 and 6");
    auto pi = PoissonTensor::standard(n);
    json instances = json::array();
    int ok = 0, rejected = 0;
    for (int i = 0; i < cases; ++i)
      for (bool perturb : {false, true}) {
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        auto rep = fedosov_verify(synthesize_fedosov(2, n, x_order, order, seed, perturb), pi);
        (perturb ? rejected : ok) += perturb ? !rep.passed : rep.passed;
        json inst{{"seed", seed}, {"perturbed", perturb}, {"passed", rep.passed}};
        if (!rep.passed) inst["residual"] = rep.residual.to_string();
        instances.push_back(inst);
      }
    o.result = {{"consistent_passed", ok}, {"perturbed_rejected", rejected}, {"cases", cases}, {"instances", instances}};
  } else if (cmd.name == "dgbv-check") {
    if (cmd.random) {
      require_args(cmd, 0, 0, "no arguments with --random");
      o.input = json::object();
      int cases = cmd.cases > 0 ? cmd.cases : 6;
      int deg = cfg.degree.value_or(4);
      if (deg < 0 || deg > 8) throw DomainError("--degree must be between 0 and 8");
      o.result = check_json(check_dgbv(cases, 3, deg, std::min(order, 4), cfg.seed));
    } else {
      require_args(cmd, 1, 2, "a space as JSON and optionally a functional");
      o.input = named({"space", "functional"});
      auto space = space_from_json(parse_json_argument(a[0]));
      auto k = poisson_kernel(space);
      o.result = {{"dim", space.dim()}, {"kernel", matrix_strings(k.t)}};
      if (a.size() == 2) {
        auto f = parse_functional(a[1], space, order);
        for (auto mode : {MasterMode::classical, MasterMode::quantum}) {
          auto r = master_equation_check(space, k, f, mode);
          o.result[mode == MasterMode::classical ? "classical" : "quantum"] = {
              {"passed", r.passed}, {"residual", r.residual.to_string(space.names)}};
        }
      }
    }
  } else if (cmd.name == "ope") {
    require_args(cmd, 2, 2, "two field expressions");
    o.input = named({"A", "B"});
    auto gens = GeneratorSet::beta_gamma_bc();
    auto ope = ope_singular(parse_vertex(a[0], gens, order), parse_vertex(a[1], gens, order));
    json poles = json::array();
    for (const auto& [k, c] : ope.poles) poles.push_back({{"pole", k + 1}, {"coefficient", c.to_string()}});
    o.result = {{"singular", ope.to_string()}, {"poles", poles}};
  } else if (cmd.name == "modes") {
    require_args(cmd, 4, 4, "A m B n");
    o.input = named({"A", "m", "B", "n"});
    auto gens = GeneratorSet::beta_gamma_bc();
    auto x = ModeSum::mode(parse_vertex(a[0], gens, order), to_int(a[1], "m"));
    auto y = ModeSum::mode(parse_vertex(a[2], gens, order), to_int(a[3], "n"));
    o.result = mode_bracket(x, y).to_string();
  } else if (cmd.name == "qme") {
    require_args(cmd, 1, 1, "one field expression");
    o.input = named({"gamma"});
    auto rep = qme_check(parse_vertex(a[0], GeneratorSet::beta_gamma_bc(), order));
    o.result = {{"bracket", rep.bracket.to_string()}, {"zero", rep.zero}, {"vacuous", rep.vacuous}};
  } else if (cmd.name == "eisenstein") {
    require_args(cmd, 1, 1, "a weight 2, 4 or 6");
    o.input = named({"k"});
    o.result = eisenstein(to_int(a[0], "k"), cfg.q_order).to_string();
  } else if (cmd.name == "recognize") {
    require_args(cmd, 2, 2, "a q-series and a weight");
    o.input = named({"series", "weight"});
    int w = to_int(a[1], "weight");
    auto s = parse_qseries(a[0], cfg.q_order);
    auto r = recognize(s, w);
    o.result = {{"success", r.success}};
    if (r.success)
      o.result["form"] = r.form.to_string();
    else
      o.result["residual"] = r.residual.to_string();
  } else if (cmd.name == "acycle") {
    require_args(cmd, 1, 1, "kernel data as JSON (or @file)");
    auto j = parse_json_argument(a[0]);
    o.input = {{"data", j}};
    int n = j.value("n", 0);
    if (n < 1 || n > 8) throw DomainError("\"n\" must be between 1 and 8");
    auto kernels = kernel_map_from_json(j.value("kernels", json::array()), cfg.q_order);
    std::map<std::vector<int>, KernelMap> per;
    for (const auto& entry : j.value("orderings", json::array()))
      per[entry.at("ordering").get<std::vector<int>>()] = kernel_map_from_json(entry.at("kernels"), cfg.q_order);
    o.result = a_cycle_average(kernels, n, per).to_string();
  } else if (cmd.name == "fock") {
    require_args(cmd, 1, 1, "a system (bc or beta_gamma)");
    o.input = named({"system"});
    o.input["op"] = cmd.op;
    FockSpace space{parse_system(a[0]), cfg.q_order};
    o.result = (cmd.op == "identity" ? fock_character(space) : fock_trace(space, parse_operator(cmd.op))).to_string();
  } else if (cmd.name == "selftest") {
    require_args(cmd, 0, 0, "no arguments");
    o.input = json::object();
    bool passed = false;
    o.result = run_selftest(cfg, passed);
    o.failed = !passed;
  } else {
    throw UsageError("unknown subcommand '" + cmd.name + "'");
  }
  return o;
}

std::string render_text(const json& result) {
  if (result.is_string()) return result.get<std::string>() + "\n";
  if (!result.is_object()) return result.dump() + "\n";
  std::string out;
  for (const auto& [k, v] : result.items()) out += k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return out;
}

const std::vector<std::pair<std::string, std::string>> kSubcommands = {
    {"star", "Moyal product A*B of two Weyl expressions"},
    {"bracket", "(1/h)[A,B] with the Moyal product"},
    {"hoch", "Hochschild b and Connes B of a chain (b+uB when u occurs)"},
    {"correlate", "free correlation form of a chain and its Berezin integral"},
    {"trace", "trace of a periodic chain"},
    {"wheel", "one-loop wheel integral with k propagators"},
    {"ahat", "coefficients of (x/2)/sinh(x/2) through x^degree"},
    {"fedosov-check", "verify synthesized and perturbed Fedosov instances"},
    {"dgbv-check", "Poisson kernel and master equations on a dg symplectic space"},
    {"ope", "singular OPE of two fields"},
    {"modes", "bracket of modes: A m B n"},
    {"qme", "zero-mode master equation check for gamma"},
    {"eisenstein", "Eisenstein series E_k"},
    {"recognize", "identify a q-series as a quasi-modular form of given weight"},
    {"acycle", "A-cycle average of Fourier kernels (JSON)"},
    {"fock", "Fock character or diagonal operator trace"},
    {"selftest", "run every invariant suite"},
};

}  // namespace

CliOutput run_cli(const std::vector<std::string>& args) {
  CliOutput out;
  Config cfg;
  Command cmd;
  if (const char* env = std::getenv("BVTRACE_CACHE_DIR")) cfg.cache_dir = env;

  CLI::App app{"Exact BV-quantization engine", "bvtrace"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--hbar-order", cfg.hbar_order, "h truncation order (inclusive)")->check(CLI::Range(0, 256));
  app.add_option("--q-order", cfg.q_order, "q truncation order (inclusive)")->check(CLI::Range(0, 2000));
  app.add_option("--degree", cfg.degree, "degree bound for the command");
  app.add_option("--n", cfg.n, "number of canonical pairs")->check(CLI::Range(1, kMaxVars / 2));
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--cache-dir", cfg.cache_dir, "simplex cache directory (default $BVTRACE_CACHE_DIR)");
  app.add_option("--seed", cfg.seed, "seed for randomized checks");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--verify-cache", cfg.verify_cache, "recompute every cache record on load");

  for (const auto& [name, help] : kSubcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("args", cmd.args, "positional arguments");
    sub->positionals_at_end(false);
    if (name == "fedosov-check" || name == "dgbv-check") sub->add_option("--cases", cmd.cases, "number of instances");
    if (name == "dgbv-check") sub->add_flag("--random", cmd.random, "random spaces with the HRG check");
    if (name == "fock") sub->add_option("--op", cmd.op, "identity, energy or N:species:mode");
    sub->callback([&cmd, name = name] { cmd.name = name; });
  }

  auto emit_error = [&](int code, const std::string& kind, const std::string& message, std::optional<std::pair<int, int>> pos) {
    out.exit_code = code;
    json err{{"kind", kind}, {"message", message}};
    if (pos) {
      err["line"] = pos->first;
      err["column"] = pos->second;
    }
    if (cfg.format == "text") {
      out.err += "error: " + message + "\n";
    } else {
      json doc{{"schema", kSchema}, {"command", cmd.name}, {"error", err}, {"config", config_json(cfg)}};
      out.out = doc.dump(2) + "\n";
      out.err += "error: " + message + "\n";
    }
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out.out = app.help();
    return out;
  } catch (const CLI::ParseError& e) {
    emit_error(1, "usage", e.what(), std::nullopt);
    return out;
  }

  try {
    if (!cfg.cache_dir.empty()) {
      auto rep = load_simplex_cache(cfg.cache_dir, cfg.verify_cache);
      for (const auto& w : rep.warnings) out.err += "warning: " + w + "\n";
    }
    Outcome o = dispatch(cmd, cfg);
    if (!cfg.cache_dir.empty()) store_simplex_cache(cfg.cache_dir);
    if (cfg.format == "text") {
      out.out = render_text(o.result);
    } else {
      json doc{{"schema", kSchema}, {"command", cmd.name}, {"input", o.input}, {"result", o.result}, {"config", config_json(cfg)}};
      out.out = doc.dump(2) + "\n";
    }
    out.exit_code = o.failed ? 2 : 0;
  } catch (const ParseError& e) {
    emit_error(1, "syntax", e.what(), std::make_pair(e.line(), e.column()));
  } catch (const UsageError& e) {
    emit_error(1, "usage", e.what(), std::nullopt);
  } catch (const CacheMismatchError& e) {
    emit_error(2, "cache_mismatch", e.what(), std::nullopt);
  } catch (const UndecidableError& e) {
    emit_error(2, "undecidable", e.what(), std::nullopt);
  } catch (const DomainError& e) {
    emit_error(2, "domain", e.what(), std::nullopt);
  } catch (const json::exception& e) {
    emit_error(1, "usage", std::string("malformed JSON input: ") + e.what(), std::nullopt);
  } catch (const std::filesystem::filesystem_error& e) {
    emit_error(2, "io", e.what(), std::nullopt);
  } catch (const std::exception& e) {
    emit_error(2, "domain", e.what(), std::nullopt);
  }
  return out;
}

}  // namespace bvtrace
