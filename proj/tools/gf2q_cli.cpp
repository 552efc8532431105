// SPDX-License-Identifier: Apache-2.0
// gf2q: linear-system circuits, Simon pipelines and resource estimates from
// the command line. Reports are JSON (default) or CSV; output is written only
// after the command has finished.

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "gf2q/estimate.hpp"
#include "gf2q/gf2.hpp"
#include "gf2q/grover_simon.hpp"
#include "gf2q/linsolve.hpp"
#include "gf2q/polyq2.hpp"
#include "gf2q/simon.hpp"

using namespace gf2q;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kToolName = "gf2q";
constexpr const char* kToolVersion = "0.1.0";

// Tighter than the simulator default so oversized coherent runs fail with a
// resource error instead of exhausting memory.
constexpr std::size_t kCliEntryLimit = std::size_t{1} << 22;

enum Exit { kOk = 0, kUsage = 2, kParse = 3, kResource = 4, kInvariant = 5 };

// Missing or unreadable input files are reported like malformed ones.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

using CsvRow = std::vector<std::string>;

struct Report {
  ojson config;
  ojson result;
  CsvRow csv_header;
  std::vector<CsvRow> csv_rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string render(const std::string& command, const Global& g, Report& rep) {
  if (g.format == "csv") {
    std::string out;
    auto line = [&](const CsvRow& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
      out += "\n";
    };
    line(rep.csv_header);
    for (const auto& r : rep.csv_rows) line(r);
    return out;
  }
  ojson j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = command;
  j["seed"] = g.seed;
  j["params"] = rep.config;
  j["result"] = rep.result;
  return j.dump(2) + "\n";
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

// Prefix parse diagnostics with the file they came from.
template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

ojson read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s, const char* what) {
  auto bad = [&] { return ContractViolation(std::string(what) + ": expected N or A..B with 1 <= A <= B, got \"" + s + "\""); };
  auto num = [&](const std::string& t) {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 6) throw bad();
    return std::stoull(t);
  };
  const auto dots = s.find("..");
  std::uint64_t lo, hi;
  if (dots == std::string::npos) {
    lo = hi = num(s);
  } else {
    lo = num(s.substr(0, dots));
    hi = num(s.substr(dots + 2));
  }
  if (lo == 0 || hi < lo) throw bad();
  return {lo, hi};
}

ojson counts_json(const GateCounts& c) { return counts_to_json(c); }

ojson signed_json(const SignedCounts& c) {
  ojson j = ojson::object();
  for (const auto& [k, v] : c) j[std::string(mnemonic(k))] = v;
  return j;
}

GateCounts apply_deviation(GateCounts predicted, const std::vector<DeviationEntry>& devs) {
  for (GateKind k : kAllGateKinds) predicted.try_emplace(k, 0);
  for (const auto& d : devs)
    for (const auto& [k, v] : d.delta) predicted[k] = static_cast<std::uint64_t>(static_cast<std::int64_t>(predicted[k]) + v);
  return predicted;
}

bool same_three(const GateCounts& a, const GateCounts& b) {
  for (GateKind k : {GateKind::CNOT, GateKind::TOFFOLI, GateKind::FREDKIN})
    if ((a.count(k) ? a.at(k) : 0) != (b.count(k) ? b.at(k) : 0)) return false;
  return true;
}

std::string bits(std::uint64_t v, std::size_t n) { return Gf2Vector::from_u64(n, v).to_string(); }

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string matrix, variant = "alg2", mode = "enumerate", emit;
  bool classical = false, omit = false;
};

Report cmd_solve(const SolveArgs& a, const Global& g) {
  const bool classical = a.classical || a.variant == "classical";
  std::optional<Variant> v;
  if (!classical) v = variant_from_string(a.variant);
  if (a.mode != "sample" && a.mode != "enumerate") throw ContractViolation("--mode must be sample or enumerate");
  const auto mode = a.mode == "sample" ? SolveMode::SAMPLE : SolveMode::ENUMERATE;
  if (v == Variant::ALG1 && mode == SolveMode::ENUMERATE)
    throw ContractViolation("alg1 has no mark register; use --mode sample or another variant");
  if (classical && !a.emit.empty()) throw ContractViolation("--emit-circuit needs a circuit variant");

  auto in = open_input(a.matrix);
  auto [A, b] = with_path(a.matrix, [&] { return parse_system(in); });
  Report rep;
  rep.config = {{"matrix", a.matrix}, {"variant", classical ? "classical" : a.variant}, {"mode", a.mode},
                {"omit_redundant_range", a.omit}, {"m", A.rows()}, {"n", A.cols()}};
  const auto oracle = gauss_jordan(A, b);
  ojson r;
  rep.csv_header = {"solution"};
  auto list_solutions = [&](const Gf2Vector& special, const std::vector<Gf2Vector>& kernel) {
    if (kernel.size() > 16) throw ResourceError("solution set has 2^" + std::to_string(kernel.size()) + " members; limit is 2^16");
    GeneralSolution gs;
    gs.consistent = true;
    gs.special = special;
    gs.kernel_basis = kernel;
    ojson arr = ojson::array();
    for (const auto& x : enumerate_solutions(gs)) {
      arr.push_back(x.to_string());
      rep.csv_rows.push_back({x.to_string()});
    }
    return arr;
  };
  auto basis_json = [](const std::vector<Gf2Vector>& vs) {
    ojson arr = ojson::array();
    for (const auto& x : vs) arr.push_back(x.to_string());
    return arr;
  };

  if (classical) {
    r["rank"] = oracle.rank;
    r["consistent"] = oracle.consistent;
    r["pivot_cols"] = oracle.pivot_cols;
    if (oracle.consistent) {
      r["special"] = oracle.special.to_string();
      r["kernel_basis"] = basis_json(oracle.kernel_basis);
      r["solutions"] = list_solutions(oracle.special, oracle.kernel_basis);
    }
    rep.result = r;
    return rep;
  }

  BuildOptions opt;
  opt.omit_redundant_range = a.omit;
  auto lc = build_linsolve(*v, A.rows(), A.cols(), opt);
  auto res = solve_instance(lc, A, b, mode, g.seed);
  if (res.rank != oracle.rank || res.consistent != oracle.consistent)
    throw InvariantBreach("circuit rank/consistency disagrees with classical elimination");
  r["rank"] = res.rank;
  r["consistent"] = res.consistent;
  r["pivot_cols"] = res.pivot_cols;
  if (mode == SolveMode::ENUMERATE && res.consistent) {
    if (!same_span(res.kernel_basis, oracle.kernel_basis, A.cols()) || A.mul(res.special) != b)
      throw InvariantBreach("circuit solution set disagrees with classical elimination");
    r["special"] = res.special.to_string();
    r["kernel_basis"] = basis_json(res.kernel_basis);
    r["solutions"] = list_solutions(res.special, res.kernel_basis);
  }
  if (mode == SolveMode::SAMPLE && res.solution_sample) {
    if (A.mul(*res.solution_sample) != b) throw InvariantBreach("sampled solution does not satisfy the system");
    r["sample"] = {{"solution", res.solution_sample->to_string()}, {"probability", res.sample_probability}};
    rep.csv_rows.push_back({res.solution_sample->to_string()});
  }
  if (res.data_register_restored) {
    if (!*res.data_register_restored) throw InvariantBreach("alg3 did not restore the data register");
    r["data_register_restored"] = true;
  }
  const auto built = count_gates(lc.circuit);
  const auto predicted = predicted_counts(*v, A.rows(), A.cols());
  const auto devs = expected_deviation(*v, A.rows(), A.cols(), opt);
  ojson dj = ojson::array();
  for (const auto& d : devs) dj.push_back({{"id", d.id}, {"reason", d.reason}, {"delta", signed_json(d.delta)}});
  r["width"] = lc.circuit.width();
  r["counts"] = counts_json(built);
  r["predicted_counts"] = counts_json(predicted);
  r["deviations"] = dj;
  r["matches_predicted"] = same_three(built, apply_deviation(predicted, devs));
  r["resources"] = to_json(count_resources(lc.circuit));
  if (!a.emit.empty()) {
    std::ofstream out(a.emit);
    if (!out) throw InputError("cannot write " + a.emit);
    serialize(lc.circuit, out);
    r["circuit_file"] = a.emit;
  }
  rep.result = r;
  return rep;
}

// ------------------------------------------------------------------ simon

struct SimonArgs {
  std::size_t n = 0, parallel = 0, trials = 100, entry_limit = kCliEntryLimit;
  std::string periods, mode = "sampled";
  double p0 = -1;
};

std::vector<Gf2Vector> read_period_lines(std::istream& in, std::size_t n) {
  std::vector<Gf2Vector> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    const auto tok = line.substr(first, last - first + 1);
    if (tok.size() != n) throw ParseError(lineno, "period has " + std::to_string(tok.size()) + " bits, expected " + std::to_string(n));
    if (tok.find_first_not_of("01") != std::string::npos) throw ParseError(lineno, "periods are strings of 0 and 1");
    out.push_back(Gf2Vector::from_string(tok));
  }
  return out;
}

std::vector<Gf2Vector> read_periods(const std::string& path, std::size_t n) {
  auto in = open_input(path);
  return with_path(path, [&] { return read_period_lines(in, n); });
}

Report cmd_simon(const SimonArgs& a, const Global& g) {
  if (a.n == 0 || a.n > kMaxOracleBits) throw ContractViolation("--n must be in 1..20");
  const auto mode = simon_mode_from_string(a.mode);
  const std::size_t m = a.parallel ? a.parallel : default_simon_parallel(a.n);
  if (a.trials == 0) throw ContractViolation("--trials must be >= 1");
  if (a.p0 != -1) check_p0(a.p0);
  const auto periods = read_periods(a.periods, a.n);
  const auto oracle = make_oracle(a.n, periods, derive_seed(g.seed, 0));
  const double eps = a.n <= kMaxEpsilonBits ? epsilon_f(oracle) : kGenericP0;
  const double p0 = a.p0 == -1 ? eps : a.p0;

  Report rep;
  ojson planted = ojson::array();
  for (const auto& p : oracle.period_set) planted.push_back(p.to_string());
  rep.config = {{"n", a.n}, {"periods_file", a.periods}, {"planted", planted}, {"parallel", m},
                {"trials", a.trials}, {"mode", a.mode}, {"p0", p0}, {"entry_limit", a.entry_limit}};
  rep.csv_header = {"trial", "matches", "rank", "recovered"};
  std::size_t ok = 0;
  ojson first;
  std::optional<SimonSampler> sampler;
  std::optional<Alg2Kernel> solver;
  if (mode == SimonMode::SAMPLED) {
    sampler.emplace(oracle);
    solver.emplace(m, a.n);
  }
  for (std::size_t t = 0; t < a.trials; ++t) {
    const auto seed = derive_seed(g.seed, t + 1);
    const auto r = mode == SimonMode::SAMPLED ? parallel_simon_sampled(oracle, *sampler, *solver, seed)
                                              : parallel_simon(oracle, m, mode, seed, a.entry_limit);
    ok += r.matches_planted;
    std::string rec;
    ojson arr = ojson::array();
    for (const auto& p : r.periods) {
      rec += (rec.empty() ? "" : ";") + p.to_string();
      arr.push_back(p.to_string());
    }
    if (t == 0) first = arr;
    rep.csv_rows.push_back({std::to_string(t), r.matches_planted ? "1" : "0", std::to_string(r.rank), rec});
  }
  ojson res;
  res["recovered"] = first;
  res["success_rate"] = static_cast<double>(ok) / static_cast<double>(a.trials);
  res["exact_mass"] = a.n <= 6 ? ojson(exact_recovery_probability(oracle, m)) : ojson(nullptr);
  res["bound"] = simon_recovery_bound(a.n, p0, m);
  res["epsilon"] = eps;
  res["threshold"] = simon_row_threshold(a.n, p0);
  rep.result = res;
  return rep;
}

// ------------------------------------------------------------------ grover-simon

template <class T>
T get_or(const ojson& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("config field \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const ojson& j, std::initializer_list<const char*> known) {
  if (!j.is_object()) throw ContractViolation("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool found = false;
    for (const char* name : known) found = found || k == name;
    if (!found) throw ContractViolation("unknown config field \"" + k + "\"");
  }
}

Report cmd_grover_simon(const std::string& path, const Global& g) {
  const auto cj = read_json(path);
  reject_unknown(cj, {"m", "n", "ell", "pairs", "iterations", "instances", "classifier", "entry_limit", "retries", "fx"});
  const auto m = get_or<std::size_t>(cj, "m", 2), n = get_or<std::size_t>(cj, "n", 2);
  const auto ell = get_or<std::size_t>(cj, "ell", 4), pairs = get_or<std::size_t>(cj, "pairs", 0);
  const auto iterations = get_or<std::size_t>(cj, "iterations", 0), instances = get_or<std::size_t>(cj, "instances", 1);
  const auto classifier = classifier_mode_from_string(get_or<std::string>(cj, "classifier", "uncompute"));
  const auto entry_limit = get_or<std::size_t>(cj, "entry_limit", kCliEntryLimit);
  const auto retries = get_or<std::size_t>(cj, "retries", 64);
  if (m == 0 || m > 3 || n == 0 || n > 2) throw ContractViolation("grover-simon: toy scale needs 1 <= m <= 3, 1 <= n <= 2");
  if (ell == 0 || ell > 7) throw ContractViolation("grover-simon: ell must be in 1..7");
  if (instances == 0) throw ContractViolation("grover-simon: instances must be >= 1");
  if (retries == 0) throw ContractViolation("grover-simon: retries must be >= 1");
  std::optional<FxInstance> explicit_fx;
  if (cj.contains("fx")) {
    const auto& f = cj.at("fx");
    FxInstance fx;
    fx.m = m;
    fx.n = n;
    fx.E = get_or<std::vector<std::vector<std::uint64_t>>>(f, "E", {});
    fx.k0 = get_or<std::uint64_t>(f, "k0", 0);
    fx.k1 = get_or<std::uint64_t>(f, "k1", 0);
    fx.k2 = get_or<std::uint64_t>(f, "k2", 0);
    validate(fx);
    explicit_fx = fx;
  }

  Report rep;
  rep.config = {{"config_file", path}, {"m", m}, {"n", n}, {"ell", ell},
                {"pairs", pairs ? pairs : default_pairs(m, n, ell)},
                {"iterations", iterations ? iterations : grover_iterations(m)},
                {"instances", explicit_fx ? 1 : instances}, {"classifier", to_string(classifier)},
                {"entry_limit", entry_limit}, {"retries", retries}, {"explicit_fx", explicit_fx.has_value()}};
  rep.csv_header = {"instance", "k0", "k1", "k0_found", "k1_found", "exact_mass", "key_mass", "ideal_key_mass",
                    "promise_holds"};
  ojson trials = ojson::array(), recovered = ojson::array();
  double mass = 0;
  std::size_t hits = 0;
  const std::size_t count = explicit_fx ? 1 : instances;
  for (std::size_t i = 0; i < count; ++i) {
    GroverSimonConfig cfg;
    bool promise = true;
    if (explicit_fx) {
      cfg.fx = *explicit_fx;
      promise = fx_promise_holds(cfg.fx);
    } else {
      auto d = random_fx(m, n, derive_seed(g.seed, 2 * i), retries);
      cfg.fx = d.fx;
      promise = d.promise_holds;
    }
    cfg.ell = ell;
    cfg.pairs = pairs;
    cfg.iterations = iterations;
    cfg.seed = derive_seed(g.seed, 2 * i + 1);
    cfg.classifier = classifier;
    cfg.entry_limit = entry_limit;
    const auto r = grover_meets_simon(cfg);
    mass += r.success_probability;
    const bool hit = r.k0_found == cfg.fx.k0 && r.k1_found == cfg.fx.k1;
    hits += hit;
    recovered.push_back({{"k0", r.k0_found}, {"k1", r.k1_found}});
    trials.push_back({{"k0", cfg.fx.k0},
                      {"k1", cfg.fx.k1},
                      {"k2", cfg.fx.k2},
                      {"k0_found", r.k0_found},
                      {"k1_found", r.k1_found},
                      {"exact_mass", r.success_probability},
                      {"key_mass", r.key_mass},
                      {"accepted_mass", r.accepted_mass},
                      {"ideal_key_mass", r.ideal_key_mass},
                      {"marked_keys", r.marked_keys},
                      {"marking_is_key_only", r.marking_is_key_only},
                      {"promise_holds", promise},
                      {"width", r.width},
                      {"max_entries", r.max_entries},
                      {"counts", counts_json(r.counts)}});
    rep.csv_rows.push_back({std::to_string(i), std::to_string(cfg.fx.k0), std::to_string(cfg.fx.k1),
                            std::to_string(r.k0_found), std::to_string(r.k1_found), fmt(r.success_probability),
                            fmt(r.key_mass), fmt(r.ideal_key_mass), promise ? "1" : "0"});
  }
  ojson res;
  res["recovered"] = recovered;
  res["success_rate"] = static_cast<double>(hits) / static_cast<double>(count);
  res["exact_mass"] = mass / static_cast<double>(count);
  res["bound"] = kGroverSimonSuccessBound;
  res["classifier_soundness"] = classifier_soundness(m, n);
  res["analysis_ell"] = analysis_ell(n);
  res["trials"] = trials;
  rep.result = res;
  return rep;
}

// ------------------------------------------------------------------ polyq2

Report cmd_polyq2(const std::string& path, const Global& g) {
  const auto cj = read_json(path);
  reject_unknown(cj, {"m", "n", "c", "instances", "iterations", "engine", "simon_parallel", "entry_limit", "retries",
                      "F", "g", "i0", "s"});
  const auto m = get_or<std::size_t>(cj, "m", 1), n = get_or<std::size_t>(cj, "n", 2);
  const auto c = get_or<std::size_t>(cj, "c", 0);
  const auto instances = get_or<std::size_t>(cj, "instances", 1);
  const auto iterations = get_or<std::size_t>(cj, "iterations", 0);
  const auto engine_s = get_or<std::string>(cj, "engine", "block");
  const auto simon_parallel = get_or<std::size_t>(cj, "simon_parallel", 0);
  const auto entry_limit = get_or<std::size_t>(cj, "entry_limit", kCliEntryLimit);
  const auto retries = get_or<std::size_t>(cj, "retries", 64);
  if (c == 0) throw ContractViolation("polyq2: config needs an explicit c >= 1");
  if (m == 0 || m > 8 || n == 0 || n > 6) throw ContractViolation("polyq2: need 1 <= m <= 8 and 1 <= n <= 6");
  if (engine_s != "block" && engine_s != "full") throw ContractViolation("polyq2: engine must be block or full");
  if (instances == 0 || retries == 0) throw ContractViolation("polyq2: instances and retries must be >= 1");
  const auto engine = engine_s == "full" ? PolyQ2Engine::FULL : PolyQ2Engine::BLOCK;
  const bool is_explicit = cj.contains("F");
  std::optional<PolyQ2Config> explicit_cfg;
  if (is_explicit) {
    PolyQ2Config p;
    p.m = m;
    p.n = n;
    p.c = c;
    p.F = get_or<std::vector<std::vector<std::uint64_t>>>(cj, "F", {});
    p.g = get_or<std::vector<std::uint64_t>>(cj, "g", {});
    p.i0 = get_or<std::uint64_t>(cj, "i0", 0);
    p.s = get_or<std::uint64_t>(cj, "s", 0);
    validate(p);
    if (periods_of_table(n, shifted_difference(p, p.i0)) != std::vector<Gf2Vector>{Gf2Vector::from_u64(n, p.s)})
      throw ContractViolation("polyq2: f_i0 ^ g must have period set exactly {s}");
    explicit_cfg = p;
  }

  Report rep;
  const std::size_t count = is_explicit ? 1 : instances;
  rep.config = {{"config_file", path}, {"m", m}, {"n", n}, {"c", c}, {"instances", count},
                {"iterations", iterations ? iterations : grover_iterations(m)}, {"engine", engine_s},
                {"simon_parallel", simon_parallel ? simon_parallel : default_simon_parallel(n)},
                {"entry_limit", entry_limit}, {"retries", retries}, {"explicit", is_explicit}};
  rep.csv_header = {"instance", "i0", "s", "i0_found", "r", "s_found", "exact_mass", "max_false_positive",
                    "promise"};
  ojson trials = ojson::array(), recovered = ojson::array();
  double mass = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < count; ++i) {
    PolyQ2Config cfg;
    bool promise_ok = true;
    if (explicit_cfg) {
      cfg = *explicit_cfg;
      promise_ok = promise_check(cfg) <= kPolyQ2PromiseBound;
    } else {
      auto d = random_polyq2(m, n, c, derive_seed(g.seed, 2 * i), retries);
      cfg = d.cfg;
      promise_ok = d.promise_holds;
    }
    cfg.seed = derive_seed(g.seed, 2 * i + 1);
    cfg.iterations = iterations;
    cfg.simon_parallel = simon_parallel;
    const auto r = alg_polyq2(cfg, engine, entry_limit);
    mass += r.success_probability;
    const bool hit = r.success && r.s_found == cfg.s;
    hits += hit;
    ojson sf = r.s_found ? ojson(*r.s_found) : ojson(nullptr);
    recovered.push_back({{"i0", r.i0_found}, {"r", r.r}, {"s", sf}});
    ojson readout = ojson::object();
    for (const auto& [k, p] : r.readout) readout[bits(k, m + 1)] = p;
    trials.push_back({{"i0", cfg.i0},
                      {"s", cfg.s},
                      {"i0_found", r.i0_found},
                      {"r", r.r},
                      {"s_found", sf},
                      {"exact_mass", r.success_probability},
                      {"max_false_positive", r.max_false_positive},
                      {"promise", r.promise},
                      {"promise_holds", promise_ok},
                      {"readout", readout}});
    rep.csv_rows.push_back({std::to_string(i), std::to_string(cfg.i0), std::to_string(cfg.s),
                            std::to_string(r.i0_found), r.r ? "1" : "0", r.s_found ? std::to_string(*r.s_found) : "",
                            fmt(r.success_probability), fmt(r.max_false_positive), fmt(r.promise)});
  }
  ojson res;
  res["recovered"] = recovered;
  res["success_rate"] = static_cast<double>(hits) / static_cast<double>(count);
  res["exact_mass"] = mass / static_cast<double>(count);
  res["bound"] = polyq2_error_bound(n, c);
  res["trials"] = trials;
  rep.result = res;
  return rep;
}

// ------------------------------------------------------------------ counts

Report cmd_counts(const std::string& variant, const std::string& mr, const std::string& nr, bool omit) {
  const auto v = variant_from_string(variant);
  const auto [m0, m1] = parse_range(mr, "--m");
  const auto [n0, n1] = parse_range(nr, "--n");
  if (m1 > 40 || n1 > 40) throw ContractViolation("counts builds circuits; keep m and n <= 40");
  BuildOptions opt;
  opt.omit_redundant_range = omit;
  Report rep;
  rep.config = {{"variant", variant}, {"m", mr}, {"n", nr}, {"omit_redundant_range", omit}};
  rep.csv_header = {"m", "n", "built_CNOT", "built_TOFFOLI", "built_FREDKIN", "predicted_CNOT",
                    "predicted_TOFFOLI", "predicted_FREDKIN", "deviations", "matches", "ratio"};
  ojson rows = ojson::array();
  for (auto m = m0; m <= m1; ++m) {
    for (auto n = n0; n <= n1; ++n) {
      const auto built = count_gates(build_linsolve(v, m, n, opt).circuit);
      const auto predicted = predicted_counts(v, m, n);
      const auto devs = expected_deviation(v, m, n, opt);
      const bool matches = same_three(built, apply_deviation(predicted, devs));
      const double ratio = static_cast<double>(report_from_counts(built).cnot_equivalent) /
                           static_cast<double>(report_from_counts(predicted).cnot_equivalent);
      std::string ids;
      ojson dj = ojson::array();
      for (const auto& d : devs) {
        ids += (ids.empty() ? "" : ";") + d.id;
        dj.push_back(d.id);
      }
      rows.push_back({{"m", m}, {"n", n}, {"built", counts_json(built)}, {"predicted", counts_json(predicted)},
                      {"deviations", dj}, {"matches", matches}, {"ratio", ratio}});
      auto at = [](const GateCounts& c, GateKind k) { return std::to_string(c.count(k) ? c.at(k) : 0); };
      rep.csv_rows.push_back({std::to_string(m), std::to_string(n), at(built, GateKind::CNOT),
                              at(built, GateKind::TOFFOLI), at(built, GateKind::FREDKIN),
                              at(predicted, GateKind::CNOT), at(predicted, GateKind::TOFFOLI),
                              at(predicted, GateKind::FREDKIN), ids, matches ? "1" : "0", fmt(ratio)});
      if (!matches) throw InvariantBreach("built counts differ from predicted + deviations at m=" + std::to_string(m) +
                                          ", n=" + std::to_string(n));
    }
  }
  rep.result = {{"rows", rows}};
  return rep;
}

// ------------------------------------------------------------------ estimate

Report cmd_estimate(std::uint64_t n, std::uint64_t c, double per_cnot, double budget) {
  if (n == 0) throw ContractViolation("--n must be >= 1");
  if (c == 0) throw ContractViolation("--c must be >= 1");
  if (n > 1000000 || c > 1000) throw ContractViolation("--n <= 10^6 and --c <= 1000");
  if (!(per_cnot > 0)) throw ContractViolation("--per-cnot-seconds must be > 0");
  if (!(budget >= 0)) throw ContractViolation("--budget-seconds must be >= 0");
  Report rep;
  rep.config = {{"n", n}, {"c", c}, {"per_cnot_seconds", per_cnot}, {"budget_seconds", budget}};
  rep.csv_header = {"label", "n", "m", "c", "cnot_equivalent", "serial_seconds", "within_budget", "leading_term"};
  std::vector<FeasibilityRow> rows{estimate_row(n, c, per_cnot, budget)};
  for (auto& r : preset_rows(per_cnot, budget)) rows.push_back(r);
  ojson arr = ojson::array();
  for (const auto& r : rows) {
    arr.push_back({{"label", r.label}, {"n", r.n}, {"m", r.m}, {"c", r.c}, {"cnot_equivalent", r.cnot_equivalent},
                   {"serial_seconds", r.serial_seconds}, {"within_budget", r.within_budget},
                   {"leading_term", r.leading_term}});
    rep.csv_rows.push_back({r.label, std::to_string(r.n), std::to_string(r.m), fmt(r.c),
                            std::to_string(r.cnot_equivalent), fmt(r.serial_seconds), r.within_budget ? "1" : "0",
                            fmt(r.leading_term)});
  }
  ojson res;
  res["rows"] = arr;
  if (n >= 16) {
    const double ratio = doubling_ratio(n, c);
    res["cubic_check"] = {{"n", n}, {"ratio_2n_over_n", ratio}, {"within_15_percent", std::abs(ratio / 8.0 - 1.0) < 0.15}};
  }
  rep.result = res;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GF(2) linear-system circuits, Simon pipelines and resource estimates"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "base seed for every random choice");
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}));

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve A x = b with a circuit variant or classically");
  solve->add_option("--matrix", sa.matrix, "system file: \"m n\", m rows of 0/1, optional b row")->required();
  solve->add_option("--variant", sa.variant, "alg1, alg2, alg3 or classical")
      ->check(CLI::IsMember({"alg1", "alg2", "alg3", "classical"}));
  solve->add_flag("--classical", sa.classical, "classical elimination only");
  solve->add_option("--mode", sa.mode, "sample or enumerate")->check(CLI::IsMember({"sample", "enumerate"}));
  solve->add_option("--emit-circuit", sa.emit, "write the circuit in QC1 text form");
  solve->add_option("--report", g.out, "same as the global --out");
  solve->add_flag("--omit-redundant-range", sa.omit, "restrict the storage copy to rows k < j");

  SimonArgs si;
  auto* simon = app.add_subcommand("simon", "parallel Simon on a coset oracle with planted periods");
  simon->add_option("--n", si.n, "oracle width")->required();
  simon->add_option("--periods", si.periods, "file with one period bit string per line")->required();
  simon->add_option("--parallel", si.parallel, "Simon rows per trial (default ceil(10.4 n))");
  simon->add_option("--trials", si.trials, "number of trials");
  simon->add_option("--mode", si.mode, "sampled or coherent")->check(CLI::IsMember({"sampled", "coherent"}));
  simon->add_option("--entry-limit", si.entry_limit, "state entry limit for coherent mode");
  simon->add_option("--p0", si.p0, "collision bound for the success bound (default: measured epsilon)");

  std::string gs_cfg, pq_cfg;
  auto* gsim = app.add_subcommand("grover-simon", "Grover key search with Simon-based classifier on toy FX");
  gsim->add_option("--config", gs_cfg, "JSON config")->required();
  auto* pq = app.add_subcommand("polyq2", "asymmetric period search with the rank test oracle");
  pq->add_option("--config", pq_cfg, "JSON config")->required();

  std::string cv = "alg2", cm, cn;
  bool comit = false;
  auto* counts = app.add_subcommand("counts", "built vs predicted gate counts over an (m, n) grid");
  counts->add_option("--variant", cv, "alg1, alg2 or alg3")->check(CLI::IsMember({"alg1", "alg2", "alg3"}));
  counts->add_option("--m", cm, "N or A..B")->required();
  counts->add_option("--n", cn, "N or A..B")->required();
  counts->add_flag("--omit-redundant-range", comit, "restrict the storage copy to rows k < j");

  std::uint64_t en = 0, ec = 1;
  double per_cnot = kDefaultPerCnotSeconds, budget = kDefaultBudgetSeconds;
  auto* est = app.add_subcommand("estimate", "serial CNOT runtime of ALG2 at m = c n, plus 64-bit presets");
  est->add_option("--n", en, "columns")->required();
  est->add_option("--c", ec, "rows per column");
  est->add_option("--per-cnot-seconds", per_cnot, "seconds per CNOT");
  est->add_option("--budget-seconds", budget, "coherence budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Report rep;
    std::string name;
    if (*solve) {
      name = "solve";
      rep = cmd_solve(sa, g);
    } else if (*simon) {
      name = "simon";
      rep = cmd_simon(si, g);
    } else if (*gsim) {
      name = "grover-simon";
      rep = cmd_grover_simon(gs_cfg, g);
    } else if (*pq) {
      name = "polyq2";
      rep = cmd_polyq2(pq_cfg, g);
    } else if (*counts) {
      name = "counts";
      rep = cmd_counts(cv, cm, cn, comit);
    } else {
      name = "estimate";
      rep = cmd_estimate(en, ec, per_cnot, budget);
    }
    const auto text = render(name, g, rep);
    if (g.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(g.out, std::ios::binary);
      if (!out || !(out << text)) throw InputError("cannot write " + g.out);
    }
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kParse;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const InvariantBreach& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
}
