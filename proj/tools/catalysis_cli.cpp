#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "catalysis/catalysis.hpp"
#include "catalysis/io/json.hpp"

using namespace catalysis;
using io::Json;

namespace {

enum Exit { ok = 0, input_error = 1, verification_failure = 2 };

struct Config {
  std::string input;
  std::string output;
  std::string dump;
  std::optional<double> epsilon;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  bool timings = false;
};

struct Outcome {
  Json report;
  int code = ok;
};

std::optional<std::size_t> cap_override(const Config& cfg) {
  if (cfg.cap) return cfg.cap;
  if (const char* env = std::getenv("CATALYSIS_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw ValidationError("CATALYSIS_DIM_CAP: expected a positive integer");
    return static_cast<std::size_t>(v);
  }
  return std::nullopt;
}

Json read_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw io::SchemaError("input", std::string("malformed JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file " + path);
  out << text;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

/// Flag value, else the input field, else nothing.
template <class T>
std::optional<T> pick(const std::optional<T>& flag, const Json& in, const char* key) {
  if (flag) return flag;
  if (const Json* p = io::optional_field(in, key)) {
    if constexpr (std::is_same_v<T, double>) return io::number(*p, std::string("input.") + key);
    else return io::count(*p, std::string("input.") + key);
  }
  return std::nullopt;
}

bool is_classical(const Json& j) { return j.is_array(); }

Json steps_json(const std::vector<TTransformStep>& steps) {
  Json out = Json::array();
  for (const auto& s : steps) out.push_back(Json{{"j", s.j}, {"k", s.k}, {"t", s.t}});
  return out;
}

Outcome cmd_entropy(const Json& in, const Config&) {
  const Json& s = io::field(in, "state", "input");
  Json r{{"command", "entropy"}};
  if (is_classical(s)) {
    const auto p = io::probability(s, "input.state");
    r["kind"] = "classical";
    r["dimension"] = p.dimension();
    r["H"] = shannon_entropy(p);
  } else {
    const auto rho = io::density(s, "input.state");
    r["kind"] = "quantum";
    r["dimension"] = rho.dimension();
    r["H"] = von_neumann_entropy(rho);
    r["spectrum"] = io::array(rho.eigenvalues());
  }
  r["units"] = "nats";
  return {r};
}

std::vector<double> spectrum_of(const Json& j, const std::string& path) {
  if (is_classical(j)) return sorted_descending(io::probability(j, path).entries());
  return io::density(j, path).eigenvalues();
}

Outcome cmd_majorize(const Json& in, const Config&) {
  const auto a = spectrum_of(io::field(in, "p", "input"), "input.p");
  const auto b = spectrum_of(io::field(in, "p_prime", "input"), "input.p_prime");
  if (a.size() != b.size()) throw DimensionMismatch("majorize: p and p_prime differ in dimension");
  const double h = shannon_entropy(a);
  const double hp = shannon_entropy(b);
  Json r{{"command", "majorize"},
         {"forward", majorizes(a, b)},
         {"backward", majorizes(b, a)},
         {"H", h},
         {"H_prime", hp},
         {"delta_H", hp - h}};
  if (r["forward"].get<bool>()) r["chain"] = steps_json(t_transform_chain(a, b));
  return {r};
}

Outcome cmd_schur_horn(const Json& in, const Config&) {
  const auto rho = io::density(io::field(in, "rho", "input"), "input.rho");
  const auto rp = io::density(io::field(in, "rho_prime", "input"), "input.rho_prime");
  const auto plan = schur_horn_unitary(rho, rp);
  const auto sp = rp.spectrum();
  const Matrix moved = sp.vectors.adjoint() * plan.dense * rho.matrix() * plan.dense.adjoint() * sp.vectors;
  double diag = 0.0;
  for (std::size_t i = 0; i < sp.values.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    diag = std::max(diag, std::abs(moved(ii, ii).real() - sp.values[i]));
  }
  const double unit = unitarity_residual(plan.dense);
  Json r{{"command", "schur-horn"},
         {"unitary", io::to_json(plan.dense)},
         {"chain", steps_json(plan.steps)},
         {"chain_length", plan.steps.size()},
         {"unitarity_residual", unit},
         {"diagonal_residual", diag},
         {"pass", unit <= 1e-9 && diag <= 1e-9}};
  return {r, r["pass"].get<bool>() ? ok : verification_failure};
}

Outcome cmd_typical(const Json& in, const Config& cfg) {
  const Json& s = io::field(in, "p", "input");
  std::vector<double> p;
  if (is_classical(s)) {
    const auto pv = io::probability(s, "input.p");
    p.assign(pv.entries().begin(), pv.entries().end());
  } else {
    p = io::density(s, "input.p").eigenvalues();
  }
  const auto n = pick(cfg.n, in, "n");
  if (!n) throw io::SchemaError("input.n", "missing field (or pass --n)");
  const double delta = io::number(io::field(in, "delta", "input"), "input.delta");
  const auto t = typical_truncate(p, *n, delta);
  const auto b = projector_size_bounds(t);
  const double hoeff = hoeffding_tail_bound(p, *n, delta);
  Json classes = Json::array();
  for (const auto& c : t.classes) {
    classes.push_back(Json{{"counts", c.counts},
                           {"multiplicity", c.multiplicity},
                           {"probability", c.probability()},
                           {"kept", c.kept}});
  }
  const bool in_bracket = b.count >= b.lower * (1.0 - 1e-12) && b.count <= b.upper * (1.0 + 1e-12);
  const bool in_window = b.count == 0.0 || (b.min_kept_probability >= b.eigenvalue_floor * (1.0 - 1e-12) &&
                                            b.max_kept_probability <= b.eigenvalue_ceiling * (1.0 + 1e-12));
  Json r{{"command", "typical"},
         {"n", *n},
         {"delta", delta},
         {"H", t.entropy},
         {"kept_count", b.count},
         {"count_lower", b.lower},
         {"count_upper", b.upper},
         {"eigenvalue_floor", b.eigenvalue_floor},
         {"eigenvalue_ceiling", b.eigenvalue_ceiling},
         {"min_kept_probability", io::real(b.min_kept_probability)},
         {"max_kept_probability", b.max_kept_probability},
         {"tail_mass", t.tail_mass},
         {"hoeffding_bound", hoeff},
         {"count_in_bracket", in_bracket},
         {"eigenvalues_in_window", in_window},
         {"tail_within_hoeffding", t.tail_mass <= hoeff + 1e-15},
         {"classes", classes}};
  return {r};
}

template <class Options>
void mode(Options& o, const Config& cfg, const Json& in) {
  o.epsilon = pick(cfg.epsilon, in, "epsilon");
  o.forced_n = pick(cfg.n, in, "n");
  if (cfg.epsilon && !cfg.n) o.forced_n.reset();
  if (cfg.n && !cfg.epsilon) o.epsilon.reset();
  if (o.epsilon && o.forced_n) throw ValidationError("--epsilon and --n are mutually exclusive");
  if (!o.epsilon && !o.forced_n) throw ValidationError("one of --epsilon or --n is required");
  if (auto cap = cap_override(cfg)) o.cap = *cap;
}

Outcome cmd_classical(const Json& in, const Config& cfg) {
  const auto p = io::probability(io::field(in, "p", "input"), "input.p");
  const auto pp = io::probability(io::field(in, "p_prime", "input"), "input.p_prime");
  ClassicalOptions o;
  mode(o, cfg, in);
  Stopwatch clock;
  auto [cat, perm] = build_classical_catalyst(p, pp, o);
  const double build = clock.lap();
  auto [joint, rep] = apply_protocol(p, cat, perm);
  rep.timings.insert(rep.timings.begin(), {"build", build});
  rep.timings.emplace_back("protocol", clock.lap());
  Json r{{"command", "classical-transition"},
         {"kind", "classical"},
         {"n", cat.n},
         {"perturbed", cat.perturbed},
         {"eta", cat.eta},
         {"joint_layout", io::to_json(perm.layout)},
         {"mixture_size", cat.r_dim()},
         {"report", io::to_json(rep, cfg.timings)}};
  if (!cfg.dump.empty()) {
    const Json dump{{"kind", "classical"},
                    {"p", io::array(p.entries())},
                    {"p_prime", io::array(pp.entries())},
                    {"catalyst", io::array(cat.q)},
                    {"permutation", perm.composed().image()},
                    {"epsilon", cat.eps_certified}};
    write_text(cfg.dump, render(dump));
  }
  return {r, rep.pass ? ok : verification_failure};
}

Outcome cmd_quantum(const Json& in, const Config& cfg) {
  const auto rho = io::density(io::field(in, "rho", "input"), "input.rho");
  const auto rp = io::density(io::field(in, "rho_prime", "input"), "input.rho_prime");
  QuantumOptions o;
  mode(o, cfg, in);
  Stopwatch clock;
  const auto cat = build_quantum_catalyst(rho, rp, o);
  const double build = clock.lap();
  auto run = apply_quantum_protocol(rho, cat);
  run.report.timings.insert(run.report.timings.begin(), {"build", build});
  Json r{{"command", "quantum-transition"},
         {"kind", "quantum"},
         {"n", cat.n},
         {"perturbed", cat.perturbed},
         {"eta", cat.eta},
         {"joint_layout", io::to_json(cat.layout())},
         {"stage_checks",
          {{"sigma1_after_stage_a", run.stage_a_residual},
           {"system_after_stage_a", run.chi_bar_residual},
           {"register_marginal", run.r_marginal_residual},
           {"dephased_output", run.dephased_residual},
           {"per_site_bound", run.per_site_bound}}},
         {"report", io::to_json(run.report, cfg.timings)}};
  if (!cfg.dump.empty()) {
    const Json dump{{"kind", "quantum"},
                    {"rho", io::to_json(rho.matrix())},
                    {"rho_prime", io::to_json(rp.matrix())},
                    {"catalyst", io::to_json(cat.catalyst_state())},
                    {"unitary", io::to_json(cat.composed())},
                    {"epsilon", cat.eps_certified}};
    write_text(cfg.dump, render(dump));
  }
  return {r, run.report.pass ? ok : verification_failure};
}

Outcome cmd_verify(const Json& in, const Config& cfg) {
  const Json& kind = io::field(in, "kind", "input");
  if (!kind.is_string()) throw io::SchemaError("input.kind", "expected \"classical\" or \"quantum\"");
  const double eps = pick(cfg.epsilon, in, "epsilon").value_or(0.0);
  TransitionReport rep;
  if (kind.get<std::string>() == "classical") {
    const auto p = io::probability(io::field(in, "p", "input"), "input.p");
    const auto pp = io::probability(io::field(in, "p_prime", "input"), "input.p_prime");
    const auto q = io::probability(io::field(in, "catalyst", "input"), "input.catalyst");
    auto image = io::indices(io::field(in, "permutation", "input"), "input.permutation");
    const Permutation perm = io::wrap("input.permutation", [&] { return Permutation(std::move(image)); });
    const SubsystemLayout layout({p.dimension(), q.dimension()}, {"S", "C"});
    const auto joint = kron(p.entries(), q.entries());
    if (perm.size() != joint.size()) throw io::SchemaError("input.permutation", "length must equal dim(p) * dim(catalyst)");
    rep = verify_catalytic(joint, perm.apply(joint), layout, pp.entries(), eps);
  } else if (kind.get<std::string>() == "quantum") {
    const auto rho = io::density(io::field(in, "rho", "input"), "input.rho");
    const auto rp = io::density(io::field(in, "rho_prime", "input"), "input.rho_prime");
    const auto sigma = io::density(io::field(in, "catalyst", "input"), "input.catalyst");
    const Matrix u = io::matrix(io::field(in, "unitary", "input"), "input.unitary");
    rep = io::wrap("input.unitary", [&] { return verify_definition1(rho, rp, sigma, u, eps); });
  } else {
    throw io::SchemaError("input.kind", "expected \"classical\" or \"quantum\"");
  }
  Json r{{"command", "verify"}, {"kind", kind}, {"report", io::to_json(rep, cfg.timings)}};
  return {r, rep.pass ? ok : verification_failure};
}

Outcome cmd_work(const Json& in, const Config& cfg) {
  const Json& hj = io::field(in, "H", "input");
  const Hamiltonian h = hj.is_array() ? io::wrap("input.H", [&] { return Hamiltonian::diagonal(io::numbers(hj, "input.H")); })
                                      : io::wrap("input.H", [&] { return Hamiltonian(io::matrix(hj, "input.H")); });
  const auto rho = io::density(io::field(in, "rho", "input"), "input.rho");
  if (rho.dimension() != h.dimension()) throw DimensionMismatch("work: rho and H differ in dimension");
  const auto samples = pick<std::size_t>(std::nullopt, in, "samples").value_or(1000);
  const std::uint64_t seed = cfg.seed.value_or(default_work_seed);
  const auto w = catalytic_work(rho, h, samples, seed);
  const bool passive = is_passive(rho, h);
  const double erg = ergotropy(rho, h);
  const bool infinite = std::isinf(w.beta);
  Json r{{"command", "work"},
         {"beta", io::real(w.beta)},
         {"beta_infinite", infinite},
         {"energy", w.energy},
         {"gibbs_energy", w.gibbs_energy},
         {"asymptotic_work", w.asymptotic},
         {"catalytic_work", w.value},
         {"ergotropy", erg},
         {"passive", passive},
         {"monte_carlo",
          {{"seed", w.seed}, {"samples", w.samples}, {"min_gap", io::real(w.min_gap)}, {"violations", w.violations}}}};
  return {r, w.violations == 0 ? ok : verification_failure};
}

Outcome cmd_size(const Json& in, const Config& cfg) {
  const double gap = io::number(io::field(in, "delta_H", "input"), "input.delta_H");
  const auto eps = pick(cfg.epsilon, in, "epsilon");
  if (!eps) throw io::SchemaError("input.epsilon", "missing field (or pass --epsilon)");
  double spread = 1.0;
  if (const Json* p = io::optional_field(in, "spread")) spread = io::number(*p, "input.spread");
  std::size_t d = 2;
  if (const Json* p = io::optional_field(in, "d")) d = io::count(*p, "input.d");
  const auto s = size_estimate(gap, *eps, spread, d);
  Json r{{"command", "size-estimate"},
         {"delta_H", gap},
         {"epsilon", *eps},
         {"n_estimate", s.n_estimate},
         {"n_continuous", s.n_continuous},
         {"log_catalyst_dim", s.log_catalyst_dim},
         {"catalyst_dim_estimate", io::real(s.catalyst_dim)}};
  return {r};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalytic state transitions: majorization, typicality, catalyst construction and verification."};
  app.require_subcommand(1, 1);
  Config cfg;

  struct Entry {
    const char* name;
    const char* help;
    Outcome (*run)(const Json&, const Config&);
  };
  const Entry entries[] = {
      {"entropy", "Shannon or von Neumann entropy of a state (nats)", cmd_entropy},
      {"majorize", "Majorization in both directions and the entropy difference", cmd_majorize},
      {"schur-horn", "Unitary placing the target spectrum on the diagonal", cmd_schur_horn},
      {"typical", "Typical truncation of p^(x)n with its bounds", cmd_typical},
      {"classical-transition", "Build and run a classical catalyst", cmd_classical},
      {"quantum-transition", "Build and run a quantum catalyst", cmd_quantum},
      {"verify", "Check the catalytic definition on explicit data", cmd_verify},
      {"work", "Gibbs matching and extractable work", cmd_work},
      {"size-estimate", "Copies and catalyst size from the error bound", cmd_size},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--input,-i", cfg.input, "Input JSON file ('-' for stdin)")->required();
    sub->add_option("--output,-o", cfg.output, "Report file (default stdout)");
    sub->add_option("--epsilon", cfg.epsilon, "Target error");
    sub->add_option("--n", cfg.n, "Number of copies");
    sub->add_option("--seed", cfg.seed, "Seed for sampling");
    sub->add_option("--cap", cfg.cap, "Dimension cap (default from CATALYSIS_DIM_CAP or built-in)");
    sub->add_option("--dump", cfg.dump, "Write a verify-ready JSON of the constructed catalyst");
    sub->add_flag("--timings", cfg.timings, "Include wall-clock timings (breaks byte-stability)");
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      Stopwatch clock;
      Outcome out = entry->run(read_input(cfg.input), cfg);
      if (cfg.timings) out.report["wall_seconds"] = clock.lap();
      write_text(cfg.output, render(out.report));
      return out.code;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return input_error;
    }
  }
  return input_error;
}
