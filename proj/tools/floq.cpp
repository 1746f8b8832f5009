#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "floq/mpa.hpp"
#include "floq/observables.hpp"
#include "floq/simulate.hpp"
#include "floq/verifier.hpp"
#include "json.hpp"

using json = nlohmann::json;
using namespace floq;

namespace {

struct Options {
  std::string family = "ssep";
  int length = 3;
  std::string boundary = "open";
  // empty means "family default"
  std::string kappa, t, a, b, c, d;
  std::string scalar = "rational";
  std::string out;
  std::string config;
  std::string method = "mpa";
  bool cross_check = false;
  bool corrupt = false;  // debug: break one matrix entry, verify must fail
  uint64_t seed = 1;
  long periods = 10000;
  long burn_in = 1000;
  int replicas = 4;
  int samples = 20;
};

// Defaults sit well inside each family's stochastic parameter domain, so
// every command works out of the box for every family.
ModelSpec family_defaults(Family f) {
  ModelSpec m;
  m.family = f;
  switch (f) {
    case Family::SSEP:
      m.kappa = rat(1, 2);
      break;
    case Family::FusedSSEP:
      m.kappa = rat(5, 8);
      m.a = m.b = rat(1, 4);
      break;
    case Family::ASEP:
      m.t = rat(1, 2);
      m.kappa = rat(3, 8);
      m.a = m.b = Rat(3);
      m.c = m.d = rat(1, 8);
      break;
    case Family::FusedASEP:
      m.t = rat(1, 2);
      m.kappa = rat(1, 4);
      m.a = m.b = rat(9, 4);
      m.c = m.d = rat(1, 8);
      break;
  }
  return m;
}

ModelSpec model_from(const Options& opt, const std::string& family_name_str) {
  ModelSpec m = family_defaults(family_from_name(family_name_str));
  if (!opt.kappa.empty()) m.kappa = parse_rat(opt.kappa);
  if (!opt.t.empty()) m.t = parse_rat(opt.t);
  if (!opt.a.empty()) m.a = parse_rat(opt.a);
  if (!opt.b.empty()) m.b = parse_rat(opt.b);
  if (!opt.c.empty()) m.c = parse_rat(opt.c);
  if (!opt.d.empty()) m.d = parse_rat(opt.d);
  m.check_basic();
  return m;
}

ChainSpec chain_from(const Options& opt, const std::string& family_name_str) {
  ChainSpec chain;
  chain.model = model_from(opt, family_name_str);
  chain.length = opt.length;
  if (opt.boundary == "open")
    chain.boundary = Boundary::Open;
  else if (opt.boundary == "periodic")
    chain.boundary = Boundary::Periodic;
  else
    throw Error("boundary must be open or periodic");
  chain.check();
  return chain;
}

std::string scalar_out(const Options& opt, const Rat& x) {
  return opt.scalar == "float" ? std::to_string(x.get_d()) : to_string(x);
}

std::ostream& open_out(const Options& opt, std::ofstream& file) {
  if (opt.out.empty()) return std::cout;
  file.open(opt.out);
  if (!file) throw Error("cannot open output file: " + opt.out);
  return file;
}

std::string occupancy_label(size_t index, int length, int d) {
  std::string label(size_t(length), '0');
  for (int i = length - 1; i >= 0; --i) {
    label[size_t(i)] = char('0' + int(index % d));
    index /= size_t(d);
  }
  return label;
}

// --config holds the same keys as the flags; flags given on the command line
// win. Unknown keys are an error.
void apply_config(Options& opt, const CLI::App& app) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) throw Error("cannot open config file: " + opt.config);
  json doc = json::parse(in);
  if (!doc.is_object()) throw Error("config must be a JSON object");
  auto fetch_str = [&](const char* key, std::string& slot, const std::string& flag) {
    if (!doc.contains(key)) return;
    if (app.count(flag) > 0) return;
    slot = doc[key].is_string() ? doc[key].get<std::string>() : doc[key].dump();
  };
  for (auto& [key, value] : doc.items()) {
    static const std::set<std::string> known = {
        "family", "L",       "boundary", "kappa",   "t",        "a",       "b",
        "c",      "d",       "scalar",   "out",     "method",   "seed",    "periods",
        "burn_in", "replicas", "samples", "cross_check"};
    if (!known.count(key)) throw Error("unknown config key: " + key);
    (void)value;
  }
  fetch_str("family", opt.family, "--family");
  fetch_str("boundary", opt.boundary, "--boundary");
  fetch_str("kappa", opt.kappa, "--kappa");
  fetch_str("t", opt.t, "--t");
  fetch_str("a", opt.a, "--a");
  fetch_str("b", opt.b, "--b");
  fetch_str("c", opt.c, "--c");
  fetch_str("d", opt.d, "--d");
  fetch_str("scalar", opt.scalar, "--scalar");
  fetch_str("out", opt.out, "--out");
  fetch_str("method", opt.method, "--method");
  if (doc.contains("L") && app.count("--L") == 0) opt.length = doc["L"].get<int>();
  if (doc.contains("seed") && app.count("--seed") == 0) opt.seed = doc["seed"].get<uint64_t>();
  if (doc.contains("periods") && app.count("--periods") == 0)
    opt.periods = doc["periods"].get<long>();
  if (doc.contains("burn_in") && app.count("--burn-in") == 0)
    opt.burn_in = doc["burn_in"].get<long>();
  if (doc.contains("replicas") && app.count("--replicas") == 0)
    opt.replicas = doc["replicas"].get<int>();
  if (doc.contains("samples") && app.count("--samples") == 0)
    opt.samples = doc["samples"].get<int>();
  if (doc.contains("cross_check") && app.count("--cross-check") == 0)
    opt.cross_check = doc["cross_check"].get<bool>();
}

json report_to_json(const PropertyReport& rep) {
  return json{{"check", rep.check}, {"model", rep.model},         {"params", rep.params},
              {"point", rep.point}, {"pass", rep.pass},           {"deviation", rep.deviation}};
}

int cmd_verify(const Options& opt) {
  std::vector<std::string> families;
  if (opt.family == "all")
    families = {"ssep", "asep", "fused-ssep", "fused-asep"};
  else
    families = {opt.family};
  std::ofstream file;
  std::ostream& os = open_out(opt, file);
  bool all_pass = true;
  for (auto& fam : families) {
    ModelSpec m = model_from(opt, fam);
    auto reports = run_identity_suite(m, opt.samples);
    auto chain_reports = run_chain_suite(m);
    reports.insert(reports.end(), chain_reports.begin(), chain_reports.end());
    if (opt.corrupt) {
      auto bad = r_matrix(m, m.kappa);
      bad(0, 0) += rat(1, 1000000);
      auto rep = check_stochastic(bad, fam + " corrupted R");
      reports.push_back(rep);
    }
    for (auto& rep : reports) {
      os << report_to_json(rep).dump() << "\n";
      all_pass = all_pass && rep.pass;
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_build_markov(const Options& opt) {
  ChainSpec chain = chain_from(opt, opt.family);
  auto ops = build_floquet(chain);
  std::ofstream file;
  std::ostream& os = open_out(opt, file);
  const int d = chain.model.dim_local();
  const size_t n = chain.state_count();
  // columns index the source configuration (the matrix is column-stochastic)
  os << "to\\from";
  for (size_t j = 0; j < n; ++j) os << "," << occupancy_label(j, chain.length, d);
  os << "\n";
  for (size_t i = 0; i < n; ++i) {
    os << occupancy_label(i, chain.length, d);
    for (size_t j = 0; j < n; ++j)
      os << "," << scalar_out(opt, ops.markov(int(i), int(j)));
    os << "\n";
  }
  return 0;
}

int cmd_stationary(const Options& opt) {
  ChainSpec chain = chain_from(opt, opt.family);
  std::vector<Rat> probs;
  std::optional<std::vector<Rat>> companion;
  if (opt.method == "mpa") {
    if (chain.boundary != Boundary::Open) throw Error("mpa method needs an open chain");
    auto st = mpa_stationary(chain);
    probs = st.probs;
    companion = st.companion_probs;
    if (opt.cross_check) {
      auto eig = stationary_eigensolve(chain);
      if (eig != probs) throw Error("cross-check failed: mpa != eigensolve");
    }
  } else if (opt.method == "eigensolve") {
    probs = stationary_eigensolve(chain);
  } else {
    throw Error("method must be mpa or eigensolve");
  }
  std::ofstream file;
  std::ostream& os = open_out(opt, file);
  const int d = chain.model.dim_local();
  os << "configuration,probability" << (companion ? ",companion" : "") << "\n";
  for (size_t i = 0; i < probs.size(); ++i) {
    os << occupancy_label(i, chain.length, d) << "," << scalar_out(opt, probs[i]);
    if (companion) os << "," << scalar_out(opt, (*companion)[i]);
    os << "\n";
  }
  return 0;
}

int cmd_observables(const Options& opt) {
  ChainSpec chain = chain_from(opt, opt.family);
  const ModelSpec& m = chain.model;
  json summary;
  summary["model"] = opt.family;
  summary["L"] = opt.length;
  summary["method"] = opt.method;
  std::vector<Rat> density;
  if (opt.method == "closed") {
    summary["Z_L"] = to_string(z_l_closed(m, opt.length));
    summary["J"] = to_string(current_closed(m, opt.length));
    for (int i = 1; i <= opt.length; ++i) density.push_back(density_closed(m, opt.length, i));
  } else if (opt.method == "mpa" || opt.method == "eigensolve") {
    std::vector<Rat> probs, companion;
    Rat z_l;
    if (opt.method == "mpa") {
      auto st = mpa_stationary(chain);
      probs = st.probs;
      companion = st.companion_probs;
      z_l = st.normalization;
    } else {
      probs = stationary_eigensolve(chain);
      companion = build_floquet(chain).u_odd.apply(probs);
      z_l = z_l_mpa(m, opt.length);
    }
    auto rep = observables_from_state(chain, probs, companion, opt.method);
    summary["Z_L"] = to_string(z_l);
    summary["J"] = to_string(rep.current);
    json bonds = json::array();
    for (auto& bc : rep.bond_currents) bonds.push_back(to_string(bc));
    summary["bond_currents"] = bonds;
    summary["left_flux"] = to_string(rep.left_flux);
    summary["right_flux"] = to_string(rep.right_flux);
    density = rep.density;
  } else {
    throw Error("method must be closed, mpa or eigensolve");
  }
  if (!opt.out.empty()) {
    std::ofstream file(opt.out);
    if (!file) throw Error("cannot open output file: " + opt.out);
    file << "site,density\n";
    for (size_t i = 0; i < density.size(); ++i)
      file << i + 1 << "," << scalar_out(opt, density[i]) << "\n";
  }
  json dens = json::array();
  for (auto& x : density) dens.push_back(to_string(x));
  summary["density"] = dens;
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

int cmd_simulate(const Options& opt) {
  ChainSpec chain = chain_from(opt, opt.family);
  MCConfig cfg;
  cfg.seed = opt.seed;
  cfg.burn_in = opt.burn_in;
  cfg.measure = opt.periods;
  cfg.replicas = opt.replicas;
  auto rep = mc_run(chain, cfg);
  if (!opt.out.empty()) {
    std::ofstream file(opt.out);
    if (!file) throw Error("cannot open output file: " + opt.out);
    file << "site,density,stderr\n";
    for (int i = 0; i < rep.length; ++i)
      file << i + 1 << "," << rep.density[i] << "," << rep.density_err[i] << "\n";
  }
  json summary;
  summary["model"] = opt.family;
  summary["L"] = opt.length;
  summary["periods"] = rep.periods;
  summary["replicas"] = rep.replicas;
  summary["seed"] = opt.seed;
  summary["J"] = rep.current;
  summary["J_stderr"] = rep.current_err;
  if (chain.boundary == Boundary::Open) {
    summary["left_flux"] = rep.left_flux;
    summary["right_flux"] = rep.right_flux;
  }
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--family", opt.family, "ssep | asep | fused-ssep | fused-asep | all");
  cmd->add_option("--L", opt.length, "chain length");
  cmd->add_option("--boundary", opt.boundary, "open | periodic");
  cmd->add_option("--kappa", opt.kappa, "staggering parameter, rational p/q");
  cmd->add_option("--t", opt.t, "asymmetry parameter, rational p/q");
  cmd->add_option("--a", opt.a, "left injection rate");
  cmd->add_option("--b", opt.b, "right extraction rate");
  cmd->add_option("--c", opt.c, "left extraction rate");
  cmd->add_option("--d", opt.d, "right injection rate");
  cmd->add_option("--scalar", opt.scalar, "rational | float output");
  cmd->add_option("--out", opt.out, "output file (default stdout)");
  cmd->add_option("--config", opt.config, "JSON config file; flags override");
  cmd->add_option("--seed", opt.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integrable two-step Floquet exclusion processes"};
  app.require_subcommand(1);
  Options opt;

  auto* verify = app.add_subcommand("verify", "run the algebraic certification suite");
  add_common(verify, opt);
  verify->add_option("--samples", opt.samples, "random points per identity");
  verify->add_flag("--corrupt", opt.corrupt, "debug: corrupt one matrix entry");

  auto* build = app.add_subcommand("build-markov", "export the Markov matrix as labeled CSV");
  add_common(build, opt);

  auto* stationary = app.add_subcommand("stationary", "exact stationary distribution");
  add_common(stationary, opt);
  stationary->add_option("--method", opt.method, "mpa | eigensolve");
  stationary->add_flag("--cross-check", opt.cross_check, "assert mpa == eigensolve");

  auto* observables = app.add_subcommand("observables", "Z_L, density profile, current");
  add_common(observables, opt);
  observables->add_option("--method", opt.method, "closed | mpa | eigensolve");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sampling of the dynamics");
  add_common(simulate, opt);
  simulate->add_option("--periods", opt.periods, "measured Floquet periods");
  simulate->add_option("--burn-in", opt.burn_in, "discarded periods");
  simulate->add_option("--replicas", opt.replicas, "independent replicas");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(opt, *active);
    if (active == verify) return cmd_verify(opt);
    if (active == build) return cmd_build_markov(opt);
    if (active == stationary) return cmd_stationary(opt);
    if (active == observables) return cmd_observables(opt);
    if (active == simulate) return cmd_simulate(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
