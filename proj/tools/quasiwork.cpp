// quasiwork: figure-data generation, parameter sweeps, and verification for
// work quasiprobabilities of the transverse-field Ising chain.
#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "quasiwork/coherence.hpp"
#include "quasiwork/dense_oracle.hpp"
#include "quasiwork/global_quench.hpp"
#include "quasiwork/inversion.hpp"
#include "quasiwork/io_util.hpp"
#include "quasiwork/thermo.hpp"
#include "quasiwork/verify.hpp"

using json = nlohmann::json;
using namespace quasiwork;

namespace {

constexpr int EXIT_CONFIG = 1;
constexpr int EXIT_NUMERICAL = 2;
constexpr int EXIT_VERIFY = 3;

struct RunConfig {
  QuenchSpec spec;
  double u_max = 5.0;
  int n_u = 201;
  double dw = 0.1;
  double K = 8.0;
  bool has_w_range = false;
  double w_lo = 0.0, w_hi = 0.0;
  std::vector<double> eps_grid;
  int site = 1;
  std::vector<std::string> states{"psi1", "psi2"};
  std::vector<double> lambda0_grid;
  bool lambda0_nudged = false;
  int n_samples = 50;
  unsigned seed = 20240515;
  std::string level = "quick";
  std::string format = "csv";
  json resolved;
};

PhaseProfile parse_phases(const json& j) {
  if (!j.is_object()) throw ContractError("config: phases must be an object");
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") return PhaseProfile::constant(j.value("phi", 0.0));
  if (kind == "alternating")
    return PhaseProfile::alternating(j.value("phi_odd", 0.0), j.value("phi_even", 0.0));
  if (kind == "per_mode") {
    if (!j.contains("phis")) throw ContractError("config: per_mode phases need 'phis'");
    return PhaseProfile::per_mode(j["phis"].get<std::vector<double>>());
  }
  throw ContractError("config: unknown phases.kind '" + kind + "'");
}

std::vector<double> parse_grid(const json& j, const char* what) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    const double lo = j.at("min").get<double>();
    const double hi = j.at("max").get<double>();
    const int n = j.at("n").get<int>();
    if (n < 1) throw ContractError(std::string("config: ") + what + ".n must be >= 1");
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
      g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
    return g;
  }
  throw ContractError(std::string("config: ") + what + " must be a list or {min,max,n}");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ContractError("config: parse error in " + path + ": " + e.what());
  }
  RunConfig c;
  c.spec.L = j.value("L", 50);
  c.spec.beta = j.value("beta", 1.0);
  c.spec.lambda0 = j.value("lambda0", 0.5);
  c.spec.lambda_tau = j.value("lambda_tau", 1.5);
  c.spec.q = j.value("q", 0.5);
  c.spec.J = j.value("J", 1.0);
  if (j.contains("phases")) c.spec.phases = parse_phases(j["phases"]);
  const std::string st = j.value("initial_state", "coherent_gibbs");
  if (st == "gibbs")
    c.spec.initial_state = InitialState::Gibbs;
  else if (st == "coherent_gibbs")
    c.spec.initial_state = InitialState::CoherentGibbs;
  else
    throw ContractError("config: unknown initial_state '" + st + "'");
  c.spec.validate();

  c.u_max = j.value("u_max", 5.0);
  c.n_u = j.value("n_u", 201);
  if (!(c.u_max > 0.0)) throw ContractError("config: u_max must be positive");
  if (c.n_u < 2) throw ContractError("config: n_u must be >= 2");
  c.dw = j.value("dw", 0.1);
  c.K = j.value("K", 8.0);
  if (j.contains("w_lo") && j.contains("w_hi")) {
    c.has_w_range = true;
    c.w_lo = j["w_lo"].get<double>();
    c.w_hi = j["w_hi"].get<double>();
  }
  if (j.contains("eps_grid")) c.eps_grid = parse_grid(j["eps_grid"], "eps_grid");
  c.site = j.value("site", 1);
  if (j.contains("states")) c.states = j["states"].get<std::vector<std::string>>();
  if (j.contains("lambda0_grid"))
    c.lambda0_grid = parse_grid(j["lambda0_grid"], "lambda0_grid");
  c.n_samples = j.value("n_samples", 50);
  c.seed = j.value("seed", 20240515u);
  c.level = j.value("level", "quick");
  c.format = j.value("format", "csv");
  if (c.format != "csv" && c.format != "json")
    throw ContractError("config: format must be csv or json");
  c.resolved = j;
  return c;
}

void write_meta(const std::filesystem::path& path, const RunConfig& c, json extra) {
  json meta;
  meta["resolved_config"] = c.resolved;
  meta["spec"] = json::parse(spec_to_json_string(c.spec));
  for (auto& [k, v] : extra.items()) meta[k] = v;
  std::ofstream out(path);
  out << meta.dump(2) << "\n";
}

json law_to_json(const GaussianWorkLaw& law) {
  return json{{"w_bar", law.w_bar},
              {"sigma2", law.sigma2},
              {"r_q", law.r_q},
              {"L", law.L},
              {"negativity", negativity_asymptotic(law)},
              {"kurtosis", kurtosis_asymptotic(law)}};
}

int cmd_chi(const RunConfig& c, const std::filesystem::path& out) {
  std::vector<double> grid;
  for (int i = 0; i < c.n_u; ++i)
    grid.push_back(-c.u_max + 2.0 * c.u_max * i / (c.n_u - 1.0));
  const CharacteristicCurve curve = chi_curve(c.spec, grid);
  std::vector<double> re, im;
  for (const cplx& v : curve.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  write_csv((out / "chi.csv").string(), {"u", "re", "im"}, {grid, re, im});
  json extra;
  extra["checksum_chi"] = checksum_complex(curve.values);
  if (c.spec.phases.is_constant() &&
      std::abs(std::abs(c.spec.lambda0) - 1.0) > 1e-9) {
    try {
      extra["gaussian_law"] = law_to_json(gaussian_law(c.spec));
    } catch (const std::exception& e) {
      extra["gaussian_law_error"] = e.what();
    }
  }
  write_meta(out / "chi_meta.json", c, extra);
  std::cout << "wrote " << (out / "chi.csv").string() << "\n";
  return 0;
}

int cmd_hist(const RunConfig& c, const std::filesystem::path& out) {
  GlobalQuenchSystem sys(c.spec);
  double w_lo = c.w_lo, w_hi = c.w_hi;
  bool have_law = false;
  GaussianWorkLaw law;
  if (c.spec.phases.is_constant() && std::abs(std::abs(c.spec.lambda0) - 1.0) > 1e-9) {
    law = gaussian_law(c.spec);
    have_law = true;
  }
  if (!c.has_w_range) {
    if (!have_law)
      throw ContractError(
          "config: w_lo/w_hi required when no gaussian law is available");
    w_lo = law.w_bar - 12.0 * law.sigma();
    w_hi = law.w_bar + 12.0 * law.sigma();
  }
  const WorkHistogram h =
      histogram([&](double u) { return sys.chi(u); }, c.dw, c.K, w_lo, w_hi);
  if (h.aliasing_warning)
    std::cerr << "warning: |chi| above 1e-6 at the truncated u-interval edge\n";
  std::vector<double> dws(h.w.size(), h.dw);
  if (have_law) {
    std::vector<double> overlay;
    for (double w : h.w) overlay.push_back(law(w));
    write_csv((out / "hist.csv").string(), {"w", "p", "dw", "gauss"},
              {h.w, h.p, dws, overlay});
  } else {
    write_csv((out / "hist.csv").string(), {"w", "p", "dw"}, {h.w, h.p, dws});
  }
  json extra{{"dw", h.dw},
             {"K", h.K},
             {"mass", h.mass()},
             {"negativity_integral", negativity_integral(h)},
             {"imag_residue", h.imag_residue},
             {"aliasing_warning", h.aliasing_warning}};
  if (have_law) extra["gaussian_law"] = law_to_json(law);
  write_meta(out / "hist_meta.json", c, extra);
  std::cout << "wrote " << (out / "hist.csv").string() << "\n";
  return 0;
}

int cmd_thermo(const RunConfig& c, const std::filesystem::path& out) {
  std::vector<double> grid = c.lambda0_grid;
  if (grid.empty()) grid = parse_grid(json{{"min", 0.2}, {"max", 1.8}, {"n", 33}}, "");
  bool nudged = false;
  for (double& l0 : grid) {
    if (std::abs(std::abs(l0) - 1.0) < 1e-6) {
      l0 += 1e-6;  // scans sample strictly off criticality
      nudged = true;
    }
  }
  const double dl = c.spec.lambda_tau - c.spec.lambda0;
  std::vector<double> col_l0, col_w, col_var, col_r, col_neg, col_kurt;
  col_l0.resize(grid.size());
  col_w.resize(grid.size());
  col_var.resize(grid.size());
  col_r.resize(grid.size());
  col_neg.resize(grid.size());
  col_kurt.resize(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
    QuenchSpec s = c.spec;
    s.lambda0 = grid[static_cast<size_t>(i)];
    s.lambda_tau = s.lambda0 + dl;
    const GaussianWorkLaw law = gaussian_law(s);
    col_l0[static_cast<size_t>(i)] = s.lambda0;
    col_w[static_cast<size_t>(i)] = law.w_bar;
    col_var[static_cast<size_t>(i)] = law.sigma2;
    col_r[static_cast<size_t>(i)] = law.r_q;
    col_neg[static_cast<size_t>(i)] = negativity_asymptotic(law);
    col_kurt[static_cast<size_t>(i)] = kurtosis_asymptotic(law);
  }
  write_csv((out / "thermo.csv").string(),
            {"lambda0", "w_bar", "var", "r_q", "negativity", "kurtosis"},
            {col_l0, col_w, col_var, col_r, col_neg, col_kurt});
  write_meta(out / "thermo_meta.json", c,
             json{{"delta_lambda", dl}, {"lambda0_nudged", nudged}});
  std::cout << "wrote " << (out / "thermo.csv").string() << "\n";
  return 0;
}

int cmd_local(const RunConfig& c, const std::filesystem::path& out) {
  std::vector<double> grid = c.eps_grid;
  if (grid.empty()) grid = parse_grid(json{{"min", 0.0}, {"max", 2.0}, {"n", 26}}, "");
  for (const std::string& st : c.states) {
    const LocalState state = (st == "psi2") ? LocalState::Psi2 : LocalState::Psi1;
    const auto w4 = fourth_moment_sweep(c.spec.L, c.spec.lambda0, c.spec.beta, c.spec.q,
                                        c.spec.phases, grid, c.site, state);
    write_csv((out / ("local_" + st + ".csv")).string(), {"eps", "w4"}, {grid, w4});
    std::cout << "wrote " << (out / ("local_" + st + ".csv")).string() << "\n";
  }
  write_meta(out / "local_meta.json", c, json{{"site", c.site}});
  return 0;
}

int cmd_coherence(const RunConfig& c, const std::filesystem::path& out) {
  const int L = std::min(c.spec.L, 4);
  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> ul(0.25, 1.9);
  std::uniform_real_distribution<double> ub(0.3, 2.5);
  std::uniform_real_distribution<double> uphi(0.0, PI);
  std::vector<double> l0s, l1s, betas, phis, fluct, jarz, dfs;
  for (int it = 0; it < c.n_samples; ++it) {
    double l0 = ul(rng), l1 = ul(rng);
    if (std::abs(l0 - 1.0) < 0.02) l0 += 0.05;
    const double beta = ub(rng), phi = uphi(rng);
    const oracle::EigenSystem es0 =
        oracle::eigensystem(oracle::full_fock_hamiltonian(l0, L));
    const oracle::EigenSystem es1 =
        oracle::eigensystem(oracle::full_fock_hamiltonian(l1, L));
    const double dF = free_energy_change(L, beta, l0, l1);
    std::vector<double> phases(static_cast<size_t>(es0.evals.size()), phi);
    const Eigen::VectorXcd psi = oracle::coherent_gibbs_state(es0, beta, phases);
    const double eta = 0.05 + 0.9 * (it / std::max(1.0, c.n_samples - 1.0));
    Eigen::VectorXd gw = (-beta * (es0.evals.array() - es0.evals.minCoeff())).exp();
    gw /= gw.sum();
    const Eigen::MatrixXcd rho_mix =
        eta * psi * psi.adjoint() +
        (1.0 - eta) * (es0.evecs * gw.asDiagonal() * es0.evecs.adjoint());
    const auto joint = oracle::joint_atoms(rho_mix, es0, es1);
    double lhs = 0.0;
    for (const auto& a : joint) lhs += a.mass * std::exp(-beta * a.w - a.C);
    const auto atoms = oracle::quasiprobability_direct(
        oracle::gibbs_density_fock(l0, L, beta), es0, es1, c.spec.q);
    l0s.push_back(l0);
    l1s.push_back(l1);
    betas.push_back(beta);
    phis.push_back(phi);
    fluct.push_back(lhs - std::exp(-beta * dF));
    jarz.push_back(oracle::atoms_exp_mean(atoms, -beta) - std::exp(-beta * dF));
    dfs.push_back(dF);
  }
  write_csv((out / "coherence.csv").string(),
            {"lambda0", "lambda_tau", "beta", "phi", "fluct_residual",
             "jarzynski_residual", "delta_f"},
            {l0s, l1s, betas, phis, fluct, jarz, dfs});
  write_meta(out / "coherence_meta.json", c, json{{"L", L}});
  std::cout << "wrote " << (out / "coherence.csv").string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& c, const std::filesystem::path& out) {
  const VerifyLevel level =
      (c.level == "full") ? VerifyLevel::Full : VerifyLevel::Quick;
  const VerifyReport rep = run_verification(level);
  std::ofstream(out / "verify_report.json") << rep.to_json() << "\n";
  for (const auto& chk : rep.checks)
    std::cout << (chk.pass ? "  ok   " : "  FAIL ") << chk.name
              << "  max_err=" << chk.max_err << " bound=" << chk.bound
              << (chk.pass ? "" : ("  at " + chk.detail)) << "\n";
  std::cout << (rep.passed ? "verification passed" : "verification FAILED") << " ("
            << rep.seconds << " s)\n";
  return rep.passed ? 0 : EXIT_VERIFY;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"work quasiprobability distributions of the transverse-field Ising chain"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", level_flag;
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: QUASIWORK_THREADS or 1)");
  app.add_option("--out", out_dir, "output directory");

  std::vector<std::string> names = {"chi", "hist", "thermo", "local", "coherence",
                                    "verify"};
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n);
    sub->add_option("--config", config_path, "JSON config file");
    if (n == "verify") sub->add_option("--level", level_flag, "quick|full");
  }

  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) {
    const char* env = std::getenv("QUASIWORK_THREADS");
    threads = env ? std::atoi(env) : 1;
    if (threads <= 0) threads = 1;
  }
  omp_set_num_threads(threads);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (sub != "verify") {
      std::cerr << "error: --config is required for '" << sub << "'\n";
      return EXIT_CONFIG;
    }
    if (!level_flag.empty()) cfg.level = level_flag;
    std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    if (sub == "chi") return cmd_chi(cfg, out);
    if (sub == "hist") return cmd_hist(cfg, out);
    if (sub == "thermo") return cmd_thermo(cfg, out);
    if (sub == "local") return cmd_local(cfg, out);
    if (sub == "coherence") return cmd_coherence(cfg, out);
    if (sub == "verify") return cmd_verify(cfg, out);
  } catch (const ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return EXIT_CONFIG;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return EXIT_NUMERICAL;
  }
  return EXIT_CONFIG;
}
