#include "qheat/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <ios>
#include <optional>
#include <ostream>
#include <sstream>

#include "qheat/csv.hpp"
#include "qheat/eigenops.hpp"
#include "qheat/error.hpp"
#include "qheat/matrix_json.hpp"
#include "qheat/pairtls.hpp"
#include "qheat/reversal.hpp"
#include "qheat/thermo.hpp"
#include "qheat/verify.hpp"

namespace qheat::cli {
namespace {

using csv::format_double;

struct SimulateArgs {
  double beta_s = 0.0;
  double beta_b = 0.0;
  double re_alpha = 0.0;
  double im_alpha = 0.0;
  std::string mode = "collective";
  std::string method = "analytic";
  double t_max = 3.0;
  std::size_t n_steps = 300;
  double lamb_shift = 0.0;
  double exchange = 0.0;
  std::string output;
};

struct CheckArgs {
  double beta_s = 0.0;
  double beta_b = 0.0;
  std::optional<double> re_alpha;
  double im_alpha = 0.0;
};

struct ScanArgs {
  std::string beta_s;
  std::string beta_b;
  bool diagonal = false;
  std::string policy = "min";
  double re_alpha = 0.0;
  std::string output;
};

struct EigenopsArgs {
  std::string hamiltonian;
  std::string coupling;
  std::string state;
};

struct VerifyArgs {
  std::vector<std::string> only;
};

void require_finite(double v, const char* flag) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(flag) + " must be a finite number");
}

// Writes to --output when given, else to `out`.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::ios_base::failure("failed writing " + path);
}

bool permanent_by_energy(double beta_s, double beta_b, double delta_e) {
  const double natural = (beta_s > beta_b) - (beta_s < beta_b);
  if (natural == 0.0) return std::abs(delta_e) > 1e-12;
  return natural * delta_e < 0.0;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  require_finite(a.beta_s, "--beta-s");
  require_finite(a.beta_b, "--beta-b");
  require_finite(a.re_alpha, "--re-alpha");
  require_finite(a.im_alpha, "--im-alpha");
  require_finite(a.lamb_shift, "--lamb-shift");
  require_finite(a.exchange, "--exchange");
  const pair::PairConfig cfg{a.beta_s, {a.re_alpha, a.im_alpha}};
  pair::validate(cfg);
  const BathSpec bath = make_bath(a.beta_b);
  const auto grid = dynamics::uniform_grid(a.t_max, a.n_steps);
  const dynamics::PairHamiltonian h{a.lamb_shift, a.exchange};
  const bool collective = a.mode == "collective";
  const auto mode = collective ? dynamics::CouplingMode::collective : dynamics::CouplingMode::independent;

  dynamics::Trajectory traj;
  if (a.method == "ode") {
    traj = dynamics::integrate(pair::initial_state(cfg), dynamics::pair_generator(bath, mode, h), grid);
  } else if (collective) {
    traj = dynamics::analytic_pair_trajectory(cfg, bath, grid, h);
  } else {
    if (a.lamb_shift != 0.0 || a.exchange != 0.0) {
      throw InvalidInput("the analytic independent solution has no Hamiltonian terms; use --method ode");
    }
    traj = dynamics::independent_pair_trajectory(cfg, bath, grid);
  }
  std::ostringstream buf;
  csv::write_trajectory(buf, dynamics::trajectory_observables(traj, a.beta_s, a.beta_b));
  emit(a.output, buf.str(), out);

  const double e0 = pair::thermal_energy(a.beta_s);
  const double e_inf = collective ? pair::steady_energy(a.beta_s, a.beta_b, a.re_alpha) : pair::thermal_energy(a.beta_b);
  bool permanent = permanent_by_energy(a.beta_s, a.beta_b, e_inf - e0);
  if (collective && a.beta_b != 0.0) permanent = reversal::evaluate(a.beta_s, a.beta_b, a.re_alpha).permanent_reversal;
  err << "E0=" << format_double(e0) << " E_inf=" << format_double(e_inf) << " permanent_reversal=" << permanent
      << '\n';
  return kOk;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  require_finite(a.beta_s, "--beta-s");
  require_finite(a.beta_b, "--beta-b");
  const double ac = reversal::alpha_critical(a.beta_s, a.beta_b);
  const double ap = reversal::alpha_permanent(a.beta_s, a.beta_b);
  const double am = reversal::alpha_bound(a.beta_s);
  const bool feasible = a.beta_s == a.beta_b || std::abs(ac) <= am;
  out << "beta_S_omega " << format_double(a.beta_s) << '\n';
  out << "beta_B_omega " << format_double(a.beta_b) << '\n';
  out << "alpha_c " << format_double(ac) << '\n';
  out << "alpha_p " << format_double(ap) << '\n';
  out << "alpha_max " << format_double(am) << '\n';
  out << "feasible " << (feasible ? "true" : "false") << '\n';
  if (const auto fb = reversal::feasibility_bounds(a.beta_s)) {
    out << "min_beta_B_omega_heating_reversal " << format_double(fb->min_beta_b_omega_for_heating_reversal) << '\n';
    out << "max_beta_B_omega_cooling_reversal " << format_double(fb->max_beta_b_omega_for_cooling_reversal) << '\n';
  }
  if (a.re_alpha) {
    require_finite(*a.re_alpha, "--re-alpha");
    require_finite(a.im_alpha, "--im-alpha");
    const pair::PairConfig cfg{a.beta_s, {*a.re_alpha, a.im_alpha}};
    pair::validate(cfg);
    const reversal::Verdict v = reversal::evaluate(a.beta_s, a.beta_b, *a.re_alpha);
    const pair::SteadyReport rep = pair::steady_report(cfg, a.beta_b);
    out << "re_alpha " << format_double(*a.re_alpha) << '\n';
    out << "initial_reversal " << (v.initial_reversal ? "true" : "false") << '\n';
    out << "permanent_reversal " << (v.permanent_reversal ? "true" : "false") << '\n';
    out << "E0_over_omega " << format_double(rep.e0_over_omega) << '\n';
    out << "E_inf_over_omega " << format_double(rep.e_inf_over_omega) << '\n';
    out << "delta_E_over_omega " << format_double(rep.delta_e) << '\n';
    out << "delta_S " << format_double(rep.delta_s) << '\n';
  }
  return kOk;
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  reversal::ScanGrid grid;
  grid.beta_b = reversal::parse_range(a.beta_b);
  grid.diagonal = a.diagonal;
  if (!a.diagonal) {
    if (a.beta_s.empty()) throw InvalidInput("--beta-s is required unless --diag is given");
    grid.beta_s = reversal::parse_range(a.beta_s);
  }
  grid.policy = reversal::parse_alpha_policy(a.policy);
  require_finite(a.re_alpha, "--re-alpha");
  grid.re_alpha = a.re_alpha;
  std::ostringstream buf;
  csv::write_scan(buf, reversal::scan_region(grid));
  emit(a.output, buf.str(), out);
  return kOk;
}

void print_matrix(std::ostream& out, const CMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "   ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      out << ' ' << format_double(std::abs(z.real()) < 1e-15 ? 0.0 : z.real());
      if (std::abs(z.imag()) >= 1e-15) out << (z.imag() < 0 ? "-" : "+") << format_double(std::abs(z.imag())) << 'i';
    }
    out << '\n';
  }
}

int cmd_eigenops(const EigenopsArgs& a, std::ostream& out, std::ostream& err) {
  const HermitianObservable h(read_matrix_file(a.hamiltonian));
  const HermitianObservable coupling(read_matrix_file(a.coupling));
  if (h.dim() != coupling.dim()) throw DimensionError("Hamiltonian and coupling dimensions differ");
  out << "energy shells\n";
  for (const EnergyShell& s : spectral_groups(h)) {
    out << "  E = " << format_double(s.energy) << "  multiplicity " << s.multiplicity << '\n';
  }
  const EigenoperatorMap map = build_eigenoperators(h, coupling);
  out << "frequency components\n";
  for (const FrequencyComponent& c : map.components()) {
    out << "  nu = " << format_double(c.frequency) << '\n';
    print_matrix(out, c.op);
  }
  try {
    const LadderPair ladder = infer_ladder_pair(h, coupling);
    out << "lowering operator A (omega = " << format_double(ladder.frequency()) << ")\n";
    print_matrix(out, ladder.lowering());
    if (!a.state.empty()) {
      const DensityOperator rho(read_matrix_file(a.state));
      const TransitionWeights w = transition_weights(rho, ladder);
      out << "<A A^dag> " << format_double(w.up) << '\n';
      out << "<A^dag A> " << format_double(w.down) << '\n';
      out << "beta_app_omega " << format_double(apparent_temperature(w).beta_omega) << '\n';
    }
  } catch (const MultiFrequencyError& e) {
    err << "error: " << e.what() << '\n';
    err << "transition frequencies:";
    for (double g : e.gaps()) err << ' ' << format_double(g);
    err << '\n';
    return kInvalidInput;
  }
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, const Hooks& hooks) {
  verify::Options opts;
  for (const std::string& item : a.only) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (!id.empty()) opts.only.push_back(id);
    }
  }
  opts.analytic_solver = hooks.analytic_solver;
  const auto checks = verify::run(opts);
  verify::print_table(out, checks);
  const bool ok = verify::all_pass(checks);
  out << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Heat-flow reversal toolkit for collectively dissipating quantum systems", "qheat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Evolve a correlated pair and write the trajectory CSV");
  simulate->add_option("--beta-s", sim.beta_s, "omega*beta_S of the initial local states")->required();
  simulate->add_option("--beta-b", sim.beta_b, "omega*beta_B of the bath")->required();
  simulate->add_option("--re-alpha", sim.re_alpha, "Re alpha of the initial correlation");
  simulate->add_option("--im-alpha", sim.im_alpha, "Im alpha of the initial correlation");
  simulate->add_option("--mode", sim.mode, "collective or independent dissipation")
      ->check(CLI::IsMember({"collective", "independent"}));
  simulate->add_option("--method", sim.method, "analytic or ode")->check(CLI::IsMember({"analytic", "ode"}));
  simulate->add_option("--t-max", sim.t_max, "final time in units 1/G+");
  simulate->add_option("--n-steps", sim.n_steps, "number of output intervals");
  simulate->add_option("--lamb-shift", sim.lamb_shift, "Lamb shift Omega_L");
  simulate->add_option("--exchange", sim.exchange, "exchange coupling Omega_12");
  simulate->add_option("--output,-o", sim.output, "CSV path (default stdout)");

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "Report reversal thresholds and verdicts");
  check->add_option("--beta-s", chk.beta_s, "omega*beta_S")->required();
  check->add_option("--beta-b", chk.beta_b, "omega*beta_B")->required();
  check->add_option("--re-alpha", chk.re_alpha, "Re alpha to classify");
  check->add_option("--im-alpha", chk.im_alpha, "Im alpha");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Evaluate thresholds over a temperature grid and write the scan CSV");
  scan->add_option("--beta-s", sc.beta_s, "start:stop:step or a single value");
  scan->add_option("--beta-b", sc.beta_b, "start:stop:step or a single value")->required();
  scan->add_flag("--diag", sc.diagonal, "set beta_S = beta_B");
  scan->add_option("--alpha-policy", sc.policy, "min (-alpha_max), max (+alpha_max) or value")
      ->check(CLI::IsMember({"min", "max", "value"}));
  scan->add_option("--re-alpha", sc.re_alpha, "Re alpha for --alpha-policy value");
  scan->add_option("--output,-o", sc.output, "CSV path (default stdout)");

  EigenopsArgs eo;
  auto* eig = app.add_subcommand("eigenops", "Decompose a coupling into eigenoperators of a Hamiltonian");
  eig->add_option("--hamiltonian", eo.hamiltonian, "JSON matrix file")->required();
  eig->add_option("--coupling", eo.coupling, "JSON matrix file")->required();
  eig->add_option("--state", eo.state, "optional JSON density matrix");

  VerifyArgs ver;
  auto* vfy = app.add_subcommand("verify", "Run the verification checks");
  vfy->add_option("--only", ver.only, "check ids (repeatable or comma separated)");

  std::vector<const char*> argv{"qheat"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalidInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (check->parsed()) return cmd_check(chk, out);
    if (scan->parsed()) return cmd_scan(sc, out);
    if (eig->parsed()) return cmd_eigenops(eo, out, err);
    if (vfy->parsed()) return cmd_verify(ver, out, hooks);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace qheat::cli
