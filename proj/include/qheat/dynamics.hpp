#pragma once

// Lindblad evolution of the system under a thermal bath.
//
// Collective mode:
//   drho/dt = -i[H_eff, rho] + G+ (2 A rho A^dag - {A^dag A, rho})
//                           + G- (2 A^dag rho A - {A A^dag, rho})
// Independent mode applies the same dissipator to each subsystem with its
// own local A. Times are in units of 1/G+ when G+ = 1. H_eff holds only the
// interaction-picture terms (Lamb shift, exchange); it is zero by default.

#include <functional>
#include <vector>

#include "qheat/pairtls.hpp"
#include "qheat/qcore.hpp"
#include "qheat/thermo.hpp"

namespace qheat::dynamics {

using pair::PairConfig;

enum class CouplingMode { collective, independent };

struct JumpChannel {
  CMatrix op;
  CMatrix op_adjoint;
  double rate = 0.0;
};

class GeneratorSpec {
 public:
  /// Collective mode: `jump_down` is the full-space lowering operator A.
  /// Independent mode: `jump_down` is the lowering operator of one subsystem
  /// and is applied to every slot of `layout` (all slots must share its
  /// dimension). Throws InvalidInput for g_plus <= 0, g_minus < 0 or
  /// non-finite rates, DimensionError on shape mismatch.
  GeneratorSpec(HermitianObservable h_eff, CMatrix jump_down, double g_plus, double g_minus,
                CouplingMode mode = CouplingMode::collective, Layout layout = {});

  std::size_t dim() const { return h_eff_.dim(); }
  const HermitianObservable& h_eff() const { return h_eff_; }
  const CMatrix& jump_down() const { return jump_down_; }
  double g_plus() const { return g_plus_; }
  double g_minus() const { return g_minus_; }
  CouplingMode mode() const { return mode_; }
  const Layout& layout() const { return layout_; }

  /// Full-space jump operators with their rates (A with G+, A^dag with G-).
  const std::vector<JumpChannel>& channels() const { return channels_; }
  /// H_eff - i sum_k rate_k L_k^dag L_k.
  const CMatrix& non_hermitian_hamiltonian() const { return h_nh_; }

 private:
  HermitianObservable h_eff_;
  CMatrix jump_down_;
  double g_plus_;
  double g_minus_;
  CouplingMode mode_;
  Layout layout_;
  std::vector<JumpChannel> channels_;
  CMatrix h_nh_;
};

/// Interaction-picture terms of the pair: Omega_L (s1+ s1- + s2+ s2-) and
/// Omega_12 (s1+ s2- + s1- s2+).
struct PairHamiltonian {
  double lamb_shift = 0.0;
  double exchange = 0.0;

  CMatrix matrix() const;
};

GeneratorSpec pair_generator(const BathSpec& bath, CouplingMode mode = CouplingMode::collective,
                             const PairHamiltonian& h = {});

/// drho/dt for a Hermitian rho. Throws DimensionError on mismatch.
CMatrix lindblad_rhs(const CMatrix& rho, const GeneratorSpec& gen);
CMatrix lindblad_rhs(const DensityOperator& rho, const GeneratorSpec& gen);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;
};

inline constexpr double kDefaultTolerance = 1e-10;

/// Adaptive RK4 with step doubling and local extrapolation; the max-norm
/// local error estimate stays below `tol`. Steps are clipped to land on every
/// grid time. `t_grid` must start at 0 and increase strictly.
/// Throws IntegrationUnstable when an eigenvalue drops below -1e-7.
Trajectory integrate(const DensityOperator& rho0, const GeneratorSpec& gen, const std::vector<double>& t_grid,
                     double tol = kDefaultTolerance);

enum class SteadyCriterion { derivative, time_limit };

struct SteadyResult {
  CMatrix state;
  double time = 0.0;
  /// ||drho/dt||_max at `time`.
  double residual = 0.0;
  SteadyCriterion criterion = SteadyCriterion::derivative;
};

/// Integrates until ||drho/dt||_max < 1e-12 or t reaches 50/G+.
SteadyResult integrate_to_steady(const DensityOperator& rho0, const GeneratorSpec& gen,
                                 double tol = kDefaultTolerance);

/// `n_steps` equal intervals on [0, t_max]; n_steps + 1 points.
std::vector<double> uniform_grid(double t_max, std::size_t n_steps);

/// Rates of the collective pair in the variables q+- = p+ + (1 +- s) p0,
/// s = sqrt(G-/G+):  dq+-/dt = a+- q+- + 4 G+ r.
struct PairRates {
  double g_plus = 1.0;
  double g_minus = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
};

/// a+- = 4 (+- sqrt(G+ G-) - G+ - G-).
PairRates pair_population_rates(const BathSpec& bath);

/// Exact collective evolution of an arbitrary pair state (computational basis).
/// Requires G- > 0.
CMatrix analytic_pair_state(const CMatrix& rho0, const PairRates& rates, double t, const PairHamiltonian& h = {});

Trajectory analytic_pair_trajectory(const PairConfig& cfg, const BathSpec& bath, const std::vector<double>& t_grid,
                                    const PairHamiltonian& h = {});
Trajectory analytic_pair_trajectory(const PairConfig& cfg, const PairRates& rates,
                                    const std::vector<double>& t_grid, const PairHamiltonian& h = {});

/// Local dissipation: each excited population relaxes at rate 2(G+ + G-)
/// toward e^{-bB}/(1 + e^{-bB}); alpha decays at the same rate.
Trajectory independent_pair_trajectory(const PairConfig& cfg, const BathSpec& bath,
                                       const std::vector<double>& t_grid);

/// Observables of a pair state at one time.
struct Record {
  double t = 0.0;
  double e_over_omega = 0.0;
  double beta_app_omega = 0.0;
  double p0 = 0.0;
  double pplus = 0.0;
  double pminus = 0.0;
  double p1 = 0.0;
  double s_s = 0.0;
  double s_s1 = 0.0;
  double s_s2 = 0.0;
  double i_s1s2 = 0.0;
  double relent_s1 = 0.0;
  double relent_s2 = 0.0;
  /// max_i |S(rho_i^t || rho_i^0) + Delta S_i - beta_S Delta E_i|
  double identity_residual = 0.0;
};

/// Throws DimensionError unless the states are pairs of two-level systems.
std::vector<Record> trajectory_observables(const Trajectory& traj, double beta_s_omega, double beta_b_omega);

/// Swappable analytic solver, used by the verification suite.
using AnalyticSolver = std::function<Trajectory(const PairConfig&, const BathSpec&, const std::vector<double>&)>;

AnalyticSolver default_analytic_solver();

}  // namespace qheat::dynamics
