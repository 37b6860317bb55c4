#include "qheat/eigenops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qheat/error.hpp"

namespace qheat {
namespace {

constexpr double kCommutatorTolerance = 1e-10;

// Components below this (relative to the coupling scale) are dropped.
constexpr double kNegligible = 1e-12;

double effective_tol(const std::vector<EnergyShell>& shells, double tol) {
  if (shells.empty()) return tol;
  return tol * std::max(1.0, shells.back().energy - shells.front().energy);
}

std::string list(const std::vector<double>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << '}';
  return os.str();
}

}  // namespace

std::vector<EnergyShell> spectral_groups(const HermitianObservable& h, double tol) {
  if (tol <= 0.0) throw InvalidInput("spectral_groups: tolerance must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  const RVector& ev = solver.eigenvalues();
  const CMatrix& vecs = solver.eigenvectors();
  const Eigen::Index n = ev.size();
  const double gap_tol = tol * std::max(1.0, ev(n - 1) - ev(0));

  std::vector<EnergyShell> shells;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i < n && ev(i) - ev(i - 1) <= gap_tol) continue;
    EnergyShell shell;
    shell.multiplicity = static_cast<std::size_t>(i - start);
    shell.energy = ev.segment(start, i - start).mean();
    shell.basis = vecs.middleCols(start, i - start);
    shell.projector = shell.basis * shell.basis.adjoint();
    shells.push_back(std::move(shell));
    start = i;
  }
  return shells;
}

const CMatrix* EigenoperatorMap::find(double nu, double tol) const {
  for (const auto& c : components_) {
    if (std::abs(c.frequency - nu) <= tol * std::max(1.0, std::abs(nu))) return &c.op;
  }
  return nullptr;
}

CMatrix EigenoperatorMap::sum() const {
  if (components_.empty()) return CMatrix();
  CMatrix total = CMatrix::Zero(components_.front().op.rows(), components_.front().op.cols());
  for (const auto& c : components_) total += c.op;
  return total;
}

std::vector<double> EigenoperatorMap::positive_frequencies() const {
  std::vector<double> out;
  for (const auto& c : components_) {
    if (c.frequency > 0.0) out.push_back(c.frequency);
  }
  return out;
}

EigenoperatorMap build_eigenoperators(const HermitianObservable& h, const HermitianObservable& coupling,
                                      double tol) {
  if (h.dim() != coupling.dim()) throw DimensionError("build_eigenoperators: dimension mismatch");
  const std::vector<EnergyShell> shells = spectral_groups(h, tol);
  const double freq_tol = effective_tol(shells, tol);

  // Canonical frequencies: cluster the nonnegative shell differences and use
  // the first difference of each cluster; negative keys mirror positive ones.
  std::vector<double> diffs;
  for (const auto& lo : shells) {
    for (const auto& hi : shells) {
      if (hi.energy >= lo.energy) diffs.push_back(hi.energy - lo.energy);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<double> keys;
  for (double d : diffs) {
    if (keys.empty() || d - keys.back() > freq_tol) keys.push_back(d);
  }
  // The smallest difference is always 0 (a shell with itself).
  keys.front() = 0.0;
  auto canonical = [&](double nu) {
    const double mag = std::abs(nu);
    for (double k : keys) {
      if (std::abs(mag - k) <= freq_tol) return nu < 0 ? -k : k;
    }
    return nu;
  };

  std::vector<FrequencyComponent> comps;
  const double scale = std::max(1.0, max_abs(coupling.matrix()));
  for (const auto& n : shells) {
    for (const auto& np : shells) {
      const double nu = canonical(np.energy - n.energy);
      const CMatrix piece = n.projector * coupling.matrix() * np.projector;
      auto it = std::find_if(comps.begin(), comps.end(),
                             [&](const FrequencyComponent& c) { return c.frequency == nu; });
      if (it == comps.end()) {
        comps.push_back({nu, piece});
      } else {
        it->op += piece;
      }
    }
  }
  std::erase_if(comps, [&](const FrequencyComponent& c) { return max_abs(c.op) <= kNegligible * scale; });
  std::sort(comps.begin(), comps.end(),
            [](const FrequencyComponent& a, const FrequencyComponent& b) { return a.frequency < b.frequency; });
  return EigenoperatorMap(std::move(comps));
}

LadderPair::LadderPair(const HermitianObservable& h, double omega, CMatrix lowering)
    : omega_(omega), lowering_(std::move(lowering)) {
  if (!(omega > 0.0)) throw InvalidInput("ladder frequency must be positive");
  if (static_cast<std::size_t>(lowering_.rows()) != h.dim() || lowering_.rows() != lowering_.cols()) {
    throw DimensionError("LadderPair: dimension mismatch");
  }
  raising_ = lowering_.adjoint();
  const CMatrix& H = h.matrix();
  const double scale = std::max(1.0, max_abs(lowering_) * std::max(1.0, max_abs(H)));
  const double down_defect = max_abs(H * lowering_ - lowering_ * H + omega * lowering_);
  const double up_defect = max_abs(H * raising_ - raising_ * H - omega * raising_);
  if (down_defect > kCommutatorTolerance * scale || up_defect > kCommutatorTolerance * scale) {
    std::ostringstream os;
    os << "operator is not an eigenoperator at frequency " << omega << " (commutator defect "
       << std::max(down_defect, up_defect) << ")";
    throw InvalidInput(os.str());
  }
  up_weight_ = lowering_ * raising_;
  down_weight_ = raising_ * lowering_;
}

LadderPair ladder_pair(const HermitianObservable& h, const HermitianObservable& coupling, double omega,
                       double tol) {
  if (!(omega > 0.0)) throw InvalidInput("ladder_pair: omega must be positive");
  const EigenoperatorMap map = build_eigenoperators(h, coupling, tol);
  const double ftol = tol * std::max(1.0, omega);
  std::vector<double> stray;
  for (const auto& c : map.components()) {
    if (std::abs(std::abs(c.frequency) - omega) > ftol) {
      const double g = std::abs(c.frequency);
      if (std::find(stray.begin(), stray.end(), g) == stray.end()) stray.push_back(g);
    }
  }
  if (!stray.empty()) {
    std::vector<double> gaps = map.positive_frequencies();
    for (double g : stray) {
      if (std::find(gaps.begin(), gaps.end(), g) == gaps.end()) gaps.push_back(g);
    }
    std::sort(gaps.begin(), gaps.end());
    throw MultiFrequencyError("coupling is not a single-transition coupling at omega = " +
                                  std::to_string(omega) + "; transition frequencies " + list(gaps),
                              gaps);
  }
  const CMatrix* lowering = map.find(omega, tol);
  if (lowering == nullptr) {
    throw ZeroCouplingError("coupling has no component at frequency " + std::to_string(omega));
  }
  return LadderPair(h, omega, *lowering);
}

LadderPair infer_ladder_pair(const HermitianObservable& h, const HermitianObservable& coupling, double tol) {
  const EigenoperatorMap map = build_eigenoperators(h, coupling, tol);
  const std::vector<double> pos = map.positive_frequencies();
  if (pos.empty()) {
    bool only_zero = !map.components().empty();
    if (only_zero) {
      throw MultiFrequencyError("coupling only has a nu = 0 component; transition frequencies {0}", {0.0});
    }
    throw ZeroCouplingError("coupling has no nonzero eigenoperator");
  }
  if (pos.size() > 1 || map.find(0.0, tol) != nullptr) {
    std::vector<double> gaps = pos;
    if (map.find(0.0, tol) != nullptr) gaps.insert(gaps.begin(), 0.0);
    throw MultiFrequencyError("coupling is not a single-transition coupling; transition frequencies " + list(gaps),
                              gaps);
  }
  return ladder_pair(h, coupling, pos.front(), tol);
}

}  // namespace qheat
