#include "qheat/reversal.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "qheat/error.hpp"

namespace qheat::reversal {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonsingular(double beta_b, const char* what) {
  if (beta_b == 0.0) {
    throw SingularThreshold(std::string(what) + ": singular for omega*beta_B = 0 (infinite bath temperature)");
  }
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InvalidInput("not a number: '" + s + "'");
  return v;
}

}  // namespace

bool condition_general(double c, double loc_down, double beta_s, double beta_b) {
  if (!(loc_down > 0.0)) throw InvalidInput("reversal condition: <A^dag A>_loc must be positive");
  if (beta_s == beta_b) return beta_b != 0.0 && c != 0.0;
  if (beta_b == 0.0) return false;
  const double threshold = loc_down * (std::exp(beta_s) - std::exp(beta_b)) / std::expm1(beta_b);
  if (beta_b > 0.0) {
    return beta_s > beta_b ? (c > threshold && threshold > 0.0) : (c < threshold && threshold < 0.0);
  }
  return beta_s > beta_b ? (c < threshold && threshold < 0.0) : (c > threshold && threshold > 0.0);
}

bool condition_coherence(double c_plus, double c_minus, double loc_down, double beta_s, double beta_b) {
  if (!(loc_down > 0.0)) throw InvalidInput("reversal condition: <A^dag A>_loc must be positive");
  const double lhs = std::exp(beta_b) * c_minus - c_plus;
  const double rhs = loc_down * (std::exp(beta_s) - std::exp(beta_b));
  if (beta_s > beta_b) return lhs > rhs && rhs > 0.0;
  if (beta_s < beta_b) return lhs < rhs && rhs < 0.0;
  return lhs != 0.0;
}

double alpha_critical(double beta_s, double beta_b) {
  require_nonsingular(beta_b, "alpha_critical");
  if (beta_s == beta_b) return 0.0;
  if (beta_s >= 0.0) {
    // Numerator and denominator scaled by e^{-beta_S}.
    return -std::expm1(beta_b - beta_s) / ((1.0 + std::exp(-beta_s)) * std::expm1(beta_b));
  }
  return (std::exp(beta_s) - std::exp(beta_b)) / ((std::exp(beta_s) + 1.0) * std::expm1(beta_b));
}

double alpha_permanent(double beta_s, double beta_b) {
  require_nonsingular(beta_b, "alpha_permanent");
  if (beta_s == beta_b) return 0.0;
  const double xb = std::exp(-beta_b);
  const double xs = std::exp(-beta_s);
  return pair::z(beta_b) * ((1.0 + xb) / -std::expm1(-beta_b)) * (-std::expm1(-beta_s) / (1.0 + xs)) -
         pair::z(beta_s);
}

double alpha_bound(double beta_s) { return pair::alpha_max(beta_s); }

std::optional<FeasibilityBounds> feasibility_bounds(double beta_s) {
  if (!(beta_s >= 0.0) || !std::isfinite(beta_s)) return std::nullopt;
  const double xs = std::exp(-beta_s);
  FeasibilityBounds b;
  // ln[(1 + 2e^{bS})/(2 + e^{bS})] = ln[(xs + 2)/(2 xs + 1)]
  b.min_beta_b_omega_for_heating_reversal = beta_s - std::log((xs + 2.0) / (2.0 * xs + 1.0));
  b.max_beta_b_omega_for_cooling_reversal = 2.0 * beta_s;
  return b;
}

Verdict evaluate(double beta_s, double beta_b, double re_alpha) {
  Verdict v;
  v.alpha_c = alpha_critical(beta_s, beta_b);
  v.alpha_p = alpha_permanent(beta_s, beta_b);
  v.alpha_max = alpha_bound(beta_s);
  const double loc_down = 2.0 / (1.0 + std::exp(beta_s));
  v.initial_reversal = condition_general(2.0 * re_alpha, loc_down, beta_s, beta_b);

  // E_inf - E0 = slope (Re alpha - alpha_p), sign(slope) = -sign(beta_B).
  const int natural = sign(beta_s - beta_b);
  if (natural == 0) {
    v.permanent_reversal = re_alpha != 0.0;
  } else {
    v.permanent_reversal = natural * -sign(beta_b) * (re_alpha - v.alpha_p) < 0.0;
  }
  v.feasible = natural == 0 || std::abs(v.alpha_c) <= v.alpha_max;
  return v;
}

AlphaPolicy parse_alpha_policy(const std::string& name) {
  if (name == "min") return AlphaPolicy::min;
  if (name == "max") return AlphaPolicy::max;
  if (name == "value") return AlphaPolicy::value;
  throw InvalidInput("unknown alpha policy '" + name + "' (expected min, max or value)");
}

std::vector<double> Range::values() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw InvalidInput("range bounds must be finite");
  }
  if (start == stop) return {start};
  if (!(step > 0.0) || stop < start) throw InvalidInput("range needs start <= stop and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() == 1) {
    const double v = parse_double(parts[0]);
    return {v, v, 1.0};
  }
  if (parts.size() != 3) throw InvalidInput("range must be 'start:stop:step' or a single value: '" + text + "'");
  Range r{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
  r.values();  // validate
  return r;
}

std::vector<ScanCell> scan_region(const ScanGrid& grid) {
  const std::vector<double> bb = grid.beta_b.values();
  const std::vector<double> bs = grid.diagonal ? std::vector<double>{kNaN} : grid.beta_s.values();
  std::vector<ScanCell> cells;
  cells.reserve(bs.size() * bb.size());
  for (double s_row : bs) {
    for (double b : bb) {
      ScanCell cell;
      cell.beta_b_omega = b;
      cell.beta_s_omega = grid.diagonal ? b : s_row;
      const double amax = pair::alpha_max(cell.beta_s_omega);
      switch (grid.policy) {
        case AlphaPolicy::min:
          cell.re_alpha = -amax;
          break;
        case AlphaPolicy::max:
          cell.re_alpha = amax;
          break;
        case AlphaPolicy::value:
          cell.re_alpha = grid.re_alpha;
          break;
      }
      if (b == 0.0) {
        cell.verdict.alpha_c = kNaN;
        cell.verdict.alpha_p = kNaN;
        cell.verdict.alpha_max = amax;
      } else {
        cell.verdict = evaluate(cell.beta_s_omega, b, cell.re_alpha);
      }
      if (std::abs(cell.re_alpha) <= amax + 1e-12) {
        const pair::SteadyReport rep = pair::steady_report({cell.beta_s_omega, {cell.re_alpha, 0.0}}, b);
        cell.delta_e = rep.delta_e;
        cell.delta_s = rep.delta_s;
      } else {
        cell.delta_e = kNaN;
        cell.delta_s = kNaN;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace qheat::reversal
