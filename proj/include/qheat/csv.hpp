#pragma once

// CSV emission and parsing for trajectories and reversal scans.
// '.' decimal point, no locale, LF line endings, doubles at 17 significant
// digits so every value round-trips exactly. Booleans are written 1/0.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qheat/dynamics.hpp"
#include "qheat/reversal.hpp"

namespace qheat::csv {

inline constexpr std::string_view kTrajectoryHeader =
    "t,E_over_omega,beta_app_omega,p0,pplus,pminus,p1,S_S,S_S1,S_S2,I_S1S2,relent_S1,relent_S2,identity_residual";

inline constexpr std::string_view kScanHeader =
    "beta_S_omega,beta_B_omega,re_alpha,alpha_c,alpha_p,alpha_max,initial_reversal,permanent_reversal,"
    "delta_E_over_omega,delta_S";

/// 17 significant digits, general format; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double v);

/// Strict parse of a full field (accepts the spellings above).
double parse_double(std::string_view field);

void write_trajectory(std::ostream& os, const std::vector<dynamics::Record>& records);
void write_scan(std::ostream& os, const std::vector<reversal::ScanCell>& cells);

/// Header plus rows of numbers. Throws InvalidInput on malformed content.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws InvalidInput when absent.
  std::size_t column(std::string_view name) const;
};

Table read_table(std::istream& is);

std::vector<dynamics::Record> parse_trajectory(std::istream& is);
std::vector<reversal::ScanCell> parse_scan(std::istream& is);

}  // namespace qheat::csv
