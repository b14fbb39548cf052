#pragma once

// Reference computations whose outputs are frozen into tests/fixtures/calibration.txt by the
// calibrate tool and re-derived by the acceptance suite.

#include <vector>

#include "twistlab/apps.hpp"
#include "twistlab/moments.hpp"
#include "twistlab/proxy.hpp"
#include "twistlab/registry.hpp"

namespace twistlab::calib {

/// Per-member slack of the log-majorant: (log L - chandee(x = |d|)) / (log|d|/log x + 1).
struct MajorantScan {
  i64 members = 0;
  i64 positive = 0;  // members with a usable log L
  double max_excess = -std::numeric_limits<double>::infinity();
  std::vector<double> excess;  // one per positive member
};
MajorantScan majorant_scan(FormRegistry& reg, const std::string& form, i64 D, int sigma);

/// Request with an automatically chosen admissible class, eigenvalue tables sized for 2D.
MomentRequest request(FormRegistry& reg, const std::vector<std::string>& forms, i64 D, int sigma);

struct AppsStats {
  FamilySlice slice;
  CoefficientSum coeff;         // lifts of 11a1 and 14a1
  CoefficientSum coeff_single;  // lift of 11a1 alone
  IsotropyStatistic iso;        // curves 11a1 and 14a1
  IsotropyStatistic iso_single; // 11a1 alone
};
AppsStats apps_stats(FormRegistry& reg, i64 D);

/// Largest lhs / rhs of the large-sieve moment check with a_p = lambda_Delta(p), r = 1.
double lemma21_worst_ratio(FormRegistry& reg, const std::vector<i64>& D_grid, const std::vector<double>& x_grid);

/// Largest A(V; D) / tail_bound(V) for Delta over the grid (V with a positive bound only).
double tail_worst_ratio(FormRegistry& reg, i64 D, const std::vector<double>& V_grid);

}  // namespace twistlab::calib
