// Regenerates tests/fixtures/calibration.txt. Run once after a deliberate numerical change;
// the acceptance suite compares fresh runs against the frozen values.

#include <cmath>
#include <iostream>

#include "calibration.hpp"
#include "twistlab/error.hpp"
#include "twistlab/io.hpp"

using namespace twistlab;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: calibrate <output file>\n";
    return 1;
  }
  try {
    FormRegistry reg;
    KeyValues kv;
    auto put = [&](const std::string& k, double v) {
      kv[k] = fmt17(v);
      std::cerr << k << " = " << kv[k] << "\n";
    };

    // Majorant slack constant: worst case over the reference slices, rounded up to 0.05.
    double worst = -1e300;
    for (const auto& [name, sigma] : std::vector<std::pair<std::string, int>>{{"delta", 1}, {"11a1", 1}, {"11a1", -1}}) {
      const auto scan = calib::majorant_scan(reg, name, 10000, sigma);
      put("majorant_excess_" + name + (sigma > 0 ? "_plus" : "_minus"), scan.max_excess);
      worst = std::max(worst, scan.max_excess);
    }
    put("c_cal", std::max(0.05, std::ceil(worst * 20.0) / 20.0 + 0.05));

    const auto delta = reg.get("delta", 1'000'000);
    const auto e11 = reg.get("11a1", 1'000'000);
    put("rankin_selberg_delta_11a1_1e6", rankin_selberg_sum(delta, e11, 1e6));
    put("rankin_selberg_threshold", 2.5);

    for (i64 D : {1000, 10000, 100000}) {
      const auto rep = decorrelation_diagnostics(calib::request(reg, {"delta", "11a1"}, D, 1));
      put("ratio_delta_11a1_" + std::to_string(D), rep.decorrelation_ratio);
      put("corr_delta_11a1_" + std::to_string(D), rep.log_corr[0][1]);
      put("mixed_delta_11a1_" + std::to_string(D), rep.mixed_moment);
    }
    put("first_moment_delta_10000", mixed_moment(calib::request(reg, {"delta"}, 10000, 1)).mixed_moment);
    const auto fit = exponent_sweep(calib::request(reg, {"delta"}, 100000, 1), {1000, 10000, 100000});
    put("sweep_slope_delta", fit.slope);

    const std::vector<double> V_grid = {0, 1, 2, 3};
    {
      ProxyParams params;
      params.x = params.y = 1000;
      params.z = ProxyParams::default_z(1000, 1000);
      const auto req = calib::request(reg, {"delta"}, 1000, 1);
      params.weights = req.forms;
      const auto slice = enumerate_family(1000, 1, 1, 8);
      const auto A = large_value_count(slice, params, V_grid, 0.1);
      const auto B = b_count(req, V_grid);
      for (std::size_t k = 0; k < V_grid.size(); ++k) {
        put("A_count_1000_V" + std::to_string(k), static_cast<double>(A.counts[k]));
        put("B_count_1000_V" + std::to_string(k), static_cast<double>(B.counts[k]));
      }
    }
    put("tail_worst_ratio_10000", calib::tail_worst_ratio(reg, 10000, {1.5, 2, 2.5, 3, 4, 5}));
    put("lemma21_worst_ratio", calib::lemma21_worst_ratio(reg, {2000, 4000, 8000, 16000}, {2, 3, 5, 7, 11, 13}));

    for (i64 D : {1000, 10000}) {
      const auto s = calib::apps_stats(reg, D);
      const std::string t = "_" + std::to_string(D);
      put("apps_family_size" + t, static_cast<double>(s.slice.size()));
      put("coeff_sum" + t, s.coeff.value);
      put("coeff_ratio" + t, s.coeff.ratio);
      put("coeff_single_11a1" + t, s.coeff_single.value);
      put("isotropy" + t, s.iso.value);
      put("isotropy_single_11a1" + t, s.iso_single.value);
    }
    write_file_atomic(argv[1], "# frozen calibration values (regenerate with the calibrate tool)\n" + format_key_values(kv));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
