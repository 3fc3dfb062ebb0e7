#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "bnenum/random_network.hpp"

namespace bnenum {

/// Timings for one enumeration run on a generated network. Setup covers
/// building the session and producing the first instantiation; the per-item
/// times cover the `requested` instantiations that follow it.
struct BenchReport {
  RandomNetworkParams params;
  std::size_t observed_max_degree = 0;
  std::size_t total_size = 0;
  std::size_t requested = 0;
  double setup_ms = 0.0;
  std::vector<double> item_us;
  double max_us = 0.0;
  double min_us = 0.0;
  double avg_us = 0.0;
  /// Least-squares slope of item time against item index, microseconds per item.
  double slope_us = 0.0;
};

BenchReport run_bench(const RandomNetworkParams& params, std::size_t instances);

void print_bench(std::ostream& out, const BenchReport& report);

/// Mean of item_us over [first, last).
double mean_item_time(const BenchReport& report, std::size_t first, std::size_t last);

}  // namespace bnenum
