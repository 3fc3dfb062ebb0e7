#include "bnenum/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>

#include "bnenum/engine.hpp"

namespace bnenum {

namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }

}  // namespace

BenchReport run_bench(const RandomNetworkParams& params, std::size_t instances) {
  BenchReport report;
  report.params = params;
  report.requested = instances;
  const BayesianNetwork net = generate_random_polytree(params);
  const NetworkStats stats = network_stats(net);
  report.observed_max_degree = stats.max_degree;
  report.total_size = stats.total_size;

  const auto t0 = Clock::now();
  InstantiationStream stream = enumerate_instances(net);
  auto first = stream.next();
  report.setup_ms = micros(Clock::now() - t0) / 1000.0;
  if (!first) return report;

  report.item_us.reserve(instances);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto start = Clock::now();
    auto inst = stream.next();
    const auto elapsed = Clock::now() - start;
    if (!inst) break;
    report.item_us.push_back(micros(elapsed));
  }

  const auto& t = report.item_us;
  if (!t.empty()) {
    report.max_us = *std::max_element(t.begin(), t.end());
    report.min_us = *std::min_element(t.begin(), t.end());
    report.avg_us = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
    const double n = static_cast<double>(t.size());
    const double mean_x = (n - 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double dx = static_cast<double>(i) - mean_x;
      sxy += dx * (t[i] - report.avg_us);
      sxx += dx * dx;
    }
    report.slope_us = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return report;
}

double mean_item_time(const BenchReport& report, std::size_t first, std::size_t last) {
  last = std::min(last, report.item_us.size());
  if (first >= last) return 0.0;
  return std::accumulate(report.item_us.begin() + static_cast<std::ptrdiff_t>(first),
                         report.item_us.begin() + static_cast<std::ptrdiff_t>(last), 0.0) /
         static_cast<double>(last - first);
}

void print_bench(std::ostream& out, const BenchReport& r) {
  out << "nodes             " << r.params.nodes << "\n"
      << "max states        " << r.params.max_states << "\n"
      << "max degree        " << r.params.max_degree << " (observed " << r.observed_max_degree << ")" << "\n"
      << "total CPT size    " << r.total_size << "\n"
      << "seed              " << r.params.seed << "\n"
      << "items timed       " << r.item_us.size() << "\n"
      << "setup             " << r.setup_ms << " ms\n";
  if (!r.item_us.empty()) {
    out << "max per item      " << r.max_us << " us\n"
        << "min per item      " << r.min_us << " us\n"
        << "mean per item     " << r.avg_us << " us\n"
        << "slope             " << r.slope_us << " us/item\n";
  }
}

}  // namespace bnenum
