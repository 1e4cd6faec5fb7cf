#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "matfact/cli/experiment_spec.hpp"

namespace matfact::cli {

/// One aggregated (setting, method, metric) cell.
struct CellSummary {
  std::string setting_id;
  std::string dist;
  std::size_t t_len = 0;
  Eigen::Index p1 = 0;
  Eigen::Index p2 = 0;
  std::string method;
  std::string metric;  // D_R, D_C, MSE, rank_exact_freq, rank_under_freq
  double mean = 0.0;
  double sd = 0.0;
  int n_reps = 0;
};

/// "normal" or "t<nu>".
std::string dist_label(const ErrorDist& dist);

/// Seed of replication `rep` of setting `setting_index`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t setting_index, int rep);

/// Runs every (setting x replication) cell on a worker pool. Each
/// replication draws one dataset that all methods share. Results are
/// gathered by index, so the output does not depend on the thread count.
/// threads == 0 uses the spec's value, which in turn defaults to the
/// hardware concurrency.
std::vector<CellSummary> run_simulation(const ExperimentSpec& spec, std::uint64_t base_seed,
                                        unsigned threads = 0);

void write_simulation_csv(std::ostream& out, const std::vector<CellSummary>& cells);

}  // namespace matfact::cli
