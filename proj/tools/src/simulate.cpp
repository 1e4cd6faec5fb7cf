#include "matfact/cli/simulate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "matfact/cli/panel_csv.hpp"
#include "matfact/estimation.hpp"
#include "matfact/evalmetrics.hpp"
#include "matfact/ranksel.hpp"

namespace matfact::cli {

namespace {

constexpr int kEstimatorMetrics = 3;  // D_R, D_C, MSE
constexpr int kRankMetrics = 2;       // exact, under

std::vector<double> run_replication(const ExperimentSpec& spec, const DgpConfig& dgp) {
  const GroundTruth truth = gen_dataset(dgp);
  std::vector<double> out;
  out.reserve(spec.methods.size() * kEstimatorMetrics + spec.rank_methods.size() * kRankMetrics);

  FitConfig cfg;
  cfg.k1 = dgp.k1;
  cfg.k2 = dgp.k2;
  for (const Estimator method : spec.methods) {
    Matrix row;
    Matrix col;
    MatrixSeries common = truth.s0;
    if (method == Estimator::AlphaPCA) {
      const LoadingPair init = alpha_pca_init(truth.x, dgp.k1, dgp.k2);
      const FactorScores f = estimate_scores(truth.x, init.row, init.col);
      std::vector<Matrix> s;
      s.reserve(f.size());
      for (std::size_t t = 0; t < f.size(); ++t) {
        s.push_back(init.row.values() * f[t] * init.col.values().transpose());
      }
      row = init.row.values();
      col = init.col.values();
      common = MatrixSeries(std::move(s));
    } else {
      const FactorFit fitted = fit(truth.x, cfg, method == Estimator::PE ? Method::PE : Method::RMFA);
      row = fitted.row_loading.values();
      col = fitted.col_loading.values();
      common = fitted.common_series();
    }
    out.push_back(space_distance(row, truth.r0));
    out.push_back(space_distance(col, truth.c0));
    out.push_back(common_mse(common, truth.s0));
  }
  for (const RankMethod rank : spec.rank_methods) {
    const RankEstimate est = rank == RankMethod::RitER
                                 ? rit_er(truth.x, spec.k_max, spec.rank_iters)
                                 : iter_er(truth.x, spec.k_max, spec.rank_iters);
    const bool exact = est.k1_hat == dgp.k1 && est.k2_hat == dgp.k2;
    const bool under = est.k1_hat < dgp.k1 || est.k2_hat < dgp.k2;
    out.push_back(exact ? 1.0 : 0.0);
    out.push_back(under ? 1.0 : 0.0);
  }
  return out;
}

void summarize(const std::vector<std::vector<double>>& reps, std::size_t column, CellSummary& cell) {
  const auto n = static_cast<double>(reps.size());
  double mean = 0.0;
  for (const auto& r : reps) mean += r[column];
  mean /= n;
  double ss = 0.0;
  for (const auto& r : reps) ss += (r[column] - mean) * (r[column] - mean);
  cell.mean = mean;
  cell.sd = reps.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  cell.n_reps = static_cast<int>(reps.size());
}

}  // namespace

std::string dist_label(const ErrorDist& dist) {
  if (const auto* t = std::get_if<MatrixT>(&dist)) return "t" + std::to_string(t->nu);
  return "normal";
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t setting_index, int rep) {
  return derive_seed(derive_seed(base_seed, setting_index), static_cast<std::uint64_t>(rep));
}

std::vector<CellSummary> run_simulation(const ExperimentSpec& spec, std::uint64_t base_seed,
                                        unsigned threads) {
  spec.validate();
  const std::size_t n_settings = spec.settings.size();
  const auto n_reps = static_cast<std::size_t>(spec.replications);
  const std::size_t n_tasks = n_settings * n_reps;
  std::vector<std::vector<double>> results(n_tasks);

  unsigned workers = threads ? threads : spec.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_tasks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t setting = task / n_reps;
      const int rep = static_cast<int>(task % n_reps);
      try {
        DgpConfig dgp = spec.settings[setting].dgp;
        dgp.seed = replication_seed(base_seed, setting, rep);
        results[task] = run_replication(spec, dgp);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_tasks);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CellSummary> cells;
  for (std::size_t setting = 0; setting < n_settings; ++setting) {
    const Setting& s = spec.settings[setting];
    const std::vector<std::vector<double>> reps(
        results.begin() + static_cast<std::ptrdiff_t>(setting * n_reps),
        results.begin() + static_cast<std::ptrdiff_t>((setting + 1) * n_reps));
    CellSummary base;
    base.setting_id = s.id;
    base.dist = dist_label(s.dgp.dist);
    base.t_len = s.dgp.t_len;
    base.p1 = s.dgp.p1;
    base.p2 = s.dgp.p2;

    std::size_t column = 0;
    for (const Estimator m : spec.methods) {
      for (const char* metric : {"D_R", "D_C", "MSE"}) {
        CellSummary cell = base;
        cell.method = to_string(m);
        cell.metric = metric;
        summarize(reps, column++, cell);
        cells.push_back(std::move(cell));
      }
    }
    for (const RankMethod r : spec.rank_methods) {
      for (const char* metric : {"rank_exact_freq", "rank_under_freq"}) {
        CellSummary cell = base;
        cell.method = to_string(r);
        cell.metric = metric;
        summarize(reps, column++, cell);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

void write_simulation_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "setting_id,dist,T,p1,p2,method,metric,mean,sd,n_reps\n";
  for (const auto& c : cells) {
    out << c.setting_id << ',' << c.dist << ',' << c.t_len << ',' << c.p1 << ',' << c.p2 << ','
        << c.method << ',' << c.metric << ',' << format_double(c.mean) << ','
        << format_double(c.sd) << ',' << c.n_reps << '\n';
  }
}

}  // namespace matfact::cli
