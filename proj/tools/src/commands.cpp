#include "matfact/cli/commands.hpp"

#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "matfact/cli/experiment_spec.hpp"
#include "matfact/cli/panel_csv.hpp"
#include "matfact/cli/simulate.hpp"
#include "matfact/estimation.hpp"
#include "matfact/evalmetrics.hpp"
#include "matfact/ranksel.hpp"

namespace matfact::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RankDeficient:
    case ErrorCode::NotSymmetric:
    case ErrorCode::DegenerateTau:
    case ErrorCode::ZeroMatrix:
    case ErrorCode::CovNotPD:
      return kExitRuntime;
    default:
      return kExitUsage;
  }
}

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const Error& e) {
    err << "matfact: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "matfact: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  return file;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

const char* method_name(Method m) { return m == Method::PE ? "PE" : "RMFA"; }

}  // namespace

int cmd_simulate(const fs::path& spec_file, const fs::path& out_dir, std::uint64_t seed,
                 unsigned threads, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  if (const int rc = guarded(err, [&] { spec = parse_experiment_spec(spec_file); }); rc != kExitOk) {
    return rc;
  }
  return guarded(err, [&] {
    const auto cells = run_simulation(spec, seed, threads);
    ensure_dir(out_dir);
    const fs::path target = out_dir / spec.output_path;
    auto file = open_output(target);
    write_simulation_csv(file, cells);
    if (!file.flush()) throw std::runtime_error("failed writing " + target.string());
    out << "wrote " << cells.size() << " rows to " << target.string() << '\n';
  });
}

int cmd_fit(const fs::path& input, Eigen::Index k1, Eigen::Index k2, Method method,
            const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatrixSeries s = read_panel_csv(input);
    FitConfig cfg;
    cfg.k1 = k1;
    cfg.k2 = k2;
    const FactorFit fitted = fit(s, cfg, method);

    ensure_dir(out_dir);
    {
      auto f = open_output(out_dir / "row_loading.csv");
      write_matrix_csv(f, fitted.row_loading.values());
    }
    {
      auto f = open_output(out_dir / "col_loading.csv");
      write_matrix_csv(f, fitted.col_loading.values());
    }
    {
      auto f = open_output(out_dir / "scores.csv");
      f << "t,i,j,value\n";
      for (std::size_t t = 0; t < fitted.scores.size(); ++t) {
        const Matrix& ft = fitted.scores[t];
        for (Eigen::Index i = 0; i < ft.rows(); ++i) {
          for (Eigen::Index j = 0; j < ft.cols(); ++j) {
            f << t << ',' << i << ',' << j << ',' << format_double(ft(i, j)) << '\n';
          }
        }
      }
    }
    {
      auto f = open_output(out_dir / "diagnostics.csv");
      f << "key,value\n"
        << "method," << method_name(fitted.method) << '\n'
        << "iterations," << fitted.n_iters << '\n'
        << "converged," << (fitted.converged ? "true" : "false") << '\n'
        << "tau," << (fitted.tau ? format_double(*fitted.tau) : std::string()) << '\n'
        << "tau_fallback," << (fitted.tau_fallback ? "true" : "false") << '\n'
        << "objective," << format_double(fitted.final_objective) << '\n';
    }
    out << "fit " << method_name(fitted.method) << " k1=" << k1 << " k2=" << k2
        << " iterations=" << fitted.n_iters << (fitted.converged ? " converged" : " not-converged")
        << '\n';
  });
}

int cmd_rank(const fs::path& input, Eigen::Index k_max, bool robust, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const MatrixSeries s = read_panel_csv(input);
    const RankEstimate est = robust ? rit_er(s, k_max, kDefaultRankIters)
                                    : iter_er(s, k_max, kDefaultRankIters);
    out << "k1_hat,k2_hat\n" << est.k1_hat << ',' << est.k2_hat << '\n';
    out << "iteration,side,j,ratio\n";
    for (std::size_t it = 0; it < est.ratio_trace_r.size(); ++it) {
      for (const auto& [side, trace] :
           {std::pair{"row", &est.ratio_trace_r[it]}, std::pair{"col", &est.ratio_trace_c[it]}}) {
        for (Eigen::Index j = 0; j < trace->size(); ++j) {
          out << it + 1 << ',' << side << ',' << j + 1 << ',' << format_double((*trace)(j)) << '\n';
        }
      }
    }
  });
}

int cmd_validate(const fs::path& input, std::size_t window_years, std::size_t periods,
                 Eigen::Index k, Method method, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatrixSeries s = read_panel_csv(input);
    const RollingStats stats = rolling_validate(s, periods, window_years, k, k, method);
    out << "year_index,mse,rho,v\n";
    for (std::size_t w = 0; w < stats.mse_t.size(); ++w) {
      out << stats.year_index[w] << ',' << format_double(stats.mse_t[w]) << ','
          << format_double(stats.rho_t[w]) << ','
          << (stats.v_t[w] ? format_double(*stats.v_t[w]) : std::string()) << '\n';
    }
    const auto mean_v = stats.mean_v();
    out << "mean," << format_double(stats.mean_mse()) << ',' << format_double(stats.mean_rho())
        << ',' << (mean_v ? format_double(*mean_v) : std::string()) << '\n';
  });
}

int cmd_generate(const DgpConfig& cfg, const fs::path& out_file, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const GroundTruth truth = gen_dataset(cfg);
    if (out_file.has_parent_path()) ensure_dir(out_file.parent_path());
    auto f = open_output(out_file);
    write_panel_csv(f, truth.x);
    if (!f.flush()) throw std::runtime_error("failed writing " + out_file.string());
    out << "wrote " << truth.x.t_len() << " periods to " << out_file.string() << '\n';
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust estimation of matrix factor models", "matfact"};
  app.require_subcommand(1);

  const std::map<std::string, Method> methods{{"pe", Method::PE}, {"rmfa", Method::RMFA}};

  std::string spec_file;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment from a spec file");
  simulate->add_option("--spec", spec_file, "Experiment spec file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--seed", seed, "Base seed")->required();
  simulate->add_option("--threads", threads, "Worker threads (default: spec or all cores)");

  std::string input;
  Eigen::Index k1 = 0;
  Eigen::Index k2 = 0;
  Method method = Method::RMFA;
  auto* fit_cmd = app.add_subcommand("fit", "Fit loadings and scores to a panel CSV");
  fit_cmd->add_option("--input", input, "Panel CSV (t,i,j,value)")->required();
  fit_cmd->add_option("--k1", k1, "Row factor number")->required();
  fit_cmd->add_option("--k2", k2, "Column factor number")->required();
  fit_cmd->add_option("--method", method, "pe or rmfa")
      ->required()
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  fit_cmd->add_option("--out", out_dir, "Output directory")->required();

  Eigen::Index k_max = kDefaultKMax;
  bool robust = false;
  auto* rank = app.add_subcommand("rank", "Estimate the factor numbers (k1, k2)");
  rank->add_option("--input", input, "Panel CSV (t,i,j,value)")->required();
  rank->add_option("--kmax", k_max, "Largest candidate factor number")->required();
  rank->add_flag("--robust", robust, "Huber-weighted selection instead of plain IterER");

  std::size_t window = 0;
  std::size_t periods = 12;
  Eigen::Index k = 0;
  auto* validate = app.add_subcommand("validate", "Rolling validation on a panel CSV");
  validate->add_option("--input", input, "Panel CSV (t,i,j,value)")->required();
  validate->add_option("--window", window, "Training window in years")->required();
  validate->add_option("--periods", periods, "Periods per year")->required();
  validate->add_option("--k", k, "Factor number used for both rows and columns")->required();
  validate->add_option("--method", method, "pe or rmfa")
      ->required()
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));

  DgpConfig dgp;
  std::string dist = "normal";
  int nu = 3;
  std::string out_file;
  auto* generate = app.add_subcommand("generate", "Write a synthetic panel CSV");
  generate->add_option("--p1", dgp.p1)->required();
  generate->add_option("--p2", dgp.p2)->required();
  generate->add_option("--T", dgp.t_len)->required();
  generate->add_option("--k1", dgp.k1)->required();
  generate->add_option("--k2", dgp.k2)->required();
  generate->add_option("--phi", dgp.phi)->capture_default_str();
  generate->add_option("--psi", dgp.psi)->capture_default_str();
  generate->add_option("--dist", dist, "normal or t")
      ->check(CLI::IsMember({"normal", "t"}))
      ->capture_default_str();
  generate->add_option("--nu", nu, "Matrix-t degrees of freedom")->capture_default_str();
  generate->add_option("--seed", dgp.seed)->required();
  generate->add_option("--burn-in", dgp.burn_in)->capture_default_str();
  generate->add_flag("--noise-free", dgp.noise_free, "Omit the idiosyncratic errors");
  generate->add_option("--out", out_file, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (*simulate) return cmd_simulate(spec_file, out_dir, seed, threads, out, err);
  if (*fit_cmd) return cmd_fit(input, k1, k2, method, out_dir, out, err);
  if (*rank) return cmd_rank(input, k_max, robust, out, err);
  if (*validate) return cmd_validate(input, window, periods, k, method, out, err);
  if (dist == "t") dgp.dist = MatrixT{nu};
  return cmd_generate(dgp, out_file, out, err);
}

}  // namespace matfact::cli
