#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "matfact/datagen.hpp"
#include "matfact/types.hpp"

namespace matfact::cli {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Data, configuration and dimension problems map to kExitUsage; numerical
/// failures to kExitRuntime.
int exit_code_for(ErrorCode code) noexcept;

/// Writes <out_dir>/<spec output name> (default simulate.csv).
int cmd_simulate(const std::filesystem::path& spec_file, const std::filesystem::path& out_dir,
                 std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& err);

/// Writes row_loading.csv, col_loading.csv, scores.csv (t,i,j,value) and
/// diagnostics.csv (key,value) to out_dir.
int cmd_fit(const std::filesystem::path& input, Eigen::Index k1, Eigen::Index k2, Method method,
            const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Prints "k1_hat,k2_hat", the estimate, then the per-iteration ratio
/// traces as iteration,side,j,ratio rows.
int cmd_rank(const std::filesystem::path& input, Eigen::Index k_max, bool robust,
             std::ostream& out, std::ostream& err);

/// Prints year_index,mse,rho,v per evaluated year followed by a "mean" row.
int cmd_validate(const std::filesystem::path& input, std::size_t window_years,
                 std::size_t periods, Eigen::Index k, Method method, std::ostream& out,
                 std::ostream& err);

/// Writes a synthetic panel in the long CSV format.
int cmd_generate(const DgpConfig& cfg, const std::filesystem::path& out_file, std::ostream& out,
                 std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace matfact::cli
