#pragma once

// Experiment sweeps, ratio experiments and their CSV output.
//
// Every task (config point, seed index) draws from its own stream
// derive_seed(base, config_index, seed_index); sub-streams 0..3 of that seed
// feed the origins, the perturbation (or one-step sample), the 2-opt run and
// the restart estimator. Rows are emitted in (config, seed) order whatever the
// thread count, so output bytes depend only on the config.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twopt/geometry.hpp"
#include "twopt/instance.hpp"
#include "twopt/tour.hpp"

namespace twopt {

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double x);

/// Parses a comma-separated list.
std::vector<double> parse_double_list(std::string_view s);
std::vector<std::size_t> parse_size_list(std::string_view s);

struct SweepConfig {
  std::vector<std::size_t> n{10};
  std::vector<double> sigma{0.1};
  std::vector<double> phi;  ///< nonempty selects the one-step model instead of sigma
  std::vector<std::size_t> dim{2};
  std::vector<Metric> metric{Metric::euclidean};
  std::vector<Pivot> pivot{Pivot::first};
  std::vector<InitRule> init{InitRule::random};
  OriginFamily origins = OriginFamily::uniform;
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;  ///< 0 disables the 2OPT-max estimate
  double eps = 1e-12;
  std::size_t exact_max_n = 12;      ///< Held-Karp reference up to here, 2 MST above
  std::size_t delta_min_max_n = 12;  ///< Delta_min is O(n^4); skipped above this n
  bool linked = false;               ///< record changes and count linked pairs
  std::string output;
  int threads = 0;  ///< 0 keeps the process default

  /// Flat key=value text; '#' starts a comment; unknown keys are errors.
  static SweepConfig parse(std::string_view text);
  static SweepConfig from_file(const std::filesystem::path& path);

  bool one_step() const noexcept { return !phi.empty(); }
  std::size_t config_points() const noexcept;
  std::size_t row_count() const noexcept { return config_points() * seeds; }
};

struct SweepRow {
  std::size_t row_id = 0;
  std::size_t config_index = 0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t dim = 0;
  bool one_step = false;
  double sigma = 0.0;
  double phi = 0.0;
  Metric metric = Metric::euclidean;
  Pivot pivot = Pivot::first;
  InitRule init = InitRule::random;
  double eps = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double initial_length = 0.0;
  double final_length = 0.0;
  std::optional<double> delta_min;
  bool reference_exact = false;  ///< Held-Karp optimum, else 2 MST (a bound)
  double reference_length = 0.0;
  double ratio = 0.0;  ///< final_length / reference_length
  std::optional<double> two_opt_max;
  std::optional<double> ratio_max;
  std::optional<std::size_t> linked_pairs;
  std::optional<std::size_t> linked_bound;
};

/// Computes one row; row_id = config_index * seeds + seed_index.
SweepRow run_sweep_row(const SweepConfig& cfg, std::size_t row_id);
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes `contents` to `path`; on failure the partial file is removed and an
/// I/O error is thrown.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x; needs >= 3 distinct x.
Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
/// linear_fit on (ln x, ln y); x and y must be positive.
Fit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Numeric SweepRow column by CSV name (n, sigma, final_length, ...).
double sweep_field(const SweepRow& row, std::string_view field);

/// Groups rows by x_field, averages y_field within each group and fits
/// ln(mean y) against ln x.
Fit scaling_fit(const std::vector<SweepRow>& rows, std::string_view x_field,
                std::string_view y_field);

struct RatioConfig {
  std::size_t n = 12;
  std::vector<double> sigmas{0.01, 0.03, 0.1, 0.3, 1.0};
  std::size_t restarts = 50;
  std::size_t seeds = 50;
  std::uint64_t seed = 0;
  OriginFamily origins = OriginFamily::grid;
  Metric metric = Metric::euclidean;
  Pivot pivot = Pivot::first;
  double eps = 1e-12;
};

struct RatioRow {
  double sigma = 0.0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;
  double optimal_length = 0.0;
  double two_opt_max = 0.0;
  double ratio = 0.0;
};

struct RatioSummary {
  double sigma = 0.0;
  double mean_ratio = 0.0;
  double standard_error = 0.0;
  double max_ratio = 0.0;
};

/// Seed index k uses derive_seed(seed, 0, k) for the origins and the
/// perturbation at every sigma (common random numbers: X = x + sigma Z with the
/// same x and Z across the grid) and derive_seed(seed, 1, k) for the restarts.
std::vector<RatioRow> run_ratio(const RatioConfig& cfg);
std::vector<RatioSummary> summarize_ratio(const RatioConfig& cfg, const std::vector<RatioRow>& rows);
/// Mean ratio against ln(1/sigma).
Fit ratio_trend(const std::vector<RatioSummary>& summary);
std::string ratio_csv(const std::vector<RatioRow>& rows);

/// Tidy long form of a sweep CSV: row_id,seed,variable,value, one line per
/// numeric output column of every row.
std::string plot_data(std::string_view sweep_csv_text);

}  // namespace twopt
