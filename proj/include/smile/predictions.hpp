#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "smile/runner.hpp"

namespace smile {

/// Parameters of the two surprise-discrimination simulations.  Windows are
/// half-widths: a time point joins the grid value nearest to it, provided it
/// lies strictly within the half-width, so bins never overlap.
struct PredictionConfig {
  AlgorithmSpec algorithm{Algorithm::PF, 0.1, 20};
  double sigma = 0.5;
  double p_c = 0.1;
  int horizon = 500;
  int subjects = 20;
  std::uint64_t seed = 1;
  double theta_anchor = 1.0;
  double d_theta = 0.25;
  double sigma_c = 0.5;
  double d_sigma_c = 1.0;
  double d_delta = 0.1;
  std::vector<double> delta_grid = default_delta_grid();
  double d_p = 0.0125;
  std::vector<double> p_grid = default_p_grid();
  int threads = 1;

  static std::vector<double> default_delta_grid();
  static std::vector<double> default_p_grid();
  void validate() const;
};

/// Across-subject mean and standard error of per-subject bin averages.
struct BinSummary {
  int subjects = 0;
  std::optional<double> mean_sbf;
  std::optional<double> sem_sbf;
  std::optional<double> mean_ssh;
  std::optional<double> sem_ssh;
};

struct Prediction1Row {
  double delta;
  int sign;
  BinSummary summary;
};

struct Prediction2Row {
  double p;
  BinSummary summary;
};

/// Index of the grid value nearest to `value` if within `half_width`.
std::optional<std::size_t> nearest_bin(double value, const std::vector<double>& grid, double half_width);

/// Mean and standard error (n - 1 denominator) of a sample; sem needs two points.
BinSummary summarize(const std::vector<double>& sbf, const std::vector<double>& ssh);

/// Sign-bias table: one row per (delta, sign in {+1, -1}).
std::vector<Prediction1Row> run_prediction1(const PredictionConfig& config);

/// Equal-predictive table: one row per p.
std::vector<Prediction2Row> run_prediction2(const PredictionConfig& config);

/// Difference (s = +1) - (s = -1) at one delta.
struct SignGap {
  double delta;
  bool populated;  // both signs averaged over at least two subjects
  double gap_sbf;
  double gap_ssh;
  double se_sbf;  // sqrt(sem_plus^2 + sem_minus^2)
  double se_ssh;
};

std::vector<SignGap> sign_gaps(const std::vector<Prediction1Row>& rows);

void write_prediction1_csv(std::ostream& out, const std::vector<Prediction1Row>& rows);
void write_prediction2_csv(std::ostream& out, const std::vector<Prediction2Row>& rows);

}  // namespace smile
