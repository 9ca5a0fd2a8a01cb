#include "smile/predictions.hpp"

#include <cmath>
#include <tuple>
#include <ostream>

#include "smile/environment.hpp"
#include "smile/errors.hpp"
#include "smile/io.hpp"
#include "smile/parallel.hpp"

namespace smile {

std::vector<double> PredictionConfig::default_delta_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 15; ++k) grid.push_back(0.1 * k);
  return grid;
}

std::vector<double> PredictionConfig::default_p_grid() {
  std::vector<double> grid;
  for (int k = 2; k <= 14; ++k) grid.push_back(0.025 * k);
  return grid;
}

void PredictionConfig::validate() const {
  require(sigma > 0.0, "prediction: sigma must be > 0");
  require(p_c > 0.0 && p_c < 1.0, "prediction: p_c must lie in (0, 1)");
  require(horizon >= 2 && subjects >= 1, "prediction: need T >= 2 and at least one subject");
  require(d_theta > 0.0 && d_sigma_c > 0.0 && d_delta > 0.0 && d_p > 0.0, "prediction: bin widths must be > 0");
  require(!delta_grid.empty() && !p_grid.empty(), "prediction: grids must be non-empty");
}

std::optional<std::size_t> nearest_bin(double value, const std::vector<double>& grid, double half_width) {
  std::optional<std::size_t> best;
  double best_dist = half_width;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double dist = std::abs(value - grid[k]);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  return best;
}

namespace {

std::pair<std::optional<double>, std::optional<double>> mean_sem(const std::vector<double>& xs) {
  if (xs.empty()) return {std::nullopt, std::nullopt};
  const Eigen::Map<const Eigen::ArrayXd> a(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const double mean = a.mean();
  if (xs.size() < 2) return {mean, std::nullopt};
  const double var = (a - mean).square().sum() / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// Per-subject accumulators: sum and count of both surprises per bin.
struct BinAccumulator {
  std::vector<double> sum_sbf, sum_ssh;
  std::vector<long> count;

  BinAccumulator() = default;
  explicit BinAccumulator(std::size_t bins) : sum_sbf(bins, 0.0), sum_ssh(bins, 0.0), count(bins, 0) {}

  void add(std::size_t bin, const SurpriseRecord& rec) {
    sum_sbf[bin] += rec.s_bf;
    sum_ssh[bin] += rec.s_sh_current;
    ++count[bin];
  }
};

struct Subject {
  EnvTrace trace;
  RunResult result;
};

Subject run_subject(const PredictionConfig& config, std::size_t index) {
  const std::uint64_t seed = config.seed + index;
  const EnvConfig env = gaussian_task(config.sigma, config.p_c, config.horizon, seed);
  Subject s{simulate(env), {}};
  s.result = run(config.algorithm, env.model, s.trace, seed);
  return s;
}

std::vector<BinSummary> reduce(const std::vector<BinAccumulator>& per_subject, std::size_t bins) {
  std::vector<BinSummary> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    std::vector<double> sbf, ssh;
    for (const auto& acc : per_subject) {
      if (acc.count[b] == 0) continue;
      sbf.push_back(acc.sum_sbf[b] / static_cast<double>(acc.count[b]));
      ssh.push_back(acc.sum_ssh[b] / static_cast<double>(acc.count[b]));
    }
    out[b] = summarize(sbf, ssh);
  }
  return out;
}

}  // namespace

BinSummary summarize(const std::vector<double>& sbf, const std::vector<double>& ssh) {
  require(sbf.size() == ssh.size(), "summarize: sample sizes differ");
  BinSummary s;
  s.subjects = static_cast<int>(sbf.size());
  std::tie(s.mean_sbf, s.sem_sbf) = mean_sem(sbf);
  std::tie(s.mean_ssh, s.sem_ssh) = mean_sem(ssh);
  return s;
}

std::vector<Prediction1Row> run_prediction1(const PredictionConfig& config) {
  config.validate();
  const std::size_t nd = config.delta_grid.size();
  // bin = 2 * delta_index + (sign < 0)
  const auto per_subject = parallel_map(static_cast<std::size_t>(config.subjects), config.threads, [&](std::size_t i) {
    const Subject subject = run_subject(config, i);
    const RunResult& res = subject.result;
    const EnvTrace& trace = subject.trace;
    BinAccumulator acc(2 * nd);
    for (int k = 1; k < res.horizon(); ++k) {
      const double prev = res.estimates(0, k - 1);
      const double y = std::get<double>(trace.observations[static_cast<std::size_t>(k)]);
      const double delta = y - prev;
      const double prod = delta * prev;
      if (prod == 0.0) continue;
      if (!(std::abs(std::abs(prev) - config.theta_anchor) < config.d_theta)) continue;
      if (!(std::abs(res.spreads(k) - config.sigma_c) < config.d_sigma_c)) continue;
      const auto bin = nearest_bin(std::abs(delta), config.delta_grid, config.d_delta);
      if (!bin) continue;
      acc.add(2 * *bin + (prod < 0.0 ? 1 : 0), res.surprises[static_cast<std::size_t>(k)]);
    }
    return acc;
  });
  const std::vector<BinSummary> summary = reduce(per_subject, 2 * nd);
  std::vector<Prediction1Row> rows;
  for (std::size_t d = 0; d < nd; ++d) {
    rows.push_back({config.delta_grid[d], +1, summary[2 * d]});
    rows.push_back({config.delta_grid[d], -1, summary[2 * d + 1]});
  }
  return rows;
}

std::vector<Prediction2Row> run_prediction2(const PredictionConfig& config) {
  config.validate();
  const std::size_t np = config.p_grid.size();
  const auto per_subject = parallel_map(static_cast<std::size_t>(config.subjects), config.threads, [&](std::size_t i) {
    const RunResult res = run_subject(config, i).result;
    BinAccumulator acc(np);
    for (const SurpriseRecord& rec : res.surprises) {
      const double p_prior = std::exp(-rec.s_sh_prior);
      const double p_current = p_prior / rec.s_bf;
      const auto bin = nearest_bin(p_current, config.p_grid, config.d_p);
      if (!bin || !(std::abs(p_prior - config.p_grid[*bin]) < config.d_p)) continue;
      acc.add(*bin, rec);
    }
    return acc;
  });
  const std::vector<BinSummary> summary = reduce(per_subject, np);
  std::vector<Prediction2Row> rows;
  for (std::size_t b = 0; b < np; ++b) rows.push_back({config.p_grid[b], summary[b]});
  return rows;
}

std::vector<SignGap> sign_gaps(const std::vector<Prediction1Row>& rows) {
  std::vector<SignGap> gaps;
  for (std::size_t k = 0; k + 1 < rows.size(); k += 2) {
    const Prediction1Row& plus = rows[k];
    const Prediction1Row& minus = rows[k + 1];
    require(plus.delta == minus.delta && plus.sign == 1 && minus.sign == -1, "sign_gaps: rows are not paired");
    SignGap g{plus.delta, false, 0.0, 0.0, 0.0, 0.0};
    const BinSummary& a = plus.summary;
    const BinSummary& b = minus.summary;
    if (a.subjects >= 2 && b.subjects >= 2) {
      g.populated = true;
      g.gap_sbf = *a.mean_sbf - *b.mean_sbf;
      g.gap_ssh = *a.mean_ssh - *b.mean_ssh;
      g.se_sbf = std::hypot(*a.sem_sbf, *b.sem_sbf);
      g.se_ssh = std::hypot(*a.sem_ssh, *b.sem_ssh);
    }
    gaps.push_back(g);
  }
  return gaps;
}

void write_prediction1_csv(std::ostream& out, const std::vector<Prediction1Row>& rows) {
  out << "delta,sign,mean_sbf,sem_sbf,mean_ssh,sem_ssh\n";
  for (const auto& r : rows) {
    out << format_number(r.delta) << ',' << r.sign << ',' << format_number(r.summary.mean_sbf) << ','
        << format_number(r.summary.sem_sbf) << ',' << format_number(r.summary.mean_ssh) << ','
        << format_number(r.summary.sem_ssh) << '\n';
  }
}

void write_prediction2_csv(std::ostream& out, const std::vector<Prediction2Row>& rows) {
  out << "p,mean_sbf,sem_sbf,mean_ssh,sem_ssh\n";
  for (const auto& r : rows) {
    out << format_number(r.p) << ',' << format_number(r.summary.mean_sbf) << ',' << format_number(r.summary.sem_sbf)
        << ',' << format_number(r.summary.mean_ssh) << ',' << format_number(r.summary.sem_ssh) << '\n';
  }
}

}  // namespace smile
