// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smile/benchmark.hpp"
#include "smile/evaluation.hpp"
#include "smile/predictions.hpp"
#include "smile/runner.hpp"
#include "support.hpp"

using namespace smile;
namespace st = smile::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double log_sum_exp(const std::vector<double>& xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (hi == -kInfinity) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// --- 1 ---------------------------------------------------------------------

Verdict brute_force_equivalence() {
  Rng rng(2024, 5);
  double worst = 0.0;
  int checked = 0;
  for (int c = 0; c < 100; ++c) {
    const int T = 2 + static_cast<int>(rng.uniform() * 11.0);
    const double p_c = 0.02 + 0.48 * rng.uniform();
    if (c < 50) {
      const GaussianModel f = st::random_gaussian_model(rng);
      MessagePassing<GaussianModel> exact(f, change_odds(p_c), 0, 0.0);
      std::vector<double> ys;
      for (int t = 0; t < T; ++t) {
        ys.push_back(rng.normal(f.prior_mean(), 1.5 * std::sqrt(f.prior_var()) + f.sigma()));
        exact.step(ys.back());
        worst = std::max(worst, (exact.estimate() - st::brute_force_posterior_mean(f, ys, p_c)).cwiseAbs().maxCoeff());
        ++checked;
      }
    } else {
      const CategoricalModel f = st::random_categorical_model(rng);
      MessagePassing<CategoricalModel> exact(f, change_odds(p_c), 0, 0.0);
      std::vector<Category> ys;
      for (int t = 0; t < T; ++t) {
        ys.push_back(st::random_category(f, rng));
        exact.step(ys.back());
        worst = std::max(worst, (exact.estimate() - st::brute_force_posterior_mean(f, ys, p_c)).cwiseAbs().maxCoeff());
        ++checked;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " posterior means, max abs error " + fmt(worst)};
}

// --- 2 ---------------------------------------------------------------------

// log N(x; mean, var)
double log_normal(double x, double mean, double var) {
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * (x - mean) * (x - mean) / var;
}

double log_dirichlet(const Eigen::VectorXd& alpha, const Eigen::VectorXd& p) {
  double out = std::lgamma(alpha.sum());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) out += (alpha(k) - 1.0) * std::log(p(k)) - std::lgamma(alpha(k));
  return out;
}

// (log gamma, log(1 - gamma)) for gamma = m S / (1 + m S), kept finite when gamma rounds to 0 or 1
std::pair<double, double> mixing_logs(bool empty, double m, double log_s) {
  if (empty) return {0.0, -kInfinity};
  const double x = std::log(m) + log_s;
  auto log1p_exp = [](double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); };
  return {-log1p_exp(-x), -log1p_exp(x)};
}

Verdict recursive_identity() {
  Rng rng(77, 5);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const double p_c = 0.01 + 0.5 * rng.uniform();
    const double m = change_odds(p_c);
    const int burn_in = static_cast<int>(rng.uniform() * 12.0);
    if (c % 2 == 0) {
      const GaussianModel f = st::random_gaussian_model(rng);
      const double s2 = f.sigma() * f.sigma();
      MessagePassing<GaussianModel> exact(f, m, 0, 0.0);
      for (int t = 0; t < burn_in; ++t) exact.step(rng.normal(f.prior_mean(), 2.0));
      const auto before = exact.particles();
      const double y = rng.normal(f.prior_mean(), 2.0);
      exact.step(y);
      const auto& after = exact.particles();

      // predictive of a Gaussian belief: N(y; chi/nu, sigma^2 (1 + 1/nu))
      auto lpred = [&](double chi, double nu) { return log_normal(y, chi / nu, s2 * (1.0 + 1.0 / nu)); };
      const Beliefd prior = f.prior();
      double lp_prior = lpred(prior.chi(0), prior.nu);
      std::vector<double> terms;
      const bool empty = before.size() == 0;
      if (!empty)
        for (Eigen::Index i = 0; i < before.size(); ++i)
          terms.push_back(std::log(before.weights()(i)) + lpred(before.chi()(0, i), before.nu()(i)));
      const double lp_current = empty ? lp_prior : log_sum_exp(terms);
      const auto [log_gamma, log_stay] = mixing_logs(empty, m, lp_prior - lp_current);

      double lo = kInfinity;
      double hi = -kInfinity;
      for (Eigen::Index i = 0; i < after.size(); ++i) {
        const double mean = after.chi()(0, i) / after.nu()(i);
        const double sd = std::sqrt(s2 / after.nu()(i));
        lo = std::min(lo, mean - 4.0 * sd);
        hi = std::max(hi, mean + 4.0 * sd);
      }
      for (int k = 0; k < 100; ++k) {
        const double th = lo + (hi - lo) * k / 99.0;
        std::vector<double> got;
        for (Eigen::Index i = 0; i < after.size(); ++i)
          got.push_back(std::log(after.weights()(i)) +
                        log_normal(th, after.chi()(0, i) / after.nu()(i), s2 / after.nu()(i)));
        const double lik = log_normal(y, th, s2);
        std::vector<double> old;
        if (!empty)
          for (Eigen::Index i = 0; i < before.size(); ++i)
            old.push_back(std::log(before.weights()(i)) +
                          log_normal(th, before.chi()(0, i) / before.nu()(i), s2 / before.nu()(i)));
        const double lpi_b = empty ? -kInfinity : log_sum_exp(old) + lik - lp_current;
        const double lpost0 = log_normal(th, prior.chi(0) / prior.nu, s2 / prior.nu) + lik - lp_prior;
        const double expected = log_sum_exp({log_stay + lpi_b, log_gamma + lpost0});
        worst = std::max(worst, std::abs(log_sum_exp(got) - expected));
      }
    } else {
      const CategoricalModel f = st::random_categorical_model(rng, 3);
      MessagePassing<CategoricalModel> exact(f, m, 0, 0.0);
      for (int t = 0; t < burn_in; ++t) exact.step(st::random_category(f, rng));
      const auto before = exact.particles();
      const Category y = st::random_category(f, rng);
      const int j = y.index - 1;
      exact.step(y);
      const auto& after = exact.particles();

      const Eigen::VectorXd a0 = f.prior_alpha();
      const double lp_prior = std::log(a0(j) / a0.sum());
      std::vector<double> terms;
      const bool empty = before.size() == 0;
      for (Eigen::Index i = 0; i < before.size(); ++i) {
        const Eigen::VectorXd a = before.chi().col(i);
        terms.push_back(std::log(before.weights()(i)) + std::log(a(j) / a.sum()));
      }
      const double lp_current = empty ? lp_prior : log_sum_exp(terms);
      const auto [log_gamma, log_stay] = mixing_logs(empty, m, lp_prior - lp_current);

      for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd p(3);
        for (int q = 0; q < 3; ++q) p(q) = -std::log(1.0 - rng.uniform() * 0.999);
        p /= p.sum();
        std::vector<double> got;
        for (Eigen::Index i = 0; i < after.size(); ++i)
          got.push_back(std::log(after.weights()(i)) + log_dirichlet(after.chi().col(i), p));
        const double lik = std::log(p(j));
        std::vector<double> old;
        for (Eigen::Index i = 0; i < before.size(); ++i)
          old.push_back(std::log(before.weights()(i)) + log_dirichlet(before.chi().col(i), p));
        const double lpi_b = empty ? -kInfinity : log_sum_exp(old) + lik - lp_current;
        const double lpost0 = log_dirichlet(a0, p) + lik - lp_prior;
        const double expected = log_sum_exp({log_stay + lpi_b, log_gamma + lpost0});
        worst = std::max(worst, std::abs(log_sum_exp(got) - expected));
      }
    }
  }
  return {worst <= 1e-10, "200 steps x 100 points, max |log ratio| " + fmt(worst)};
}

// --- 3 ---------------------------------------------------------------------

Verdict exactness_window() {
  Rng rng(303, 5);
  int mismatches = 0;
  for (int c = 0; c < 100; ++c) {
    const double m = change_odds(0.01 + 0.3 * rng.uniform());
    if (c % 2 == 0) {
      const GaussianModel f = st::random_gaussian_model(rng);
      MessagePassing<GaussianModel> exact(f, m);
      MessagePassing<GaussianModel> mp(f, m, 20);
      for (int t = 0; t < 20; ++t) {
        const double y = rng.normal(0.0, 2.0);
        exact.step(y);
        mp.step(y);
        mismatches += !(exact.estimate() == mp.estimate());
      }
    } else {
      const CategoricalModel f = st::random_categorical_model(rng);
      MessagePassing<CategoricalModel> exact(f, m);
      MessagePassing<CategoricalModel> mp(f, m, 20);
      for (int t = 0; t < 20; ++t) {
        const Category y = st::random_category(f, rng);
        exact.step(y);
        mp.step(y);
        mismatches += !(exact.estimate() == mp.estimate());
      }
    }
  }
  return {mismatches == 0, "2000 estimate pairs, " + std::to_string(mismatches) + " differ"};
}

// --- 4 ---------------------------------------------------------------------

double record_m(const AlgorithmSpec& spec) {
  switch (spec.kind) {
    case Algorithm::VarSmile:
    case Algorithm::Smile: return spec.param;
    case Algorithm::Leaky: return spec.record_m;
    default: return change_odds(spec.param);
  }
}

Verdict shannon_identity() {
  double worst = 0.0;
  long steps = 0;
  std::string worst_where = "-";
  for (int family = 0; family < 2; ++family) {
    const EnvConfig env = family == 0 ? gaussian_task(0.5, 0.05, 10000, 4) : categorical_task(0.25, 0.05, 10000, 4);
    const EnvTrace trace = simulate(env);
    for (const char* name : {"exact", "mp20", "pf20", "varsmile", "smile", "nas10", "nas12", "leaky"}) {
      AlgorithmSpec spec = parse_algorithm(name);
      if (family == 1 && (spec.kind == Algorithm::Nas10 || spec.kind == Algorithm::Nas12)) continue;
      spec.param = uses_change_probability(spec.kind) ? 0.05 : (spec.kind == Algorithm::Leaky ? 0.9 : 0.1);
      spec.record_m = 0.1;
      const double m = record_m(spec);
      const double p_c = m / (1.0 + m);
      const RunResult res = run(spec, env.model, trace, 4, RunOptions{true, false});
      for (const SurpriseRecord& rec : res.surprises) {
        ++steps;
        const double other = gamma_from_shannon(rec.s_sh_current, rec.s_sh_prior, p_c);
        if (rec.gamma < 1e-300 && other < 1e-300) continue;
        const double gap = relative_gap(rec.gamma, other);
        if (gap > worst) {
          worst = gap;
          worst_where = algorithm_label(spec) + (family == 0 ? "/gaussian" : "/categorical");
        }
      }
    }
  }
  return {worst <= 1e-12, std::to_string(steps) + " steps, max relative gap " + fmt(worst) + " (" + worst_where + ")"};
}

// --- 5 ---------------------------------------------------------------------

Verdict pf1_nas10() {
  Rng rng(55, 5);
  double worst = 0.0;
  int inconsistent = 0;
  for (int c = 0; c < 1000; ++c) {
    const GaussianModel f = st::random_gaussian_model(rng);
    const double m = change_odds(0.001 + 0.5 * rng.uniform());
    const double r = 20.0 * rng.uniform();
    const double var = 1.0 / (1.0 / f.prior_var() + r / (f.sigma() * f.sigma()));
    const double mu = rng.normal(f.prior_mean(), 1.0);
    const double y = rng.normal(mu, 2.0 * f.sigma());
    const Beliefd b = f.from_moments(mu, var);
    const double g = adaptation_rate(surprise_bf(ConjugateModel{f}, b, y), m);
    const double stay = f.mean(f.bayes_update(b, y));
    const double reset = f.mean(f.bayes_update(f.prior(), y));
    const double expected = (1.0 - g) * stay + g * reset;

    NasStar<double> nas(f, m, NasVariant::Nas10, {mu, var, r});
    nas.step(y);
    worst = std::max(worst, std::abs(nas.state().mu - expected) / std::max(1.0, std::abs(expected)));

    ParticleFilter<GaussianModel> pf(f, m, 1, 0.5, b);
    const SurpriseRecord rec = pf.step(y, rng);
    const double got = pf.estimate()(0);
    const bool branch = std::abs(got - stay) <= 1e-12 * std::max(1.0, std::abs(stay)) ||
                        std::abs(got - reset) <= 1e-12 * std::max(1.0, std::abs(reset));
    inconsistent += !(branch && relative_gap(rec.gamma, g) <= 1e-12);
  }
  return {worst <= 1e-12 && inconsistent == 0,
          "1000 states, max error " + fmt(worst) + ", " + std::to_string(inconsistent) + " pf1 branch mismatches"};
}

// --- 6 ---------------------------------------------------------------------

AlgorithmSpec tuned(const char* name, const EnvConfig& env) {
  EnvConfig tune_env = env;
  tune_env.horizon = 20000;
  AlgorithmSpec spec = parse_algorithm(name);
  spec.weight_cutoff = kPracticalCutoff;
  return resolve_parameter(spec, tune_env, 3);
}

double mean_row(const Eigen::MatrixXd& m, Eigen::Index row) { return m.row(row).mean(); }

Verdict gaussian_benchmark() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [sigma, p_c] : std::vector<std::pair<double, double>>{{0.1, 0.1}, {5.0, 0.01}}) {
    const EnvConfig env = gaussian_task(sigma, p_c, 100000, 1);
    std::vector<AlgorithmSpec> algs{tuned("pf20", env), tuned("varsmile", env), tuned("smile", env),
                                    tuned("leaky", env)};
    const CellReport cell = benchmark_cell(algs, env, 10, 10);
    const double pf = mean_row(cell.delta_mse, 0);
    const double var = mean_row(cell.delta_mse, 1);
    const double sm = mean_row(cell.delta_mse, 2);
    const double lk = mean_row(cell.delta_mse, 3);
    const bool ordering = pf < 1.5 * sm && pf < lk && var < 1.5 * sm && var < lk;

    // transient curves over n = 1..10
    auto deviation = [&](std::size_t a, bool relative) {
      double acc = 0.0;
      for (std::size_t n = 0; n < 10; ++n) {
        const double ex = *cell.exact_transient[n];
        const double d = std::abs(*cell.transient[a][n] - ex);
        acc += relative ? d / ex : d;
      }
      return acc / 10.0;
    };
    const double pf_rel = deviation(0, true);
    const bool transient = pf_rel < 0.10 && deviation(0, false) < deviation(2, false) &&
                           deviation(0, false) < deviation(3, false);
    ok = ok && ordering && transient;
    detail << "sigma=" << sigma << ",pc=" << p_c << ": dMSE pf20 " << fmt(pf) << " varsmile " << fmt(var)
           << " smile " << fmt(sm) << " (m=" << fmt(algs[2].param) << ") leaky " << fmt(lk)
           << " (w=" << fmt(algs[3].param) << "), pf20 transient dev " << fmt(100.0 * pf_rel) << "%"
           << (ordering ? "" : " [ordering fails]") << (transient ? "" : " [transient fails]") << "; ";
  }
  return {ok, detail.str()};
}

// --- 7, 8 ------------------------------------------------------------------

Verdict worst_case_anchor() {
  const EnvConfig env = gaussian_task(5.0, 0.001, 200000, 1);
  const CellReport cell = benchmark_cell({tuned("pf20", env)}, env, 10, 1);
  const SampleSummary s = summarize_sample(cell.delta_mse.row(0).transpose().array());
  return {s.mean < 0.06, "pf20 dMSE " + fmt(s.mean) + " +- " + fmt(s.sem) + " (threshold 0.06)"};
}

Verdict categorical_anchor() {
  const EnvConfig env = categorical_task(0.25, 0.005, 100000, 1);
  const CellReport cell = benchmark_cell({tuned("exact", env), tuned("pf20", env)}, env, 10, 1);
  const bool exact_zero = (cell.delta_mse.row(0).array() == 0.0).all();
  const SampleSummary s = summarize_sample(cell.delta_mse.row(1).transpose().array());
  return {exact_zero && s.mean < 0.01, "pf20 dMSE " + fmt(s.mean) + " +- " + fmt(s.sem) +
                                           " (threshold 0.01), exact column identically zero: " +
                                           (exact_zero ? "yes" : "no")};
}

// --- 9, 10 -----------------------------------------------------------------

std::vector<AlgorithmSpec> prediction_algorithms() {
  const EnvConfig env = gaussian_task(0.5, 0.1, 10000, 1);
  AlgorithmSpec nas = parse_algorithm("nas12");
  nas = resolve_parameter(nas, env, 3);
  AlgorithmSpec pf = parse_algorithm("pf20");
  pf.param = 0.1;
  return {nas, pf};
}

Verdict prediction_one(const std::vector<AlgorithmSpec>& algs) {
  bool ok = !algs.empty();
  std::ostringstream detail;
  for (const AlgorithmSpec& alg : algs) {
    PredictionConfig cfg;
    cfg.algorithm = alg;
    const auto gaps = sign_gaps(run_prediction1(cfg));
    int populated = 0;
    int wrong = 0;
    const SignGap* last = nullptr;
    for (const SignGap& g : gaps) {
      if (!g.populated) continue;
      ++populated;
      wrong += !(g.gap_sbf < 0.0 && g.gap_ssh > 0.0);
      last = &g;
    }
    const bool strong = last && -last->gap_sbf > 2.0 * last->se_sbf && last->gap_ssh > 2.0 * last->se_ssh;
    ok = ok && populated > 0 && wrong == 0 && strong;
    detail << algorithm_label(alg) << ": " << populated << " bins, " << wrong << " with a wrong sign";
    if (last)
      detail << ", at delta=" << fmt(last->delta) << " gaps " << fmt(last->gap_sbf) << " (se " << fmt(last->se_sbf)
             << ") / " << fmt(last->gap_ssh) << " (se " << fmt(last->se_ssh) << ")";
    detail << "; ";
  }
  return {ok, detail.str()};
}

Verdict prediction_two(const std::vector<AlgorithmSpec>& algs) {
  bool ok = !algs.empty();
  std::ostringstream detail;
  for (const AlgorithmSpec& alg : algs) {
    PredictionConfig cfg;
    cfg.algorithm = alg;
    const auto rows = run_prediction2(cfg);
    int populated = 0;
    int outside = 0;
    int rises = 0;
    double lo = kInfinity;
    double hi = -kInfinity;
    std::optional<double> previous;
    for (const auto& r : rows) {
      if (!r.summary.mean_sbf) continue;
      ++populated;
      const double sbf = *r.summary.mean_sbf;
      lo = std::min(lo, sbf);
      hi = std::max(hi, sbf);
      outside += sbf < 0.9 || sbf > 1.1;
      if (previous && !(*r.summary.mean_ssh < *previous)) ++rises;
      previous = *r.summary.mean_ssh;
    }
    ok = ok && populated > 0 && outside == 0 && rises == 0;
    detail << algorithm_label(alg) << ": " << populated << " bins, S_BF in [" << fmt(lo) << ", " << fmt(hi) << "], "
           << rises << " non-decreasing S_Sh steps; ";
  }
  return {ok, detail.str()};
}

// --- 11 --------------------------------------------------------------------

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> a = ranks(x);
  const std::vector<double> b = ranks(y);
  const Eigen::Map<const Eigen::ArrayXd> ra(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Eigen::ArrayXd> rb(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::ArrayXd ca = ra - ra.mean();
  const Eigen::ArrayXd cb = rb - rb.mean();
  return (ca * cb).sum() / std::sqrt(ca.square().sum() * cb.square().sum());
}

Verdict robustness() {
  const std::vector<double> levels = change_probability_levels();
  std::vector<double> distance;
  std::vector<double> regret;
  bool matched_ok = true;
  double matched_worst = 0.0;
  for (double assumed : levels) {
    AlgorithmSpec exact = parse_algorithm("exact");
    exact.param = assumed;
    exact.weight_cutoff = kPracticalCutoff;
    const RegretCurve curve = regret_curve(exact, gaussian_task(0.1, assumed, 20000, 1), levels, 3);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const SampleSummary s = summarize_sample(curve.regret.row(static_cast<Eigen::Index>(j)).transpose().array());
      if (levels[j] == assumed) {
        matched_ok = matched_ok && std::abs(s.mean) <= 3.0 * (std::isnan(s.sem) ? 0.0 : s.sem);
        matched_worst = std::max(matched_worst, std::abs(s.mean));
        continue;
      }
      distance.push_back(std::abs(std::log(assumed / levels[j])));
      regret.push_back(s.mean);
    }
  }
  const double rho = spearman(distance, regret);
  return {matched_ok && rho > 0.0,
          "matched |regret| max " + fmt(matched_worst) + ", rank correlation " + fmt(rho) + " over " +
              std::to_string(regret.size()) + " mismatched pairs"};
}

// --- 12 --------------------------------------------------------------------

Verdict property_suites() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& outcome : st::all_properties()) {
    ok = ok && outcome.ok();
    detail << outcome.name << " " << outcome.cases - outcome.failures << "/" << outcome.cases;
    if (!outcome.ok()) detail << " (" << outcome.first_failure << ")";
    detail << "; ";
  }
  return {ok, detail.str()};
}

}  // namespace

int main() {
  int failures = 0;
  auto check = [&](int id, const char* title, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s [%d] %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
  };

  check(1, "exact inference matches brute-force enumeration", brute_force_equivalence);
  check(2, "one exact step equals the surprise-weighted mixture of two posteriors", recursive_identity);
  check(3, "mp20 equals exact inference over the first 20 steps", exactness_window);
  check(4, "gamma from S_BF equals gamma from the Shannon surprise difference", shannon_identity);
  check(5, "pf1 branch average equals the Nas10* mean update", pf1_nas10);
  check(6, "Gaussian benchmark ordering and transient curves", gaussian_benchmark);
  check(7, "worst-case Gaussian cell for pf20", worst_case_anchor);
  check(8, "categorical anchor for pf20", categorical_anchor);
  std::vector<AlgorithmSpec> algs;
  try {
    algs = prediction_algorithms();
  } catch (const std::exception& e) {
    std::printf("prediction tuning failed: %s\n", e.what());
  }
  check(9, "prediction 1: opposite sign bias of S_BF and S_Sh", [&] { return prediction_one(algs); });
  check(10, "prediction 2: S_BF flat in p, S_Sh decreasing", [&] { return prediction_two(algs); });
  check(11, "robustness of exact inference to a mismatched change probability", robustness);
  check(12, "randomized property suites", property_suites);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
