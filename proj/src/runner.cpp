#include "smile/runner.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>

#include "smile/errors.hpp"
#include "smile/io.hpp"

namespace smile {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int parse_count(const std::string& digits, const std::string& token) {
  int value = 0;
  const auto* end = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (digits.empty() || ec != std::errc() || ptr != end || value < 1)
    throw ContractViolation("bad particle count in algorithm name '" + token + "'");
  return value;
}

template <class Family>
RunResult dispatch(const AlgorithmSpec& spec, const Family& family, const EnvTrace& trace, Rng& rng,
                   const RunOptions& options) {
  switch (spec.kind) {
    case Algorithm::ExactBayes: {
      MessagePassing<Family> est(family, change_odds(spec.param), 0, spec.weight_cutoff);
      return run_estimator(est, trace, rng, options);
    }
    case Algorithm::MPN: {
      MessagePassing<Family> est(family, change_odds(spec.param), spec.particles, spec.weight_cutoff);
      return run_estimator(est, trace, rng, options);
    }
    case Algorithm::PF: {
      ParticleFilter<Family> est(family, change_odds(spec.param), spec.particles, spec.resample_fraction);
      return run_estimator(est, trace, rng, options);
    }
    case Algorithm::VarSmile: {
      VarSmile<Family> est(family, spec.param);
      return run_estimator(est, trace, rng, options);
    }
    case Algorithm::Smile: {
      Smile<Family> est(family, spec.param);
      return run_estimator(est, trace, rng, options);
    }
    case Algorithm::Nas10:
    case Algorithm::Nas12: {
      if constexpr (is_gaussian_v<Family>) {
        NasStar<double> est(family, change_odds(spec.param),
                            spec.kind == Algorithm::Nas10 ? NasVariant::Nas10 : NasVariant::Nas12);
        return run_estimator(est, trace, rng, options);
      } else {
        throw UnsupportedModel(algorithm_label(spec) + " needs a Gaussian model with known variance");
      }
    }
    case Algorithm::Leaky: {
      LeakyIntegrator<Family> est(family, spec.param, spec.record_m);
      return run_estimator(est, trace, rng, options);
    }
  }
  throw ContractViolation("unknown algorithm kind");
}

}  // namespace

AlgorithmSpec parse_algorithm(const std::string& token) {
  const std::string name = lower(token);
  AlgorithmSpec spec;
  if (name == "exact" || name == "exactbayes") {
    spec.kind = Algorithm::ExactBayes;
  } else if (name == "varsmile") {
    spec.kind = Algorithm::VarSmile;
    spec.param = 0.1;
  } else if (name == "smile") {
    spec.kind = Algorithm::Smile;
    spec.param = 0.1;
  } else if (name == "nas10") {
    spec.kind = Algorithm::Nas10;
  } else if (name == "nas12") {
    spec.kind = Algorithm::Nas12;
  } else if (name == "leaky") {
    spec.kind = Algorithm::Leaky;
    spec.param = 0.9;
  } else if (name.rfind("mp", 0) == 0) {
    spec.kind = Algorithm::MPN;
    spec.particles = parse_count(name.substr(2), token);
  } else if (name.rfind("pf", 0) == 0) {
    spec.kind = Algorithm::PF;
    spec.particles = parse_count(name.substr(2), token);
  } else {
    throw ContractViolation("unknown algorithm '" + token + "'");
  }
  return spec;
}

std::string algorithm_label(const AlgorithmSpec& spec) {
  switch (spec.kind) {
    case Algorithm::ExactBayes: return "exact";
    case Algorithm::MPN: return "mp" + std::to_string(spec.particles);
    case Algorithm::PF: return "pf" + std::to_string(spec.particles);
    case Algorithm::VarSmile: return "varsmile";
    case Algorithm::Smile: return "smile";
    case Algorithm::Nas10: return "nas10";
    case Algorithm::Nas12: return "nas12";
    case Algorithm::Leaky: return "leaky";
  }
  return "unknown";
}

bool uses_change_probability(Algorithm kind) {
  switch (kind) {
    case Algorithm::ExactBayes:
    case Algorithm::MPN:
    case Algorithm::PF:
    case Algorithm::Nas10:
    case Algorithm::Nas12: return true;
    default: return false;
  }
}

RunResult run(const AlgorithmSpec& spec, const ConjugateModel& model, const EnvTrace& trace, std::uint64_t seed,
              const RunOptions& options) {
  require(trace.horizon() >= 1, "run: empty trace");
  Rng rng(seed, 2);
  return std::visit([&](const auto& family) { return dispatch(spec, family, trace, rng, options); }, model);
}

void write_step_csv(std::ostream& out, const EnvTrace& trace, const RunResult& result) {
  require(result.horizon() == trace.horizon(), "write_step_csv: result and trace lengths differ");
  require(static_cast<int>(result.surprises.size()) == result.horizon(), "write_step_csv: surprises were not kept");
  const Eigen::Index dim = result.estimates.rows();
  out << "t,y";
  if (dim == 1)
    out << ",estimate";
  else
    for (Eigen::Index k = 1; k <= dim; ++k) out << ",estimate" << k;
  out << ",s_bf,s_sh,gamma\n";
  for (int t = 0; t < result.horizon(); ++t) {
    const Observation& y = trace.observations[static_cast<std::size_t>(t)];
    out << t + 1 << ',';
    if (const auto* c = std::get_if<Category>(&y))
      out << c->index;
    else
      out << format_number(std::get<double>(y));
    for (Eigen::Index k = 0; k < dim; ++k) out << ',' << format_number(result.estimates(k, t));
    const SurpriseRecord& rec = result.surprises[static_cast<std::size_t>(t)];
    out << ',' << format_number(rec.s_bf) << ',' << format_number(rec.s_sh_current) << ','
        << format_number(rec.gamma) << '\n';
  }
}

}  // namespace smile
