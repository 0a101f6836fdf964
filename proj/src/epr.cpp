#include "lhv/epr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lhv/errors.hpp"

namespace lhv::epr {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream ids for the per-event substreams.
enum Stream : std::uint64_t {
  kLambda = 0,
  kWingA = 1,
  kWingB = 2,
  kImpactA = 3,
  kImpactB = 4,
};

/// Piecewise-constant sampler on [0, 1) by inverse CDF.
class BinSampler {
 public:
  explicit BinSampler(const std::vector<double>& weights) {
    if (weights.empty()) return;
    cdf_.resize(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0)) throw parameter_error("distribution weights must be nonnegative");
      total += weights[i];
      cdf_[i] = total;
    }
    if (!(total > 0.0)) throw parameter_error("distribution weights must not all vanish");
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  bool uniform() const { return cdf_.empty(); }

  double sample(double u) const {
    if (cdf_.empty()) return u;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t bin = static_cast<std::size_t>(it - cdf_.begin());
    const double lo = bin == 0 ? 0.0 : cdf_[bin - 1];
    const double width = cdf_[bin] - lo;
    const double frac = width > 0.0 ? (u - lo) / width : 0.0;
    return (static_cast<double>(bin) + frac) / static_cast<double>(cdf_.size());
  }

 private:
  std::vector<double> cdf_;
};

double table_at(const std::vector<double>& table, double x) {
  const auto n = static_cast<double>(table.size());
  auto idx = static_cast<std::size_t>(x * n);
  if (idx >= table.size()) idx = table.size() - 1;
  return table[idx];
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t event, std::uint64_t stream) {
  const std::uint64_t h = mix64(seed ^ mix64(event ^ mix64(stream)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

CoincidenceCounts merge(const CoincidenceCounts& a, const CoincidenceCounts& b) {
  if (a.alpha != b.alpha || a.beta != b.beta) {
    throw statistics_error("cannot merge counts taken at different settings");
  }
  return {a.events + b.events,          a.both_pass + b.both_pass,
          a.pass_absorb + b.pass_absorb, a.absorb_pass + b.absorb_pass,
          a.both_absorb + b.both_absorb, a.alpha,
          a.beta};
}

CoincidenceCounts simulate_coincidence_range(const PairSource& source,
                                             const polarizer::TransferProfile& p, double alpha,
                                             double beta, std::uint64_t first,
                                             std::uint64_t last) {
  if (first > last) throw parameter_error("event range is reversed");
  const BinSampler lambda_sampler(source.lambda_weights);
  const bool with_impact = source.impact.has_value();
  const BinSampler impact_sampler(with_impact ? source.impact->density
                                              : std::vector<double>{});

  CoincidenceCounts counts;
  counts.alpha = alpha;
  counts.beta = beta;
  counts.events = last - first;

  for (std::uint64_t e = first; e < last; ++e) {
    const double lambda = kPi * lambda_sampler.sample(uniform01(source.seed, e, kLambda));
    double ta = p.transmission_at(lambda - alpha);
    double tb = p.transmission_at(lambda - beta);
    if (with_impact) {
      const double ba = impact_sampler.sample(uniform01(source.seed, e, kImpactA));
      const double bb = impact_sampler.sample(uniform01(source.seed, e, kImpactB));
      ta *= table_at(source.impact->weight, ba);
      tb *= table_at(source.impact->weight, bb);
    }
    const bool pass_a = uniform01(source.seed, e, kWingA) < ta;
    const bool pass_b = uniform01(source.seed, e, kWingB) < tb;
    if (pass_a && pass_b) {
      ++counts.both_pass;
    } else if (pass_a) {
      ++counts.pass_absorb;
    } else if (pass_b) {
      ++counts.absorb_pass;
    } else {
      ++counts.both_absorb;
    }
  }
  return counts;
}

CoincidenceCounts simulate_coincidences(const PairSource& source,
                                        const polarizer::TransferProfile& p, double alpha,
                                        double beta, std::uint64_t n) {
  return simulate_coincidence_range(source, p, alpha, beta, 0, n);
}

Correlation correlation(const CoincidenceCounts& counts) {
  if (counts.events == 0) throw statistics_error("correlation of an empty count record");
  const double n = static_cast<double>(counts.events);
  const double agree = static_cast<double>(counts.both_pass + counts.both_absorb);
  const double disagree = static_cast<double>(counts.pass_absorb + counts.absorb_pass);
  const double e = (agree - disagree) / n;
  const double q = agree / n;
  const double se = 2.0 * std::sqrt(std::max(q * (1.0 - q), 0.0) / n);
  return {e, se};
}

ChshScore chsh(const std::array<Correlation, 4>& correlations) {
  for (const auto& c : correlations) {
    if (std::abs(c.value) > 1.0 + 1e-12) {
      throw statistics_error("correlation outside [-1, 1]: " + std::to_string(c.value));
    }
  }
  ChshScore score;
  score.correlations = correlations;
  score.s = correlations[0].value + correlations[1].value + correlations[2].value -
            correlations[3].value;
  double var = 0.0;
  for (const auto& c : correlations) var += c.standard_error * c.standard_error;
  score.standard_error = std::sqrt(var);
  return score;
}

double quantum_correlation(double alpha, double beta) {
  return std::cos(2.0 * (alpha - beta));
}

double quantum_chsh(const ChshSettings& s) {
  return quantum_correlation(s.alpha, s.beta) + quantum_correlation(s.alpha_prime, s.beta) +
         quantum_correlation(s.alpha, s.beta_prime) -
         quantum_correlation(s.alpha_prime, s.beta_prime);
}

ChshSettings canonical_settings() {
  // Assignment of the canonical angles {0, pi/4, pi/8, 3pi/8} that drives the
  // four-term combination (minus on the primed-primed term) to 2*sqrt(2).
  return {kPi / 4.0, 0.0, kPi / 8.0, 3.0 * kPi / 8.0};
}

ChshRun run_chsh(const PairSource& source, const polarizer::TransferProfile& p,
                 const ChshSettings& settings, std::uint64_t n) {
  const std::array<std::pair<double, double>, 4> pairs{{
      {settings.alpha, settings.beta},
      {settings.alpha_prime, settings.beta},
      {settings.alpha, settings.beta_prime},
      {settings.alpha_prime, settings.beta_prime},
  }};
  ChshRun run;
  std::array<Correlation, 4> correlations;
  for (std::size_t i = 0; i < 4; ++i) {
    PairSource sub = source;
    sub.seed = mix64(source.seed ^ (0xA11CE000 + i));
    run.counts[i] = simulate_coincidences(sub, p, pairs[i].first, pairs[i].second, n);
    correlations[i] = correlation(run.counts[i]);
  }
  run.score = chsh(correlations);
  return run;
}

ArrangementComparison arrangement_equivalence(const polarizer::TransferProfile& p,
                                              double alpha) {
  // One-side arrangement: the photon crosses the 0-axis polarizer, then the
  // alpha-axis one, polarization unchanged in between.  Assembled as a direct
  // node sum against the trigonometric interpolant.
  const auto& grid = p.grid();
  const std::size_t n = grid.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += p.samples()[j] * p.trig_at(grid.node(j) - alpha);
  }
  const double one_side = acc / static_cast<double>(n);

  // Coincidence arrangement: the wings see axes 0 and alpha with a shared
  // lambda; the pair rate is the spectral correlation at alpha.
  const double coincidence = pair_transmission(p, p, alpha);

  return {one_side, coincidence, one_side - coincidence};
}

}  // namespace lhv::epr
