#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "lhv/polarizer.hpp"

namespace lhv::epr {

/// Default root seed for reproducible runs.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Stateless 64-bit mixer (SplitMix64 finalizer).  Substreams are derived
/// from (seed, event counter, stream id), so event generation is independent
/// of evaluation order and can be split across disjoint counter ranges.
std::uint64_t mix64(std::uint64_t x);

/// Uniform double in [0, 1) for one (seed, event, stream) triple.
double uniform01(std::uint64_t seed, std::uint64_t event, std::uint64_t stream);

/// Per-photon impact-parameter model: b is drawn from a piecewise-constant
/// density on [0, 1), independently for the two wings, and multiplies the
/// wing's transmission probability by weight(b).
struct ImpactModel {
  std::vector<double> density;  // unnormalized bin weights on [0, 1)
  std::vector<double> weight;   // transmission weight w(b) in [0, 1], sampled on [0, 1)
};

/// Source of photon pairs sharing one polarization angle lambda per pair.
struct PairSource {
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> lambda_weights;  // empty: uniform on [0, pi); else bin weights
  std::optional<ImpactModel> impact;   // default off
};

/// Transmit/absorb coincidence tallies at one pair of settings.
struct CoincidenceCounts {
  std::uint64_t events = 0;
  std::uint64_t both_pass = 0;
  std::uint64_t pass_absorb = 0;
  std::uint64_t absorb_pass = 0;
  std::uint64_t both_absorb = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Merge tallies from disjoint counter ranges (associative, order-free).
CoincidenceCounts merge(const CoincidenceCounts& a, const CoincidenceCounts& b);

struct Correlation {
  double value = 0.0;
  double standard_error = 0.0;
};

struct ChshSettings {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
};

struct ChshScore {
  std::array<Correlation, 4> correlations{};  // E(a,b), E(a',b), E(a,b'), E(a',b')
  double s = 0.0;
  double standard_error = 0.0;
};

/// Simulate n photon pairs: each wing transmits independently with
/// probability p(lambda - setting) given the shared lambda.
CoincidenceCounts simulate_coincidences(const PairSource& source,
                                        const polarizer::TransferProfile& p, double alpha,
                                        double beta, std::uint64_t n);

/// Same, over the half-open event-counter range [first, last).
CoincidenceCounts simulate_coincidence_range(const PairSource& source,
                                             const polarizer::TransferProfile& p, double alpha,
                                             double beta, std::uint64_t first,
                                             std::uint64_t last);

/// E = (n++ + n-- - n+- - n-+) / n with a binomial standard error.
Correlation correlation(const CoincidenceCounts& counts);

/// S = E1 + E2 + E3 - E4 with propagated standard error.
ChshScore chsh(const std::array<Correlation, 4>& correlations);

/// Comparator baseline E(alpha, beta) = cos 2(alpha - beta) for equally
/// polarized photon pairs.
double quantum_correlation(double alpha, double beta);

/// The four-term combination evaluated on the comparator baseline.
double quantum_chsh(const ChshSettings& settings);

/// Setting quadruple at which the comparator combination reaches 2*sqrt(2).
ChshSettings canonical_settings();

struct ChshRun {
  std::array<CoincidenceCounts, 4> counts{};
  ChshScore score{};
};

/// Full four-settings experiment; each settings pair runs on its own
/// counter substream derived from the source seed.
ChshRun run_chsh(const PairSource& source, const polarizer::TransferProfile& p,
                 const ChshSettings& settings, std::uint64_t n);

struct ArrangementComparison {
  double one_side = 0.0;     // one photon through two polarizers (axes 0, alpha)
  double coincidence = 0.0;  // one polarizer per wing at axes 0 and alpha
  double difference = 0.0;
};

/// Both arrangements reduce to the same pair integral in this model; the
/// two values are assembled independently and their difference reported.
ArrangementComparison arrangement_equivalence(const polarizer::TransferProfile& p, double alpha);

}  // namespace lhv::epr
