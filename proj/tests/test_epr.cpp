#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lhv/epr.hpp"
#include "lhv/errors.hpp"
#include "test_support.hpp"

using namespace lhv;
using namespace lhv::epr;
using lhv::angular::AngularGrid;
using lhv::polarizer::TransferProfile;
using testsupport::kPi;

namespace {

TransferProfile constant_profile(double value, std::size_t n = 64) {
  return TransferProfile::from_function(AngularGrid(n), [value](double) { return value; });
}

}  // namespace

TEST_CASE("zero events produce empty tallies") {
  const auto p = constant_profile(0.5);
  const auto counts = simulate_coincidences({.seed = 1}, p, 0.1, 0.2, 0);
  CHECK(counts.events == 0);
  CHECK(counts.both_pass == 0);
  CHECK(counts.pass_absorb == 0);
  CHECK(counts.absorb_pass == 0);
  CHECK(counts.both_absorb == 0);
}

TEST_CASE("tallies always sum to the event count") {
  std::mt19937_64 rng(2024);
  const AngularGrid grid(128);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = testsupport::random_profile(rng, grid);
    const auto counts =
        simulate_coincidences({.seed = static_cast<std::uint64_t>(rep + 1)}, p, 0.3, 1.0, 20000);
    CHECK(counts.both_pass + counts.pass_absorb + counts.absorb_pass + counts.both_absorb ==
          counts.events);
  }
}

TEST_CASE("a coin-flip profile yields uncorrelated wings") {
  const auto p = constant_profile(0.5);
  const auto counts = simulate_coincidences({.seed = 7}, p, 0.0, kPi / 8.0, 1000000);
  const auto e = correlation(counts);
  CHECK(std::abs(e.value) <= 5.0 * e.standard_error);
}

TEST_CASE("deterministic transmission makes equal settings perfectly correlated") {
  const AngularGrid grid(64);
  const auto indicator = TransferProfile::from_function(grid, [](double l) {
    const double x = std::fmod(std::fmod(l, kPi) + kPi, kPi);
    return std::min(x, kPi - x) < kPi / 4.0 ? 1.0 : 0.0;
  });
  const auto counts = simulate_coincidences({.seed = 99}, indicator, 0.0, 0.0, 1000000);
  CHECK(counts.pass_absorb == 0);
  CHECK(counts.absorb_pass == 0);
  CHECK(correlation(counts).value == 1.0);
}

TEST_CASE("coincidence rate converges to the pair integral") {
  std::mt19937_64 rng(31415);
  const AngularGrid grid(256);
  const auto p = testsupport::random_profile(rng, grid);
  const double alpha = 0.2;
  const double beta = 1.1;
  const std::uint64_t n = 2000000;
  const auto counts = simulate_coincidences({.seed = 5}, p, alpha, beta, n);
  const double rate = static_cast<double>(counts.both_pass) / static_cast<double>(n);
  const double expected = polarizer::pair_transmission(p, p, alpha - beta);
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
  CHECK(std::abs(rate - expected) <= 5.0 * se + 1e-3);
}

TEST_CASE("correlation arithmetic") {
  CoincidenceCounts all_pass{1000, 1000, 0, 0, 0, 0.0, 0.0};
  CHECK(correlation(all_pass).value == 1.0);

  CoincidenceCounts even{1000, 250, 250, 250, 250, 0.0, 0.0};
  CHECK(correlation(even).value == 0.0);

  CoincidenceCounts mixed{1000, 400, 100, 100, 400, 0.0, 0.0};
  CHECK(correlation(mixed).value == doctest::Approx(0.6).epsilon(1e-15));

  CoincidenceCounts empty{};
  CHECK_THROWS_AS(correlation(empty), statistics_error);
}

TEST_CASE("four-term combination and its bounds") {
  const auto make = [](double v) { return Correlation{v, 0.0}; };
  CHECK(chsh({make(1.0), make(1.0), make(1.0), make(-1.0)}).s == 4.0);
  CHECK(chsh({make(0.0), make(0.0), make(0.0), make(0.0)}).s == 0.0);
  CHECK_THROWS_AS(chsh({make(1.2), make(0.0), make(0.0), make(0.0)}), statistics_error);

  const auto score = chsh({Correlation{0.5, 0.01}, Correlation{0.5, 0.01},
                           Correlation{0.5, 0.01}, Correlation{-0.5, 0.01}});
  CHECK(score.s == doctest::Approx(2.0));
  CHECK(score.standard_error == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("comparator correlation values") {
  CHECK(quantum_correlation(0.7, 0.7) == 1.0);
  CHECK(std::abs(quantum_correlation(0.0, kPi / 4.0)) < 1e-15);
  CHECK(quantum_correlation(0.0, kPi / 8.0) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("comparator reaches 2*sqrt(2) at the canonical settings") {
  const auto s = canonical_settings();
  // four-cosine evaluation, written out as its own oracle
  const double direct = std::cos(2.0 * (s.alpha - s.beta)) +
                        std::cos(2.0 * (s.alpha_prime - s.beta)) +
                        std::cos(2.0 * (s.alpha - s.beta_prime)) -
                        std::cos(2.0 * (s.alpha_prime - s.beta_prime));
  CHECK(direct == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(quantum_chsh(s) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("comparator never exceeds 2*sqrt(2) over a dense settings scan") {
  // S depends on the three independent differences x = a-b, y = a'-b,
  // z = a-b'; the fourth difference is then y + z - x.
  const double limit = 2.0 * std::sqrt(2.0) + 1e-9;
  const double step = kPi / 180.0;
  double best = 0.0;
  for (int ix = 0; ix < 180; ++ix) {
    const double cx = std::cos(2.0 * ix * step);
    for (int iy = 0; iy < 180; ++iy) {
      const double cy = std::cos(2.0 * iy * step);
      for (int iz = 0; iz < 180; ++iz) {
        const double s =
            cx + cy + std::cos(2.0 * iz * step) - std::cos(2.0 * (iy + iz - ix) * step);
        best = std::max(best, s);
      }
    }
  }
  CHECK(best <= limit);
  CHECK(best == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("local simulation stays below the classical bound") {
  std::mt19937_64 rng(60601);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  const AngularGrid grid(128);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = testsupport::random_profile(rng, grid);
    PairSource source{.seed = 1000u + static_cast<std::uint64_t>(rep)};
    if (rep % 3 == 1) {
      source.lambda_weights = {1.0, 3.0, 0.5, 2.0, 1.5, 0.2, 1.0, 2.5};
    }
    if (rep % 5 == 4) {
      source.impact =
          ImpactModel{.density = {1.0, 2.0, 1.0, 0.5}, .weight = {1.0, 0.9, 0.8, 0.95}};
    }
    const ChshSettings settings{angle(rng), angle(rng), angle(rng), angle(rng)};
    const auto run = run_chsh(source, p, settings, 100000);
    CHECK(run.score.s <= 2.0 + 5.0 * run.score.standard_error);
  }
}

TEST_CASE("uniform sources are rotationally covariant") {
  std::mt19937_64 rng(11);
  const AngularGrid grid(128);
  const auto p = testsupport::random_profile(rng, grid);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int rep = 0; rep < 5; ++rep) {
    const double alpha = angle(rng);
    const double beta = angle(rng);
    const double delta = angle(rng);
    const auto a = correlation(simulate_coincidences({.seed = 42}, p, alpha, beta, 400000));
    const auto b = correlation(
        simulate_coincidences({.seed = 43}, p, alpha + delta, beta + delta, 400000));
    const double se = std::hypot(a.standard_error, b.standard_error);
    CHECK(std::abs(a.value - b.value) <= 5.0 * se);
  }
}

TEST_CASE("identical seeds reproduce identical tallies") {
  std::mt19937_64 rng(5005);
  const AngularGrid grid(128);
  const auto p = testsupport::random_profile(rng, grid);
  const auto a = simulate_coincidences({.seed = 321}, p, 0.2, 0.9, 50000);
  const auto b = simulate_coincidences({.seed = 321}, p, 0.2, 0.9, 50000);
  CHECK(a.both_pass == b.both_pass);
  CHECK(a.pass_absorb == b.pass_absorb);
  CHECK(a.absorb_pass == b.absorb_pass);
  CHECK(a.both_absorb == b.both_absorb);

  const auto c = simulate_coincidences({.seed = 322}, p, 0.2, 0.9, 50000);
  CHECK(c.both_pass != a.both_pass);  // different stream, different tallies
}

TEST_CASE("disjoint counter ranges merge to the monolithic result") {
  std::mt19937_64 rng(6006);
  const AngularGrid grid(128);
  const auto p = testsupport::random_profile(rng, grid);
  const PairSource source{.seed = 777};
  const auto whole = simulate_coincidences(source, p, 0.4, 1.3, 80000);
  const auto head = simulate_coincidence_range(source, p, 0.4, 1.3, 0, 30000);
  const auto tail = simulate_coincidence_range(source, p, 0.4, 1.3, 30000, 80000);
  const auto merged = merge(head, tail);
  CHECK(merged.events == whole.events);
  CHECK(merged.both_pass == whole.both_pass);
  CHECK(merged.pass_absorb == whole.pass_absorb);
  CHECK(merged.absorb_pass == whole.absorb_pass);
  CHECK(merged.both_absorb == whole.both_absorb);

  const auto other = simulate_coincidences(source, p, 0.5, 1.3, 10);
  CHECK_THROWS_AS(merge(whole, other), statistics_error);
}

TEST_CASE("one-side and coincidence arrangements agree") {
  const AngularGrid grid(256);
  const auto cos2 = TransferProfile::from_function(
      grid, [](double l) { return std::cos(l) * std::cos(l); });
  const auto at_zero = arrangement_equivalence(cos2, 0.0);
  CHECK(at_zero.one_side == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(at_zero.coincidence == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(std::abs(at_zero.difference) <= 1e-12);

  const auto one = constant_profile(1.0, 256);
  for (double a : {0.0, 0.6, 2.0}) {
    const auto r = arrangement_equivalence(one, a);
    CHECK(r.one_side == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.coincidence == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.difference) <= 1e-12);
  }

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = testsupport::random_profile(rng, grid);
    const auto r = arrangement_equivalence(p, angle(rng));
    CHECK(std::abs(r.difference) <= 1e-12);
  }
}

TEST_CASE("lambda distribution weights are validated") {
  const auto p = constant_profile(0.5);
  PairSource negative{.seed = 1, .lambda_weights = {1.0, -0.5}};
  CHECK_THROWS_AS(simulate_coincidences(negative, p, 0.0, 0.0, 10), parameter_error);
  PairSource empty_mass{.seed = 1, .lambda_weights = {0.0, 0.0}};
  CHECK_THROWS_AS(simulate_coincidences(empty_mass, p, 0.0, 0.0, 10), parameter_error);
}
