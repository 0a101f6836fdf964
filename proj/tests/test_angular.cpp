#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lhv/angular.hpp"
#include "lhv/errors.hpp"
#include "test_support.hpp"

using namespace lhv;
using namespace lhv::angular;
using testsupport::kPi;

TEST_CASE("grid construction and nodes") {
  const AngularGrid grid(64);
  CHECK(grid.size() == 64);
  CHECK(grid.spacing() == doctest::Approx(kPi / 64.0));
  CHECK(grid.node(0) == 0.0);
  CHECK(grid.node(63) == doctest::Approx(63.0 * kPi / 64.0));

  CHECK_NOTHROW(AngularGrid(8));
  CHECK_THROWS_AS(AngularGrid(4), grid_error);
  CHECK_THROWS_AS(AngularGrid(0), grid_error);
}

TEST_CASE("sampled function validation") {
  const AngularGrid grid(16);
  CHECK_THROWS_AS(SampledAngularFunction(grid, std::vector<double>(15, 0.0)), grid_error);
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(SampledAngularFunction(grid, bad), parameter_error);
}

TEST_CASE("mean under the normalized measure") {
  const AngularGrid grid(64);
  const auto one = SampledAngularFunction::from_function(grid, [](double) { return 1.0; });
  CHECK(mean(one) == doctest::Approx(1.0).epsilon(1e-15));

  const auto cos2 = SampledAngularFunction::from_function(
      grid, [](double l) { return std::cos(l) * std::cos(l); });
  CHECK(std::abs(mean(cos2) - 0.5) < 1e-14);

  const auto c2l =
      SampledAngularFunction::from_function(grid, [](double l) { return std::cos(2.0 * l); });
  CHECK(std::abs(mean(c2l)) < 1e-12);
}

TEST_CASE("circular correlation of constants") {
  const AngularGrid grid(32);
  const auto one = SampledAngularFunction::from_function(grid, [](double) { return 1.0; });
  const auto c = circular_correlate(one, one);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    CHECK(c[m] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("cos^2 autocorrelation matches the fine-grid oracle") {
  const AngularGrid grid(64);
  const auto cos2 = [](double l) { return std::cos(l) * std::cos(l); };
  const auto f = SampledAngularFunction::from_function(grid, cos2);
  const auto c = circular_correlate(f, f);
  for (std::size_t m = 0; m < grid.size(); m += 5) {
    const double alpha = grid.node(m);
    const double oracle = testsupport::correlation_oracle(cos2, cos2, alpha, grid.size());
    CHECK(std::abs(c[m] - oracle) < 1e-12);
    CHECK(std::abs(c[m] - (2.0 + std::cos(2.0 * alpha)) / 8.0) < 1e-12);
  }
  CHECK(c[0] == doctest::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("discrete delta sifts the other factor") {
  const AngularGrid grid(16);
  std::vector<double> delta(16, 0.0);
  const std::size_t j0 = 5;
  delta[j0] = 1.0;
  const SampledAngularFunction f(grid, delta);
  const auto g = SampledAngularFunction::from_function(
      grid, [](double l) { return 0.3 + 0.2 * std::sin(2.0 * l); });
  const auto c = circular_correlate(f, g);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    CHECK(c[m] == doctest::Approx(scale * g[(j0 + grid.size() - m) % grid.size()])
                      .epsilon(1e-13));
  }
}

TEST_CASE("grid mismatch is rejected") {
  const auto f = SampledAngularFunction::from_function(AngularGrid(16), [](double) { return 1.0; });
  const auto g = SampledAngularFunction::from_function(AngularGrid(32), [](double) { return 1.0; });
  CHECK_THROWS_AS(circular_correlate(f, g), grid_error);
  CHECK_THROWS_AS(correlate_at(f, g, 0.1), grid_error);
}

TEST_CASE("spectral coefficients of simple signals") {
  const AngularGrid grid(32);
  const auto constant =
      SampledAngularFunction::from_function(grid, [](double) { return 0.7; });
  const auto ck = spectral(constant);
  CHECK(std::abs(ck[0] - std::complex<double>{0.7, 0.0}) < 1e-14);
  for (std::size_t k = 1; k < ck.size(); ++k) CHECK(std::abs(ck[k]) < 1e-14);

  const auto cosine =
      SampledAngularFunction::from_function(grid, [](double l) { return std::cos(2.0 * l); });
  const auto dk = spectral(cosine);
  CHECK(std::abs(dk[1] - std::complex<double>{0.5, 0.0}) < 1e-13);
  CHECK(std::abs(dk[dk.size() - 1] - std::complex<double>{0.5, 0.0}) < 1e-13);
  CHECK(std::abs(dk[0]) < 1e-13);
}

TEST_CASE("spectral round trip reconstructs random samples") {
  std::mt19937_64 rng(7001);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (std::size_t n : {16u, 64u, 24u}) {  // includes a non-power-of-two grid
    const AngularGrid grid(n);
    std::vector<double> v(n);
    for (auto& x : v) x = unit(rng);
    const SampledAngularFunction f(grid, v);
    const auto back = inverse_spectral(grid, spectral(f));
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(back[j] - v[j]) < 1e-12);
    }
  }
}

TEST_CASE("trig interpolation reproduces band-limited functions off-grid") {
  const AngularGrid grid(64);
  const auto f = SampledAngularFunction::from_function(
      grid, [](double l) { return 0.4 + 0.25 * std::cos(2.0 * l) - 0.1 * std::sin(4.0 * l); });
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-8.0, 8.0);
  for (int i = 0; i < 50; ++i) {
    const double l = angle(rng);
    const double exact = 0.4 + 0.25 * std::cos(2.0 * l) - 0.1 * std::sin(4.0 * l);
    CHECK(std::abs(f.trig_at(l) - exact) < 1e-12);
  }
}

TEST_CASE("correlation properties on random functions") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const AngularGrid grid(128);
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<double> fv(grid.size()), gv(grid.size());
    for (auto& x : fv) x = unit(rng);
    for (auto& x : gv) x = unit(rng);
    const SampledAngularFunction f(grid, fv);
    const SampledAngularFunction g(grid, gv);

    // value at zero lag equals the mean of the product
    const auto fg = circular_correlate(f, g);
    std::vector<double> prod(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) prod[j] = fv[j] * gv[j];
    CHECK(std::abs(fg[0] - mean({grid, prod})) < 1e-12);

    // autocorrelation is even
    const auto auto_f = circular_correlate(f, f);
    for (std::size_t m = 1; m < grid.size(); ++m) {
      CHECK(std::abs(auto_f[m] - auto_f[grid.size() - m]) < 1e-12);
    }

    // Parseval: mean(f^2) equals the summed squared coefficient magnitudes
    const auto ck = spectral(f);
    double power = 0.0;
    for (const auto& c : ck) power += std::norm(c);
    std::vector<double> sq(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) sq[j] = fv[j] * fv[j];
    CHECK(std::abs(mean({grid, sq}) - power) < 1e-10);
  }
}

TEST_CASE("nearest-node lookup wraps the circle") {
  const AngularGrid grid(8);
  std::vector<double> v{0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  const SampledAngularFunction f(grid, v);
  CHECK(f.nearest(grid.node(3)) == 3.0);
  CHECK(f.nearest(grid.node(3) + 0.4 * grid.spacing()) == 3.0);
  CHECK(f.nearest(grid.node(3) - kPi) == 3.0);
  CHECK(f.nearest(grid.node(3) + 2.0 * kPi) == 3.0);
  CHECK(f.nearest(-grid.spacing()) == 7.0);
}
