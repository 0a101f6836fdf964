#include "lhv/angular.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lhv/detail/fft.hpp"
#include "lhv/errors.hpp"

namespace lhv::angular {

AngularGrid::AngularGrid(std::size_t n) : n_(n) {
  if (n < min_size) {
    throw grid_error("angular grid needs at least " + std::to_string(min_size) +
                     " nodes, got " + std::to_string(n));
  }
}

double AngularGrid::spacing() const { return period / static_cast<double>(n_); }

double AngularGrid::node(std::size_t j) const {
  return static_cast<double>(j) * period / static_cast<double>(n_);
}

SampledAngularFunction::SampledAngularFunction(AngularGrid grid, std::vector<double> values)
    : grid_(grid), spacing_(grid.spacing()), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw grid_error("sample count " + std::to_string(values_.size()) +
                     " does not match grid size " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw parameter_error("sampled function has a non-finite value");
  }
  spectrum_ = detail::dft_real(values_);
  const double inv_n = 1.0 / static_cast<double>(values_.size());
  for (auto& c : spectrum_) c *= inv_n;
}

SampledAngularFunction SampledAngularFunction::from_function(
    const AngularGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = f(grid.node(j));
  return {grid, std::move(v)};
}

double SampledAngularFunction::trig_at(double lambda) const {
  return evaluate_spectrum(spectrum(), lambda);
}

double mean(const SampledAngularFunction& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc / static_cast<double>(f.size());
}

SampledAngularFunction circular_correlate(const SampledAngularFunction& f,
                                          const SampledAngularFunction& g) {
  if (f.grid() != g.grid()) throw grid_error("circular correlation requires a common grid");
  const std::size_t n = f.size();
  auto fk = detail::dft_real(f.values());
  const auto gk = detail::dft_real(g.values());
  for (std::size_t k = 0; k < n; ++k) fk[k] *= std::conj(gk[k]);
  const auto c = detail::idft(std::move(fk));
  std::vector<double> out(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) out[m] = c[m].real() * inv_n;
  return {f.grid(), std::move(out)};
}

double correlate_at(const SampledAngularFunction& f, const SampledAngularFunction& g,
                    double alpha) {
  if (f.grid() != g.grid()) throw grid_error("circular correlation requires a common grid");
  const auto fs = f.spectrum();
  const auto gs = g.spectrum();
  std::vector<std::complex<double>> ck(fs.size());
  for (std::size_t k = 0; k < ck.size(); ++k) ck[k] = fs[k] * std::conj(gs[k]);
  return evaluate_spectrum(ck, alpha);
}

std::vector<std::complex<double>> spectral(const SampledAngularFunction& f) {
  return {f.spectrum().begin(), f.spectrum().end()};
}

SampledAngularFunction inverse_spectral(const AngularGrid& grid,
                                        std::span<const std::complex<double>> coefficients) {
  if (coefficients.size() != grid.size()) {
    throw grid_error("coefficient count does not match grid size");
  }
  std::vector<std::complex<double>> a(coefficients.begin(), coefficients.end());
  for (auto& c : a) c *= static_cast<double>(grid.size());
  const auto x = detail::idft(std::move(a));
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j].real();
  return {grid, std::move(out)};
}

double evaluate_spectrum(std::span<const std::complex<double>> coefficients, double lambda) {
  const std::size_t n = coefficients.size();
  double acc = coefficients[0].real();
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
    const double phase = 2.0 * static_cast<double>(k) * lambda;
    acc += 2.0 * (coefficients[k] * std::polar(1.0, phase)).real();
  }
  if (n % 2 == 0 && half >= 1) {
    acc += coefficients[half].real() * std::cos(static_cast<double>(n) * lambda);
  }
  return acc;
}

}  // namespace lhv::angular
