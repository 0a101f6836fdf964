#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace lhv::angular {

/// Uniform grid on the polarization-angle circle [0, pi).  Angles lambda and
/// lambda + pi label the same linear polarization, so the period is fixed.
class AngularGrid {
 public:
  static constexpr std::size_t min_size = 8;
  static constexpr double period = std::numbers::pi;

  explicit AngularGrid(std::size_t n);

  std::size_t size() const { return n_; }
  double spacing() const;
  double node(std::size_t j) const;

  bool operator==(const AngularGrid&) const = default;

 private:
  std::size_t n_;
};

/// Real pi-periodic function sampled at the grid nodes.
class SampledAngularFunction {
 public:
  SampledAngularFunction(AngularGrid grid, std::vector<double> values);

  static SampledAngularFunction from_function(const AngularGrid& grid,
                                              const std::function<double(double)>& f);

  const AngularGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  /// Value of the nearest sample, treating the samples as the function.
  double nearest(double lambda) const {
    const auto n = static_cast<long long>(values_.size());
    long long j = std::llround(lambda / spacing_) % n;
    if (j < 0) j += n;
    return values_[static_cast<std::size_t>(j)];
  }

  /// Trigonometric interpolant through the samples (exact for functions
  /// band-limited below the grid Nyquist order).
  double trig_at(double lambda) const;

  /// Coefficients in the period-pi harmonic basis, computed at construction
  /// so instances are immutable and freely shareable across threads.
  std::span<const std::complex<double>> spectrum() const { return spectrum_; }

 private:
  AngularGrid grid_;
  double spacing_;
  std::vector<double> values_;
  std::vector<std::complex<double>> spectrum_;
};

/// Quadrature of f under the normalized measure d(lambda)/pi over one period.
double mean(const SampledAngularFunction& f);

/// C(alpha_m) = (1/pi) * integral d(lambda) f(lambda) g(lambda - alpha_m),
/// sampled at the grid nodes.  Exact for inputs resolvable on the grid.
SampledAngularFunction circular_correlate(const SampledAngularFunction& f,
                                          const SampledAngularFunction& g);

/// The same correlation evaluated at an arbitrary angle via the spectral
/// representation (trigonometric interpolation of the node values).
double correlate_at(const SampledAngularFunction& f, const SampledAngularFunction& g,
                    double alpha);

/// Coefficients of f in the period-pi harmonic basis e^{i 2 k lambda},
/// index layout matching the DFT (k and n-k are the +/- k pair).
/// inverse_spectral reconstructs samples within 1e-12.
std::vector<std::complex<double>> spectral(const SampledAngularFunction& f);
SampledAngularFunction inverse_spectral(const AngularGrid& grid,
                                        std::span<const std::complex<double>> coefficients);

/// Evaluate a coefficient array at an arbitrary angle (real part of the
/// harmonic sum, with the usual cosine treatment of the Nyquist mode).
double evaluate_spectrum(std::span<const std::complex<double>> coefficients, double lambda);

}  // namespace lhv::angular
