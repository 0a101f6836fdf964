#include "lhv/polarizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "lhv/detail/fft.hpp"
#include "lhv/errors.hpp"

namespace lhv::polarizer {

namespace {

constexpr double kEvennessTolerance = 1e-9;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Sample-domain autocorrelation C_m = (1/n) sum_j p_j p_{j-m} via the DFT.
std::vector<double> autocorrelation(std::span<const double> p) {
  auto pk = detail::dft_real(p);
  for (auto& c : pk) c = c * std::conj(c);
  const auto c = detail::idft(std::move(pk));
  std::vector<double> out(p.size());
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = c[m].real() * inv_n;
  return out;
}

}  // namespace

TransferProfile::TransferProfile(angular::SampledAngularFunction samples)
    : samples_(std::move(samples)) {}

TransferProfile TransferProfile::from_function(const angular::AngularGrid& grid,
                                               const std::function<double(double)>& f) {
  return TransferProfile(angular::SampledAngularFunction::from_function(grid, f));
}

bool TransferProfile::within_unit_box(double slack) const {
  for (double v : samples_.values()) {
    if (v < -slack || v > 1.0 + slack) return false;
  }
  return true;
}

MalusTarget::MalusTarget(double epsilon, angular::SampledAngularFunction curve)
    : epsilon_(epsilon), curve_(std::move(curve)) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw parameter_error("leakage must lie in [0, 1)");
  }
  const auto v = curve_.values();
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (v[j] < -1e-12 || v[j] > 1.0 + 1e-12) {
      throw parameter_error("target curve leaves [0, 1] at node " + std::to_string(j));
    }
    const std::size_t mirror = (n - j) % n;
    if (std::abs(v[j] - v[mirror]) > kEvennessTolerance) {
      throw parameter_error("target curve is not even in alpha");
    }
  }
}

MalusTarget MalusTarget::generalized(const angular::AngularGrid& grid, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw parameter_error("leakage must lie in [0, 1)");
  }
  return {epsilon, angular::SampledAngularFunction::from_function(
                       grid, [epsilon](double a) { return generalized_malus(a, epsilon); })};
}

double generalized_malus(double alpha, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw parameter_error("leakage must lie in [0, 1)");
  }
  const double c = std::cos(alpha);
  return (1.0 - epsilon) * c * c + epsilon;
}

double pair_transmission(const TransferProfile& p1, const TransferProfile& p2, double alpha) {
  return angular::correlate_at(p1.samples(), p2.samples(), alpha);
}

namespace {

/// Gradient of F(p) = sum_k (|p_hat_k|^2 - M_hat_k)^2 in the sample domain.
std::vector<double> autocorr_mismatch_gradient(std::span<const double> p,
                                               std::span<const std::complex<double>> m_hat,
                                               double* objective) {
  const std::size_t n = p.size();
  auto p_hat = detail::dft_real(p);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& c : p_hat) c *= inv_n;

  double f = 0.0;
  std::vector<std::complex<double>> rho_p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rho = std::norm(p_hat[k]) - m_hat[k].real();
    f += rho * rho;
    rho_p[k] = rho * p_hat[k];
  }
  if (objective) *objective = f;

  const auto grad_c = detail::idft(std::move(rho_p));
  std::vector<double> grad(n);
  for (std::size_t j = 0; j < n; ++j) grad[j] = 4.0 * grad_c[j].real();
  return grad;
}

std::vector<double> residual_curve(std::span<const double> p, std::span<const double> m) {
  auto r = autocorrelation(p);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= m[j];
  return r;
}

}  // namespace

DeconvolutionResult solve_profile(const MalusTarget& target, const SolverOptions& options) {
  if (options.tolerance <= 0.0) throw parameter_error("solver tolerance must be positive");
  if (options.max_iterations < 0) throw parameter_error("iteration budget must be nonnegative");

  const auto& curve = target.curve();
  const auto& grid = curve.grid();
  const std::size_t n = grid.size();
  const auto m_hat = angular::spectral(curve);

  // Feasibility (the curve must be a power spectrum): coefficients real
  // within sampling tolerance, nonnegative within the solver tolerance.
  double worst = 0.0;
  for (const auto& c : m_hat) {
    if (std::abs(c.imag()) > kEvennessTolerance) {
      throw parameter_error("target spectrum is not real; curve must be even");
    }
    worst = std::min(worst, c.real());
  }
  if (worst < -options.tolerance) {
    throw infeasible_target_error(
        "target has a negative power coefficient (" + std::to_string(worst) +
            "); it is not an autocorrelation",
        worst);
  }

  // Stage 1: nonnegative spectral root.  All coefficients nonnegative makes
  // the profile even about lambda = 0 and maximal there.  Coefficients at
  // transform-noise level are floored to zero: the square root would
  // otherwise amplify them by many orders of magnitude.
  double m_hat_max = 0.0;
  for (const auto& c : m_hat) m_hat_max = std::max(m_hat_max, c.real());
  const double floor = 1e-14 * m_hat_max;
  std::vector<std::complex<double>> root(n);
  for (std::size_t k = 0; k < n; ++k) {
    root[k] = m_hat[k].real() > floor ? std::sqrt(m_hat[k].real()) : 0.0;
  }
  const auto spectral_profile = angular::inverse_spectral(grid, root);
  const std::vector<double> p_spectral(spectral_profile.values().begin(),
                                       spectral_profile.values().end());
  const double spectral_residual = max_abs(residual_curve(p_spectral, curve.values()));

  const auto in_box = [](std::span<const double> p) {
    for (double v : p) {
      if (v < -1e-12 || v > 1.0 + 1e-12) return false;
    }
    return true;
  };

  if (in_box(p_spectral) && spectral_residual <= options.tolerance) {
    return {TransferProfile(spectral_profile),
            {spectral_residual, 0, true, spectral_residual}};
  }

  // Stage 2: projected least squares on [0, 1]^n, spectral start, monotone
  // deterministic step control.
  std::vector<double> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = std::clamp(p_spectral[j], 0.0, 1.0);

  double step = static_cast<double>(n) / 16.0;
  double best_box_residual = max_abs(residual_curve(p, curve.values()));
  std::vector<double> best_p = p;
  double f_current = 0.0;
  std::vector<double> grad = autocorr_mismatch_gradient(p, m_hat, &f_current);

  int iterations = 0;
  while (iterations < options.max_iterations) {
    ++iterations;
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = std::clamp(p[j] - step * grad[j], 0.0, 1.0);
    }
    double f_next = 0.0;
    auto grad_next = autocorr_mismatch_gradient(next, m_hat, &f_next);
    if (f_next > f_current) {
      step *= 0.5;
      if (step < 1e-9) break;
      continue;
    }
    p = std::move(next);
    grad = std::move(grad_next);
    const bool stalled = (f_current - f_next) < 1e-18 * std::max(1.0, f_current);
    f_current = f_next;

    const double res = max_abs(residual_curve(p, curve.values()));
    if (res < best_box_residual) {
      best_box_residual = res;
      best_p = p;
    }
    if (res <= options.tolerance) {
      return {TransferProfile({grid, std::move(best_p)}),
              {best_box_residual, iterations, true, best_box_residual}};
    }
    if (stalled) break;
  }

  // The box admits no profile at tolerance.  If the unconstrained spectral
  // root reproduces the curve, return it and report the box failure instead
  // of clipping; otherwise the solve genuinely failed.
  if (spectral_residual <= options.tolerance) {
    return {TransferProfile(spectral_profile),
            {spectral_residual, iterations, false, best_box_residual}};
  }
  throw convergence_error("deconvolution stalled at residual " +
                              std::to_string(std::min(best_box_residual, spectral_residual)),
                          std::min(best_box_residual, spectral_residual));
}

double chain_transmission(const TransferProfile& p, std::span<const double> angles,
                          ChainModel model) {
  if (angles.empty()) throw parameter_error("polarizer chain needs at least one axis angle");
  if (angles[0] != 0.0) throw parameter_error("first polarizer axis must be 0 by convention");

  if (model == ChainModel::kCollapse) {
    // Polarization resets to each axis; every inter-polarizer step reuses the
    // pair law.  A single polarizer matches the fixed-polarization value.
    if (angles.size() == 1) return angular::mean(p.samples());
    double t = 1.0;
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
      t *= pair_transmission(p, p, angles[k + 1] - angles[k]);
    }
    return t;
  }

  const auto& grid = p.grid();
  const std::size_t n = grid.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = grid.node(j);
    double term = p.samples()[j];
    for (std::size_t k = 1; k < angles.size(); ++k) {
      term *= p.trig_at(lambda - angles[k]);
    }
    acc += term;
  }
  return acc / static_cast<double>(n);
}

StokesVector StokesVector::linear(double intensity, double angle) {
  return {intensity, intensity * std::cos(2.0 * angle), intensity * std::sin(2.0 * angle), 0.0};
}

bool StokesVector::physical(double slack) const {
  if (!(i >= 0.0)) return false;
  return q * q + u * u + v * v <= i * i * (1.0 + slack) + slack;
}

Eigen::Matrix4d mueller_linear_polarizer(double axis_angle, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw parameter_error("leakage must lie in [0, 1)");
  }
  const double c = std::cos(2.0 * axis_angle);
  const double s = std::sin(2.0 * axis_angle);
  Eigen::Matrix4d m;
  m << 1.0, c, s, 0.0,
       c, c * c, c * s, 0.0,
       s, c * s, s * s, 0.0,
       0.0, 0.0, 0.0, 0.0;
  m *= 0.5 * (1.0 - epsilon);
  m += epsilon * Eigen::Matrix4d::Identity();
  return m;
}

MuellerChainResult mueller_chain(const StokesVector& in, std::span<const double> angles,
                                 double epsilon) {
  if (!in.physical()) throw parameter_error("input Stokes vector is unphysical");
  if (in.i <= 0.0) throw parameter_error("input intensity must be positive");
  Eigen::Vector4d s(in.i, in.q, in.u, in.v);
  for (double angle : angles) {
    s = mueller_linear_polarizer(angle, epsilon) * s;
  }
  const StokesVector out{s[0], s[1], s[2], s[3]};
  return {out, out.i / in.i};
}

}  // namespace lhv::polarizer
