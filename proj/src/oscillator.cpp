#include "lhv/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lhv/errors.hpp"

namespace lhv::oscillator {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack when assigning the sheet index: an evolution through a whole number
// of periods lands on a 2*pi boundary up to rounding, and the index must not
// depend on which side the rounding falls.
constexpr double kSheetSlack = 1e-9;
const std::complex<double> kI{0.0, 1.0};

double wrap_to_pi(double x) { return std::remainder(x, kTwoPi); }

std::pair<double, double> cs_expectations(const OscState& state, const FockOperatorSet& ops) {
  return {expectation(state, ops.c).real(), expectation(state, ops.s).real()};
}

double raw_phase(double c, double s) {
  const double a = std::atan2(s, c);
  return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

FockOperatorSet build_operators(double mass, double spring, int dim) {
  if (!(mass > 0.0)) throw parameter_error("mass must be positive");
  if (!(spring > 0.0)) throw parameter_error("spring constant must be positive");
  if (dim < 2) throw parameter_error("basis dimension must be at least 2");

  FockOperatorSet ops;
  ops.dim = dim;
  ops.mass = mass;
  ops.spring = spring;
  ops.omega = std::sqrt(spring / mass);
  ops.low_dimension = dim < 4;

  const double omega = ops.omega;
  ops.h = Matrix::Zero(dim, dim);
  ops.h_inv_sqrt = Matrix::Zero(dim, dim);
  ops.q = Matrix::Zero(dim, dim);
  ops.p = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double energy = (n + 0.5) * omega;
    ops.h(n, n) = energy;
    ops.h_inv_sqrt(n, n) = 1.0 / std::sqrt(energy);
  }
  const double q_scale = std::sqrt(0.5 / (mass * omega));
  const double p_scale = std::sqrt(0.5 * mass * omega);
  for (int n = 0; n + 1 < dim; ++n) {
    const double root = std::sqrt(static_cast<double>(n + 1));
    ops.q(n, n + 1) = q_scale * root;
    ops.q(n + 1, n) = q_scale * root;
    ops.p(n, n + 1) = -kI * p_scale * root;
    ops.p(n + 1, n) = kI * p_scale * root;
  }

  const auto half_anticommutator = [&](const Matrix& a, const Matrix& b) {
    return (0.5 * (a * b + b * a)).eval();
  };
  ops.c = std::sqrt(spring / 2.0) * half_anticommutator(ops.h_inv_sqrt, ops.q);
  ops.s = -std::sqrt(0.5 / mass) * half_anticommutator(ops.h_inv_sqrt, ops.p);
  return ops;
}

CommutatorResiduals commutator_residuals(const FockOperatorSet& ops, int buffer) {
  if (buffer < 0) buffer = ops.dim / 4;
  if (buffer >= ops.dim) throw parameter_error("truncation buffer swallows the whole basis");

  const Matrix res_hs = kI * (ops.h * ops.s - ops.s * ops.h) - ops.omega * ops.c;
  const Matrix res_hc = kI * (ops.h * ops.c - ops.c * ops.h) + ops.omega * ops.s;

  const int interior = ops.dim - buffer;
  CommutatorResiduals out;
  out.dim = ops.dim;
  out.buffer = buffer;
  out.hs_full = res_hs.cwiseAbs().maxCoeff();
  out.hc_full = res_hc.cwiseAbs().maxCoeff();
  out.hs_interior = res_hs.topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
  out.hc_interior = res_hc.topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
  return out;
}

double OscState::unwrapped_phase() const {
  if (!tracked_) throw undefined_phase_error("state has no trackable phase");
  return unwrapped_;
}

long OscState::sheet() const {
  if (!tracked_) throw undefined_phase_error("state has no trackable phase");
  return static_cast<long>(std::floor((unwrapped_ + kSheetSlack) / kTwoPi));
}

OscState make_state(const FockOperatorSet& ops, Vector amplitudes) {
  if (amplitudes.size() != ops.dim) {
    throw parameter_error("amplitude vector does not match the operator dimension");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw parameter_error("state vector must be nonzero");
  OscState state;
  state.amps_ = amplitudes / norm;
  const auto [c, s] = cs_expectations(state, ops);
  if (std::hypot(c, s) >= kDefaultRMin) {
    state.tracked_ = true;
    state.last_raw_ = raw_phase(c, s);
    state.unwrapped_ = state.last_raw_;
  }
  return state;
}

OscState coherent_state(const FockOperatorSet& ops, double nbar) {
  if (!(nbar >= 0.0)) throw parameter_error("mean excitation must be nonnegative");
  Vector amps(ops.dim);
  for (int n = 0; n < ops.dim; ++n) {
    // ln |c_n| for c_n = e^{-nbar/2} alpha^n / sqrt(n!), alpha = sqrt(nbar)
    const double log_amp = nbar > 0.0
                               ? -0.5 * nbar + 0.5 * n * std::log(nbar) -
                                     0.5 * std::lgamma(static_cast<double>(n) + 1.0)
                               : (n == 0 ? 0.0 : -1e30);
    amps[n] = std::exp(log_amp);
  }
  return make_state(ops, amps);
}

double tail_weight(const OscState& state, double fraction) {
  const auto dim = static_cast<int>(state.amplitudes().size());
  const int tail = std::max(1, static_cast<int>(fraction * dim));
  double w = 0.0;
  for (int n = dim - tail; n < dim; ++n) w += std::norm(state.amplitudes()[n]);
  return w;
}

std::complex<double> expectation(const OscState& state, const Matrix& op) {
  return (state.amplitudes().adjoint() * op * state.amplitudes())(0, 0);
}

double cs_norm(const OscState& state, const FockOperatorSet& ops, double tail_threshold) {
  const double tail = tail_weight(state);
  if (tail > tail_threshold) {
    throw tail_weight_error("state carries weight " + std::to_string(tail) +
                            " near the truncation edge");
  }
  const Vector cpsi = ops.c * state.amplitudes();
  const Vector spsi = ops.s * state.amplitudes();
  return cpsi.squaredNorm() + spsi.squaredNorm();
}

PhaseReading phase(const OscState& state, const FockOperatorSet& ops, double r_min) {
  const auto [c, s] = cs_expectations(state, ops);
  if (std::hypot(c, s) < r_min) {
    throw undefined_phase_error("phase undefined: |(<C>, <S>)| = " +
                                std::to_string(std::hypot(c, s)) + " is below " +
                                std::to_string(r_min));
  }
  if (!state.phase_tracked()) {
    throw undefined_phase_error("state was created without a trackable phase");
  }
  const double angle = state.unwrapped_phase() - kTwoPi * static_cast<double>(state.sheet());
  return {std::max(angle, 0.0), state.sheet()};
}

OscState evolve_osc(const OscState& state, const FockOperatorSet& ops, double t) {
  if (t < 0.0) throw evolution_error("evolution duration must be nonnegative (one-way map)");

  const double max_step = std::numbers::pi / (4.0 * ops.omega);
  const int substeps = t > 0.0 ? static_cast<int>(std::ceil(t / max_step)) : 0;
  const double dt = substeps > 0 ? t / substeps : 0.0;

  OscState current = state;
  for (int step = 0; step < substeps; ++step) {
    for (int n = 0; n < ops.dim; ++n) {
      current.amps_[n] *= std::polar(1.0, -(n + 0.5) * ops.omega * dt);
    }
    if (current.tracked_) {
      const auto [c, s] = cs_expectations(current, ops);
      const double raw = raw_phase(c, s);
      current.unwrapped_ += wrap_to_pi(raw - current.last_raw_);
      current.last_raw_ = raw;
    }
  }
  return current;
}

double time_expectation(const OscState& state, const FockOperatorSet& ops) {
  return state.unwrapped_phase() / ops.omega;
}

}  // namespace lhv::oscillator
