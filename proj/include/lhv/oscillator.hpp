#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lhv::oscillator {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Phase readings below this |(<C>, <S>)| radius are rejected.
inline constexpr double kDefaultRMin = 0.1;

/// Operators of the linear oscillator in its truncated energy eigenbasis.
/// C and S are the energy-normalized quadratures
///   C = sqrt(k/2)   * (1/2){H^{-1/2}, q},
///   S = -sqrt(1/2m) * (1/2){H^{-1/2}, p},
/// whose expectation pair rotates rigidly at the oscillator frequency.
struct FockOperatorSet {
  int dim = 0;
  double mass = 0.0;
  double spring = 0.0;
  double omega = 0.0;
  bool low_dimension = false;  // dim < 4: algebra checks are unreliable
  Matrix h;
  Matrix q;
  Matrix p;
  Matrix h_inv_sqrt;
  Matrix c;
  Matrix s;
};

FockOperatorSet build_operators(double mass, double spring, int dim);

/// Max-norm residuals of i[H,S] - omega C and i[H,C] + omega S, over the
/// full matrix and over the interior block that excludes `buffer` rows and
/// columns at the truncation edge (buffer < 0 selects dim/4).
struct CommutatorResiduals {
  int dim = 0;
  int buffer = 0;
  double hs_interior = 0.0;
  double hs_full = 0.0;
  double hc_interior = 0.0;
  double hc_full = 0.0;
};

CommutatorResiduals commutator_residuals(const FockOperatorSet& ops, int buffer = -1);

/// Oscillator state: unit amplitude vector plus phase-sheet bookkeeping.
/// The unwrapped phase of (<C>, <S>) is tracked across evolutions; each
/// crossing of a 2*pi boundary moves the state to the next sheet.
class OscState {
 public:
  const Vector& amplitudes() const { return amps_; }
  bool phase_tracked() const { return tracked_; }
  double unwrapped_phase() const;
  long sheet() const;

 private:
  friend OscState make_state(const FockOperatorSet&, Vector);
  friend OscState evolve_osc(const OscState&, const FockOperatorSet&, double);

  Vector amps_;
  bool tracked_ = false;
  double unwrapped_ = 0.0;
  double last_raw_ = 0.0;
};

/// Normalize amplitudes and initialize phase tracking when defined.
OscState make_state(const FockOperatorSet& ops, Vector amplitudes);

/// Poisson-amplitude state with mean excitation nbar (phases zero).
OscState coherent_state(const FockOperatorSet& ops, double nbar);

/// Probability carried by the top `fraction` of basis states.
double tail_weight(const OscState& state, double fraction = 0.1);

std::complex<double> expectation(const OscState& state, const Matrix& op);

/// <C^2 + S^2> for a state supported away from the truncation edge.
double cs_norm(const OscState& state, const FockOperatorSet& ops,
               double tail_threshold = 1e-8);

struct PhaseReading {
  double angle = 0.0;  // position on the current sheet, in [0, 2*pi)
  long sheet = 0;
};

/// Phase of the (<C>, <S>) pair; requires radius >= r_min.
PhaseReading phase(const OscState& state, const FockOperatorSet& ops,
                   double r_min = kDefaultRMin);

/// Evolution by t >= 0: amplitudes pick up e^{-i (n + 1/2) omega t}; the
/// unwrapped phase is advanced by continuity, sampled at steps <= pi/(4 omega).
OscState evolve_osc(const OscState& state, const FockOperatorSet& ops, double t);

/// Time label of the state: unwrapped phase / omega.
double time_expectation(const OscState& state, const FockOperatorSet& ops);

}  // namespace lhv::oscillator
