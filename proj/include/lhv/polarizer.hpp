#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lhv/angular.hpp"

namespace lhv::polarizer {

/// Transmission probability p(lambda) of one polarizer, sampled on the
/// angle circle.  lambda is the offset of the photon polarization from the
/// polarizer axis.
class TransferProfile {
 public:
  explicit TransferProfile(angular::SampledAngularFunction samples);

  static TransferProfile from_function(const angular::AngularGrid& grid,
                                       const std::function<double(double)>& f);

  const angular::SampledAngularFunction& samples() const { return samples_; }
  const angular::AngularGrid& grid() const { return samples_.grid(); }

  /// True when every sample lies in [0, 1] up to the given slack.
  bool within_unit_box(double slack = 1e-12) const;

  /// Transmission probability used by the event sampler: value of the
  /// nearest node, clamped to [0, 1].
  double transmission_at(double lambda) const {
    const double v = samples_.nearest(lambda);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }

  /// Trigonometric interpolant of the samples (quadrature path).
  double trig_at(double lambda) const { return samples_.trig_at(lambda); }

 private:
  angular::SampledAngularFunction samples_;
};

/// Sampled pair-transmission curve M(alpha) that a profile should reproduce,
/// together with its leakage parameter.
class MalusTarget {
 public:
  MalusTarget(double epsilon, angular::SampledAngularFunction curve);

  /// M(alpha) = (1 - epsilon) cos^2(alpha) + epsilon sampled on the grid.
  static MalusTarget generalized(const angular::AngularGrid& grid, double epsilon);

  double epsilon() const { return epsilon_; }
  const angular::SampledAngularFunction& curve() const { return curve_; }

 private:
  double epsilon_;
  angular::SampledAngularFunction curve_;
};

/// M(alpha) = (1 - epsilon) cos^2(alpha) + epsilon.
double generalized_malus(double alpha, double epsilon);

/// Pair transmission (1/pi) * integral d(lambda) p1(lambda) p2(lambda - alpha).
double pair_transmission(const TransferProfile& p1, const TransferProfile& p2, double alpha);

struct SolverOptions {
  double tolerance = 1e-6;     // max-norm residual on the reproduced curve
  int max_iterations = 10000;  // refinement budget when the box is active
};

struct DeconvolutionReport {
  double residual_max = 0.0;       // max |autocorr(p) - M| for the returned p
  int iterations = 0;              // refinement iterations actually used
  bool box_feasible = true;        // returned p lies in [0, 1]
  double box_residual_best = 0.0;  // best residual reachable inside the box
};

struct DeconvolutionResult {
  TransferProfile profile;
  DeconvolutionReport report;
};

/// Recover p from M = autocorr(p).  Stage 1 takes the nonnegative spectral
/// root (even profile, maximal at lambda = 0).  If that profile leaves
/// [0, 1], stage 2 runs a deterministic projected least-squares refinement;
/// when no box-constrained profile meets the tolerance, the exact spectral
/// solution is returned with box_feasible = false and the best constrained
/// residual reported, rather than a silently clipped curve.
DeconvolutionResult solve_profile(const MalusTarget& target, const SolverOptions& options = {});

/// How a photon's polarization is treated along a polarizer chain.
enum class ChainModel {
  kFixedPolarization,  // polarization unchanged by transmission
  kCollapse,           // polarization reset to each polarizer axis
};

/// Transmission of a chain of polarizers at the given axis angles
/// (angles[0] must be 0; the first axis defines the reference direction).
double chain_transmission(const TransferProfile& p, std::span<const double> angles,
                          ChainModel model = ChainModel::kFixedPolarization);

/// Stokes 4-vector (I, Q, U, V).
struct StokesVector {
  double i = 0.0;
  double q = 0.0;
  double u = 0.0;
  double v = 0.0;

  static StokesVector unpolarized(double intensity) { return {intensity, 0.0, 0.0, 0.0}; }
  static StokesVector linear(double intensity, double angle);

  bool physical(double slack = 1e-9) const;
};

/// Mueller matrix of a linear polarizer with axis at the given angle.
/// Leakage epsilon mixes in a transparent element: (1-e) * polarizer + e * I.
Eigen::Matrix4d mueller_linear_polarizer(double axis_angle, double epsilon = 0.0);

struct MuellerChainResult {
  StokesVector out;
  double intensity_fraction = 0.0;  // I_out / I_in
};

MuellerChainResult mueller_chain(const StokesVector& in, std::span<const double> angles,
                                 double epsilon = 0.0);

}  // namespace lhv::polarizer
