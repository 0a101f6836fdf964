#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lhv::twobody {

using Vec3 = Eigen::Vector3d;

/// Free relative-motion Gaussian wavepacket of a two-particle system in
/// natural units (hbar = 1).  The state at epoch tau is
///   psi~(k) = N exp(-(k - k_mean)^2 / (2 sigma_k^2))
///               * exp(-i k . center_init - i k^2 (tau - epoch_init) / (2 m)),
/// normalized so the momentum density has per-axis variance sigma_k^2 / 2.
/// At tau = epoch_init the packet is minimum-uncertainty around center_init.
struct GaussianPacket {
  double mass = 1.0;
  Vec3 center_init = Vec3::Zero();
  double epoch_init = 0.0;
  Vec3 k_mean = Vec3::Zero();
  double sigma_k = 1.0;
  double epoch = 0.0;

  GaussianPacket() = default;
  GaussianPacket(double mass, Vec3 center_init, double epoch_init, Vec3 k_mean, double sigma_k,
                 std::optional<double> epoch = std::nullopt);

  /// Current packet center <q> = center_init + (epoch - epoch_init) k_mean / m.
  Vec3 center() const;
};

/// Forward evolution by duration t >= 0 (the evolution map is one-way).
GaussianPacket evolve(const GaussianPacket& packet, double t);

double expect_H(const GaussianPacket& packet);
double expect_Q(const GaussianPacket& packet);   // <q^2>
double expect_R(const GaussianPacket& packet);   // <(pq + qp)/2>
Vec3 expect_q(const GaussianPacket& packet);
Vec3 expect_p(const GaussianPacket& packet);
Vec3 expect_L(const GaussianPacket& packet);     // <q x p>
double expect_L2(const GaussianPacket& packet);  // <|q x p|^2>

struct TimeOperatorOptions {
  double energy_cutoff_fraction = 1e-6;  // E_min = fraction * <H>
  double weight_threshold = 1e-8;        // max admissible weight below E_min
  int quadrature_order = 64;             // Gauss-Hermite order per axis
};

/// Expectation of (1/4){H^-1, (pq+qp)/2}.  Labels the state's position along
/// its trajectory: zero at closest approach, advancing at unit rate.
double expect_T(const GaussianPacket& packet, const TimeOperatorOptions& options = {});

/// Spectral weight with kinetic energy below e_min (closed form).
double low_energy_weight(const GaussianPacket& packet, double e_min);

/// b = |<L>| / |k_mean|: transverse offset of the center trajectory.
double impact_parameter(const GaussianPacket& packet);

/// Conserved labels of an evolution trajectory.
struct KappaSet {
  double energy = 0.0;     // <H>
  double l_squared = 0.0;  // <L^2>
  double l12 = 0.0;        // <L_z> = <q1 p2 - q2 p1>
};
KappaSet kappa_set(const GaussianPacket& packet);

/// Doubled (in, out) representation: exactly one component is populated,
/// selected by the sign of the epoch (sign 0 counts as outgoing).
struct ExtendedState {
  std::optional<GaussianPacket> in;
  std::optional<GaussianPacket> out;
  double epoch = 0.0;
};

ExtendedState lift_to_extended(const GaussianPacket& packet);

/// <psi_a | psi_b> between two packet states (closed-form Gaussian integral).
std::complex<double> packet_overlap(const GaussianPacket& a, const GaussianPacket& b);

/// Sum of componentwise overlaps; in/out cross terms are exactly zero.
std::complex<double> extended_inner(const ExtendedState& a, const ExtendedState& b);

namespace detail {

struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;  // for integrals against e^{-x^2}
};

/// Nodes and weights by Golub-Welsch on the Hermite Jacobi matrix.
GaussHermite gauss_hermite(int order);

}  // namespace detail

}  // namespace lhv::twobody
