#include "lhv/twobody.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lhv/errors.hpp"

namespace lhv::twobody {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

/// Per-axis second moments of the packet.  The momentum density is Gaussian
/// with variance sigma_k^2 / 2 per axis; the position spread grows as the
/// free packet disperses; the symmetrized q-p covariance starts at zero.
struct AxisMoments {
  double var_k;       // Var(k_a)
  double var_q;       // Var(q_a)
  double cov_qp;      // <{q_a - <q_a>, k_a - <k_a>}> / 2
};

AxisMoments axis_moments(const GaussianPacket& g) {
  const double t = g.epoch - g.epoch_init;
  const double s2 = g.sigma_k * g.sigma_k;
  AxisMoments m{};
  m.var_k = 0.5 * s2;
  m.var_q = 0.5 / s2 + 0.5 * s2 * t * t / (g.mass * g.mass);
  m.cov_qp = 0.5 * s2 * t / g.mass;
  return m;
}

}  // namespace

GaussianPacket::GaussianPacket(double mass_, Vec3 center_init_, double epoch_init_, Vec3 k_mean_,
                               double sigma_k_, std::optional<double> epoch_)
    : mass(mass_),
      center_init(std::move(center_init_)),
      epoch_init(epoch_init_),
      k_mean(std::move(k_mean_)),
      sigma_k(sigma_k_),
      epoch(epoch_.value_or(epoch_init_)) {
  if (!(mass > 0.0)) throw parameter_error("reduced mass must be positive");
  if (!(sigma_k > 0.0)) throw parameter_error("spectral width must be positive");
}

Vec3 GaussianPacket::center() const {
  return center_init + (epoch - epoch_init) / mass * k_mean;
}

GaussianPacket evolve(const GaussianPacket& packet, double t) {
  if (t < 0.0) {
    throw evolution_error("evolution duration must be nonnegative (one-way map)");
  }
  GaussianPacket out = packet;
  out.epoch += t;
  return out;
}

double expect_H(const GaussianPacket& g) {
  return (g.k_mean.squaredNorm() + 1.5 * g.sigma_k * g.sigma_k) / (2.0 * g.mass);
}

double expect_Q(const GaussianPacket& g) {
  const auto m = axis_moments(g);
  return g.center().squaredNorm() + 3.0 * m.var_q;
}

double expect_R(const GaussianPacket& g) {
  // R(t) = R(epoch_init) + 2 <H> t for free motion, with the initial value
  // fixed by the minimum-uncertainty configuration.
  const double t = g.epoch - g.epoch_init;
  return g.center_init.dot(g.k_mean) + 2.0 * expect_H(g) * t;
}

Vec3 expect_q(const GaussianPacket& g) { return g.center(); }

Vec3 expect_p(const GaussianPacket& g) { return g.k_mean; }

Vec3 expect_L(const GaussianPacket& g) { return g.center().cross(g.k_mean); }

double expect_L2(const GaussianPacket& g) {
  // Component formula for a product-Gaussian state:
  // <L_z^2> = <qx^2><py^2> + <qy^2><px^2> - 2 Rx Ry - 1/2, cyclically.
  const auto m = axis_moments(g);
  const Vec3 qc = g.center();
  Vec3 q2, p2, r;
  for (int a = 0; a < 3; ++a) {
    q2[a] = qc[a] * qc[a] + m.var_q;
    p2[a] = g.k_mean[a] * g.k_mean[a] + m.var_k;
    r[a] = qc[a] * g.k_mean[a] + m.cov_qp;
  }
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int x = (a + 1) % 3;
    const int y = (a + 2) % 3;
    total += q2[x] * p2[y] + q2[y] * p2[x] - 2.0 * r[x] * r[y] - 0.5;
  }
  return total;
}

double low_energy_weight(const GaussianPacket& g, double e_min) {
  if (e_min <= 0.0) return 0.0;
  const double x = std::sqrt(2.0 * g.mass * e_min);
  const double s = g.sigma_k;
  const double k0 = g.k_mean.norm();
  if (k0 < 1e-12 * s) {
    const double y = x / s;
    return std::erf(y) - 2.0 * y * std::exp(-y * y) / kSqrtPi;
  }
  // Radial mass of an isotropic Gaussian centered at k0:
  // integral of (r / (sqrt(pi) k0 s)) [e^{-(r-k0)^2/s^2} - e^{-(r+k0)^2/s^2}].
  const auto partial = [&](double a) {
    // integral_0^x r e^{-(r-a)^2/s^2} dr
    const double u0 = -a / s;
    const double u1 = (x - a) / s;
    return 0.5 * s * s * (std::exp(-u0 * u0) - std::exp(-u1 * u1)) +
           a * s * 0.5 * kSqrtPi * (std::erf(u1) - std::erf(u0));
  };
  const double p = (partial(k0) - partial(-k0)) / (kSqrtPi * k0 * s);
  return std::max(p, 0.0);
}

double expect_T(const GaussianPacket& g, const TimeOperatorOptions& options) {
  const double energy = expect_H(g);
  if (!(energy > 0.0)) throw singular_inverse_error("mean energy must be positive");
  const double e_min = options.energy_cutoff_fraction * energy;
  const double w = low_energy_weight(g, e_min);
  if (w > options.weight_threshold) {
    throw singular_inverse_error("spectral weight " + std::to_string(w) +
                                 " below the low-energy cutoff exceeds the threshold");
  }

  // <T> = (tau - tau_i) + m * center_init . E[k / |k|^2], with the moment
  // taken over the momentum density by tensor-product quadrature.
  const double t = g.epoch - g.epoch_init;
  if (g.center_init.isZero(0.0)) return t;

  const auto gh = detail::gauss_hermite(options.quadrature_order);
  const std::size_t q = gh.nodes.size();
  Vec3 moment = Vec3::Zero();
  double total_weight = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      for (std::size_t l = 0; l < q; ++l) {
        const double wgt = gh.weights[i] * gh.weights[j] * gh.weights[l];
        const Vec3 k = g.k_mean + g.sigma_k * Vec3(gh.nodes[i], gh.nodes[j], gh.nodes[l]);
        const double k2 = k.squaredNorm();
        if (k2 <= 0.0) continue;
        moment += wgt / k2 * k;
        total_weight += wgt;
      }
    }
  }
  moment /= total_weight;
  return t + g.mass * g.center_init.dot(moment);
}

double impact_parameter(const GaussianPacket& g) {
  const double k0 = g.k_mean.norm();
  if (k0 <= 0.0) {
    throw undefined_impact_parameter_error(
        "impact parameter undefined for zero mean wave vector");
  }
  return expect_L(g).norm() / k0;
}

KappaSet kappa_set(const GaussianPacket& g) {
  return {expect_H(g), expect_L2(g), expect_L(g).z()};
}

ExtendedState lift_to_extended(const GaussianPacket& packet) {
  ExtendedState state;
  state.epoch = packet.epoch;
  if (packet.epoch < 0.0) {
    state.in = packet;
  } else {
    state.out = packet;  // sign 0 counts as outgoing
  }
  return state;
}

std::complex<double> packet_overlap(const GaussianPacket& a, const GaussianPacket& b) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double sa2 = a.sigma_k * a.sigma_k;
  const double sb2 = b.sigma_k * b.sigma_k;
  const double ta = (a.epoch - a.epoch_init) / (2.0 * a.mass);
  const double tb = (b.epoch - b.epoch_init) / (2.0 * b.mass);

  // <a|b> = (2 pi)^-3 Na Nb integral exp(-A k^2 + B . k + C0) d^3k with the
  // phases theta = -k.x_i - k^2 t/(2m) entering as theta_b - theta_a.
  const C coeff_a = C(0.5 / sa2 + 0.5 / sb2, tb - ta);
  C exponent = -a.k_mean.squaredNorm() / (2.0 * sa2) - b.k_mean.squaredNorm() / (2.0 * sb2);
  const C gauss_norm = std::pow(std::numbers::pi / coeff_a, 1.5);
  for (int axis = 0; axis < 3; ++axis) {
    const C bcomp = a.k_mean[axis] / sa2 + b.k_mean[axis] / sb2 +
                    i * (a.center_init[axis] - b.center_init[axis]);
    exponent += bcomp * bcomp / (4.0 * coeff_a);
  }
  const double na = std::pow(2.0 * std::numbers::pi, 1.5) *
                    std::pow(std::numbers::pi * sa2, -0.75);
  const double nb = std::pow(2.0 * std::numbers::pi, 1.5) *
                    std::pow(std::numbers::pi * sb2, -0.75);
  const double prefactor = na * nb / std::pow(2.0 * std::numbers::pi, 3.0);
  return prefactor * gauss_norm * std::exp(exponent);
}

std::complex<double> extended_inner(const ExtendedState& a, const ExtendedState& b) {
  std::complex<double> total{0.0, 0.0};
  if (a.in && b.in) total += packet_overlap(*a.in, *b.in);
  if (a.out && b.out) total += packet_overlap(*a.out, *b.out);
  return total;
}

namespace detail {

GaussHermite gauss_hermite(int order) {
  if (order < 1) throw parameter_error("quadrature order must be at least 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(0.5 * static_cast<double>(i));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermite gh;
  gh.nodes.resize(order);
  gh.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    gh.nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    gh.weights[i] = kSqrtPi * v0 * v0;
  }
  return gh;
}

}  // namespace detail

}  // namespace lhv::twobody
