#pragma once

#include <stdexcept>
#include <string>

namespace lhv {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid construction or mixing functions from different grids.
class grid_error : public error {
 public:
  using error::error;
};

/// An argument is outside its admissible range.
class parameter_error : public error {
 public:
  using error::error;
};

/// The target curve is not an autocorrelation (negative power spectrum).
class infeasible_target_error : public error {
 public:
  infeasible_target_error(const std::string& what, double worst_coefficient)
      : error(what), worst_coefficient_(worst_coefficient) {}
  double worst_coefficient() const { return worst_coefficient_; }

 private:
  double worst_coefficient_;
};

/// The solver exhausted its iteration budget above tolerance.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double best_residual)
      : error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Statistics requested from an empty or inconsistent count record.
class statistics_error : public error {
 public:
  using error::error;
};

/// Backward evolution requested; the evolution map is one-way.
class evolution_error : public error {
 public:
  using error::error;
};

/// Too much spectral weight near zero energy for an inverse-energy operator.
class singular_inverse_error : public error {
 public:
  using error::error;
};

/// Phase undefined: the (C, S) expectation pair is too close to the origin.
class undefined_phase_error : public error {
 public:
  using error::error;
};

/// Impact parameter undefined for a packet with zero mean wave vector.
class undefined_impact_parameter_error : public error {
 public:
  using error::error;
};

/// State carries too much weight near the truncation edge.
class tail_weight_error : public error {
 public:
  using error::error;
};

/// File or serialization failure.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace lhv
