#ifndef GSG_ERRORS_HPP
#define GSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gsg {

// Bad call arguments: dimension mismatches, invalid counts.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the mathematical domain of a closed form
// (e.g. annealed pressure at lambda >= 1).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Numerical failure: nonconvergent quadrature, non-finite intermediates.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-time blow-up of an ODE trajectory; carries the blow-up time.
struct DivergenceError : NumericError {
  DivergenceError(const std::string& what, double t)
      : NumericError(what), blow_up_time(t) {}
  double blow_up_time;
};

// The RSB functional's denominator reached zero; carries the crossing point.
struct SingularFunctionalError : NumericError {
  SingularFunctionalError(const std::string& what, double q)
      : NumericError(what), offending_q(q) {}
  double offending_q;
};

}  // namespace gsg

#endif
