#ifndef PSIFRAC_ERRORS_HPP
#define PSIFRAC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psifrac {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularDerivative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& msg)
      : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"),
        offset(off) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  std::size_t iterations;
  double last_sup_diff;
  NoConvergence(std::size_t iters, double last)
      : std::runtime_error("Picard iteration did not converge after " +
                           std::to_string(iters) +
                           " iterations (last sup diff " +
                           std::to_string(last) + ")"),
        iterations(iters),
        last_sup_diff(last) {}
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergentSeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace psifrac

#endif
