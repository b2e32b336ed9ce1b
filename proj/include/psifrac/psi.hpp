#ifndef PSIFRAC_PSI_HPP
#define PSIFRAC_PSI_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psifrac/expr.hpp"

namespace psifrac {

enum class PsiFamily { Identity, ShiftedLog, Power, Custom };

/// The increasing weight function psi on [0, b], with its derivative.
///
/// Families: Identity psi(z) = z; ShiftedLog psi(z) = ln(z + c) with c > 0;
/// Power psi(z) = z^sigma with sigma > 0; Custom carries an expression in z
/// (derivative taken by central finite differences).
class PsiFunction {
 public:
  static PsiFunction identity();
  static PsiFunction shifted_log(double shift);
  static PsiFunction power(double sigma);
  static PsiFunction custom(Expr expression);

  PsiFamily family() const { return family_; }
  double sigma() const { return sigma_; }
  double shift() const { return shift_; }

  /// psi(z). Throws DomainError for z < 0 or a nonpositive log argument.
  double operator()(double z) const;

  /// psi'(z). Throws SingularDerivative for Power(sigma < 1) at z = 0.
  double derivative(double z) const;

 private:
  PsiFunction() = default;
  PsiFamily family_ = PsiFamily::Identity;
  double sigma_ = 1.0;
  double shift_ = 0.0;
  std::optional<Expr> expression_;
};

/// Fractional order alpha, restricted to the open interval (0, 1).
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Discretization of [0, b] with cached psi values at the nodes.
struct Grid {
  enum class Spacing { UniformInZ, UniformInPsi };

  double b = 0.0;
  Spacing spacing = Spacing::UniformInZ;
  std::vector<double> nodes;             // z_0 = 0 < ... < z_n = b
  std::vector<double> psi_values;        // psi(z_i), strictly increasing
  std::vector<double> psi_prime_values;  // psi'(z_i); +inf at a singular origin
  bool psi_prime_singular_at_origin = false;

  std::size_t node_count() const { return nodes.size(); }
};

/// Builds a grid with n panels (n + 1 nodes). UniformInPsi places nodes so
/// that psi is equally spaced, recovering z by bisection to 1e-13.
std::shared_ptr<const Grid> make_grid(double b, std::size_t n,
                                      Grid::Spacing spacing,
                                      const PsiFunction& psi);

struct ValidationReport {
  struct Violation {
    std::size_t node;
    std::string what;
  };
  std::vector<Violation> violations;
  bool singular_origin_derivative = false;
  bool valid() const { return violations.empty(); }
};

/// Checks psi' > 0 and strict monotonicity of psi at every grid node.
ValidationReport validate_psi(const PsiFunction& psi, const Grid& grid);

}  // namespace psifrac

#endif
