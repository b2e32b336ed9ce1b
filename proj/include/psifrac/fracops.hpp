#ifndef PSIFRAC_FRACOPS_HPP
#define PSIFRAC_FRACOPS_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "psifrac/expr.hpp"
#include "psifrac/psi.hpp"

namespace psifrac {

/// Node values of a function on a grid.
struct SampledFunction {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(std::shared_ptr<const Grid> g, std::vector<double> v);

  double sup_norm() const;
};

/// Checks the two samples live on the same grid; throws GridMismatch.
void require_same_grid(const SampledFunction& a, const SampledFunction& b);

/// Weighted history sum shared by every operator below:
///   integral_{u_0}^{u_i} (u_i - u)^(mu - 1) * f(u) du
/// where u_j are the grid's psi values and f is the piecewise-linear
/// interpolant of vals; each panel's kernel moments are closed-form.
double singular_convolution(double mu, const std::vector<double>& u,
                            const std::vector<double>& vals, std::size_t i);

/// psi-fractional integral I^{alpha,psi} of v at node i.
double frac_integral(const FractionalOrder& alpha, const SampledFunction& v,
                     std::size_t i);

/// I^{alpha,psi} v at every node; node 0 is exactly 0.
SampledFunction frac_integral_trace(const FractionalOrder& alpha,
                                    const SampledFunction& v);

/// psi-Caputo derivative of theta at every node: the (1-alpha)-order
/// integral of the panel difference quotients d theta / d psi.
SampledFunction caputo_derivative_trace(const FractionalOrder& alpha,
                                        const SampledFunction& theta);

/// I^{alpha,psi} applied in tau to H(z_i, tau, g(tau)) over [0, z_i], with
/// the outer variable held at z_i. H uses the variables {z, tau, g}.
double inner_kernel_integral(const FractionalOrder& alpha, const Expr& H,
                             const SampledFunction& g, std::size_t i);

/// inner_kernel_integral at every node.
SampledFunction inner_kernel_trace(const FractionalOrder& alpha, const Expr& H,
                                   const SampledFunction& g);

}  // namespace psifrac

#endif
