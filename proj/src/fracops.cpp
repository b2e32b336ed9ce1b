#include "psifrac/fracops.hpp"

#include <cmath>
#include <string>

#include "psifrac/errors.hpp"
#include "psifrac/special.hpp"

namespace psifrac {

SampledFunction::SampledFunction(std::shared_ptr<const Grid> g,
                                 std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw GridMismatch("sampled function has no grid");
  if (values.size() != grid->node_count())
    throw GridMismatch("sample count does not match grid node count");
  for (double x : values)
    if (!std::isfinite(x)) throw DomainError("sampled function has non-finite value");
}

double SampledFunction::sup_norm() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b) {
  if (a.grid == b.grid) return;
  if (!a.grid || !b.grid || a.grid->nodes != b.grid->nodes)
    throw GridMismatch("operands live on different grids");
}

double singular_convolution(double mu, const std::vector<double>& u,
                            const std::vector<double>& vals, std::size_t i) {
  if (i >= u.size()) throw GridMismatch("node index out of range");
  const double U = u[i];
  double acc = 0.0;
  for (std::size_t j = 0; j < i; ++j) {
    const double A = U - u[j];
    const double B = U - u[j + 1];
    const double du = u[j + 1] - u[j];
    // moments of (U-u)^(mu-1) against {1, u - u_j} on the panel
    const double m0 = (std::pow(A, mu) - std::pow(B, mu)) / mu;
    const double m1 =
        A * m0 - (std::pow(A, mu + 1.0) - std::pow(B, mu + 1.0)) / (mu + 1.0);
    acc += (m0 - m1 / du) * vals[j] + (m1 / du) * vals[j + 1];
  }
  return acc;
}

double frac_integral(const FractionalOrder& alpha, const SampledFunction& v,
                     std::size_t i) {
  if (i >= v.grid->node_count()) throw GridMismatch("node index out of range");
  if (i == 0) return 0.0;
  return singular_convolution(alpha.value(), v.grid->psi_values, v.values, i) /
         gamma_fn(alpha.value());
}

SampledFunction frac_integral_trace(const FractionalOrder& alpha,
                                    const SampledFunction& v) {
  std::vector<double> out(v.grid->node_count(), 0.0);
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = frac_integral(alpha, v, i);
  return SampledFunction(v.grid, std::move(out));
}

SampledFunction caputo_derivative_trace(const FractionalOrder& alpha,
                                        const SampledFunction& theta) {
  const auto& u = theta.grid->psi_values;
  const std::size_t n = theta.grid->node_count();
  // Panel difference quotients d theta / d psi (L1 scheme in the psi variable).
  std::vector<double> slope(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j)
    slope[j] = (theta.values[j + 1] - theta.values[j]) / (u[j + 1] - u[j]);

  const double mu = 1.0 - alpha.value();
  const double scale = 1.0 / gamma_fn(2.0 - alpha.value());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double U = u[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j)
      acc += slope[j] * (std::pow(U - u[j], mu) - std::pow(U - u[j + 1], mu));
    out[i] = scale * acc;
  }
  return SampledFunction(theta.grid, std::move(out));
}

double inner_kernel_integral(const FractionalOrder& alpha, const Expr& H,
                             const SampledFunction& g, std::size_t i) {
  const auto& grid = *g.grid;
  if (i >= grid.node_count()) throw GridMismatch("node index out of range");
  if (i == 0) return 0.0;
  const double z_outer = grid.nodes[i];
  std::vector<double> vals(i + 1);
  for (std::size_t j = 0; j <= i; ++j) {
    try {
      vals[j] = H.eval({{"z", z_outer}, {"tau", grid.nodes[j]}, {"g", g.values[j]}});
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " [H at node " + std::to_string(j) +
                      ", tau = " + std::to_string(grid.nodes[j]) + "]");
    }
  }
  return singular_convolution(alpha.value(), grid.psi_values, vals, i) /
         gamma_fn(alpha.value());
}

SampledFunction inner_kernel_trace(const FractionalOrder& alpha, const Expr& H,
                                   const SampledFunction& g) {
  std::vector<double> out(g.grid->node_count(), 0.0);
  for (std::size_t i = 1; i < out.size(); ++i)
    out[i] = inner_kernel_integral(alpha, H, g, i);
  return SampledFunction(g.grid, std::move(out));
}

}  // namespace psifrac
