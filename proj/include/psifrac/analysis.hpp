#ifndef PSIFRAC_ANALYSIS_HPP
#define PSIFRAC_ANALYSIS_HPP

#include <optional>

#include "psifrac/expr.hpp"
#include "psifrac/fracops.hpp"
#include "psifrac/solver.hpp"

namespace psifrac {

/// Gronwall majorant
///   eta(z) + integral_0^z sum_{m>=1} [rho(z) Gamma(alpha)]^m / Gamma(alpha m)
///            * psi'(k) (psi(z) - psi(k))^(alpha m - 1) eta(k) dk,
/// evaluated at every node. Requires eta >= 0 and rho >= 0 nondecreasing
/// (1e-12 slack); throws PreconditionError otherwise.
SampledFunction gronwall_bound(const SampledFunction& eta,
                               const SampledFunction& rho,
                               const FractionalOrder& alpha);

/// Closed form for constant inputs:
///   eta0 * E_alpha(rho0 * Gamma(alpha) * (psi(z) - psi(0))^alpha).
double gronwall_bound_constant(double eta0, double rho0,
                               const FractionalOrder& alpha,
                               const PsiFunction& psi, double z);

/// A-priori solution estimate:
///   [|theta0| + (psi(b)-psi(0))^alpha / Gamma(alpha+1) * (W3 + W2 |theta0|)]
///   * E_alpha(W1 (1+W2) (psi(b)-psi(0))^alpha).
double a_priori_bound(const ProblemSpec& spec, const LipschitzData& lip);

/// Ulam-Hyers constant:
///   gamma = (psi(b)-psi(0))^alpha / Gamma(alpha+1)
///           * E_alpha(W1 (1+W2) (psi(b)-psi(0))^alpha).
double uh_gamma(const FractionalOrder& alpha, const PsiFunction& psi, double b,
                const LipschitzData& lip);

/// Smallest grid-valid gamma with I^{alpha,psi} rho <= gamma * rho:
/// the max over nodes i >= 1 of (I rho)(z_i) / rho(z_i). Requires rho > 0
/// at nodes 1..n and nondecreasing (1e-12 slack).
double check_q3(const Expr& rho, const FractionalOrder& alpha,
                const std::shared_ptr<const Grid>& grid);

/// B = gamma_q3 / (1 - W1 (1+W2) gamma_q3); throws DivergentSeries when
/// W1 (1+W2) gamma_q3 >= 1.
double uhr_B(double gamma_q3, const LipschitzData& lip);

/// Solves the perturbed problem N^{alpha,psi} omega = F(...) + h(z),
/// omega(0) = theta0, by the same Picard scheme. h uses the variable z.
SolutionTrace perturb_and_solve(const ProblemSpec& spec, const Expr& h,
                                const std::shared_ptr<const Grid>& grid,
                                double tol, std::size_t max_iter);

enum class StabilityMode { UH, GUH, UHR, GUHR };

struct StabilityReport {
  double epsilon = 0.0;
  StabilityMode mode = StabilityMode::UH;
  std::optional<double> gamma;  // UH / GUH
  std::optional<double> B;      // UHR / GUHR
  SampledFunction theta;        // unperturbed solution
  SampledFunction omega;        // perturbed solution
  std::vector<double> deviation;  // |omega - theta| per node
  std::vector<double> bound;      // applicable bound per node
  bool satisfied = false;
};

/// Runs the perturbation experiment for the chosen stability notion.
/// Preconditions on h: sup|h| <= eps (UH, GUH), |h(z)| <= eps * rho(z)
/// (UHR), |h(z)| <= rho(z) (GUHR, eps treated as 1); violations throw
/// PreconditionError naming the worst node.
StabilityReport stability_experiment(const ProblemSpec& spec, const Expr& h,
                                     double eps, StabilityMode mode,
                                     const std::optional<Expr>& rho,
                                     const std::shared_ptr<const Grid>& grid,
                                     double tol, const LipschitzData& lip,
                                     std::size_t max_iter = 200);

}  // namespace psifrac

#endif
