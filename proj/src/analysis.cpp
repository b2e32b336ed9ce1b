#include "psifrac/analysis.hpp"

#include <cmath>
#include <string>

#include "psifrac/errors.hpp"
#include "psifrac/special.hpp"

namespace psifrac {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr int kGronwallMaxTerms = 200;

void require_nonnegative(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0.0)
      throw PreconditionError(std::string(name) + " is negative at node " +
                              std::to_string(i));
}

void require_nondecreasing(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] < v[i] - kMonotoneSlack)
      throw PreconditionError(std::string(name) + " decreases at node " +
                              std::to_string(i + 1));
}

}  // namespace

SampledFunction gronwall_bound(const SampledFunction& eta,
                               const SampledFunction& rho,
                               const FractionalOrder& alpha) {
  require_same_grid(eta, rho);
  require_nonnegative(eta.values, "eta");
  require_nonnegative(rho.values, "rho");
  require_nondecreasing(rho.values, "rho");

  const auto& u = eta.grid->psi_values;
  const double a = alpha.value();

  std::vector<double> out(eta.values);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double coeff = rho.values[i] * gamma_fn(a);
    if (coeff <= 0.0) continue;  // empty series, bound = eta
    const double log_coeff = std::log(coeff);
    double val = eta.values[i];
    for (int m = 1; m <= kGronwallMaxTerms; ++m) {
      const double mu = a * m;
      const double integ = singular_convolution(mu, u, eta.values, i);
      // [rho Gamma(a)]^m / Gamma(a m) in log form; Gamma(a m) overflows
      // long before m reaches the cap.
      const double term = std::exp(m * log_coeff - std::lgamma(mu)) * integ;
      val += term;
      if (term < 1e-15 * val) break;
    }
    out[i] = val;
  }
  return SampledFunction(eta.grid, std::move(out));
}

double gronwall_bound_constant(double eta0, double rho0,
                               const FractionalOrder& alpha,
                               const PsiFunction& psi, double z) {
  if (eta0 < 0.0 || rho0 < 0.0)
    throw PreconditionError("gronwall_bound_constant requires eta0, rho0 >= 0");
  if (eta0 == 0.0) return 0.0;
  const double a = alpha.value();
  const double dpsi = psi(z) - psi(0.0);
  return eta0 * mittag_leffler(a, rho0 * gamma_fn(a) * std::pow(dpsi, a));
}

double a_priori_bound(const ProblemSpec& spec, const LipschitzData& lip) {
  const double a = spec.alpha.value();
  const double dpsi_a = std::pow(spec.psi(spec.b) - spec.psi(0.0), a);
  const double prefactor =
      std::abs(spec.theta0) +
      dpsi_a / gamma_fn(a + 1.0) * (lip.W3 + lip.W2 * std::abs(spec.theta0));
  return prefactor * mittag_leffler(a, lip.W1 * (1.0 + lip.W2) * dpsi_a);
}

double uh_gamma(const FractionalOrder& alpha, const PsiFunction& psi, double b,
                const LipschitzData& lip) {
  const double a = alpha.value();
  const double dpsi_a = std::pow(psi(b) - psi(0.0), a);
  return dpsi_a / gamma_fn(a + 1.0) *
         mittag_leffler(a, lip.W1 * (1.0 + lip.W2) * dpsi_a);
}

double check_q3(const Expr& rho, const FractionalOrder& alpha,
                const std::shared_ptr<const Grid>& grid) {
  const std::size_t n = grid->node_count();
  std::vector<double> rvals(n);
  for (std::size_t i = 0; i < n; ++i)
    rvals[i] = rho.eval({{"z", grid->nodes[i]}});

  for (std::size_t i = 1; i < n; ++i)
    if (!(rvals[i] > 0.0))
      throw PreconditionError("rho must be positive at node " + std::to_string(i));
  if (rvals[0] < 0.0)
    throw PreconditionError("rho must be nonnegative at node 0");
  require_nondecreasing(rvals, "rho");

  SampledFunction r(grid, rvals);
  SampledFunction Ir = frac_integral_trace(alpha, r);
  double gamma_q3 = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    gamma_q3 = std::max(gamma_q3, Ir.values[i] / rvals[i]);
  return gamma_q3;
}

double uhr_B(double gamma_q3, const LipschitzData& lip) {
  const double q = lip.W1 * (1.0 + lip.W2) * gamma_q3;
  if (q >= 1.0)
    throw DivergentSeries("W1 (1 + W2) gamma_q3 = " + std::to_string(q) +
                          " >= 1; the geometric series diverges");
  return gamma_q3 / (1.0 - q);
}

SolutionTrace perturb_and_solve(const ProblemSpec& spec, const Expr& h,
                                const std::shared_ptr<const Grid>& grid,
                                double tol, std::size_t max_iter) {
  ProblemSpec perturbed = spec;
  perturbed.F = spec.F + h;
  return solve_picard(perturbed, grid, tol, max_iter);
}

StabilityReport stability_experiment(const ProblemSpec& spec, const Expr& h,
                                     double eps, StabilityMode mode,
                                     const std::optional<Expr>& rho,
                                     const std::shared_ptr<const Grid>& grid,
                                     double tol, const LipschitzData& lip,
                                     std::size_t max_iter) {
  const std::size_t n = grid->node_count();
  const bool rassias = mode == StabilityMode::UHR || mode == StabilityMode::GUHR;
  if (rassias && !rho)
    throw PreconditionError("UHR/GUHR require a comparison function rho");

  std::vector<double> hvals(n), rvals;
  for (std::size_t i = 0; i < n; ++i) hvals[i] = h.eval({{"z", grid->nodes[i]}});
  if (rassias) {
    rvals.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      rvals[i] = rho->eval({{"z", grid->nodes[i]}});
  }

  // Admissibility of the perturbation for the chosen stability notion.
  const double slack = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    double cap;
    switch (mode) {
      case StabilityMode::UH:
      case StabilityMode::GUH: cap = eps; break;
      case StabilityMode::UHR: cap = eps * rvals[i]; break;
      case StabilityMode::GUHR: cap = rvals[i]; break;
      default: cap = eps;
    }
    if (std::abs(hvals[i]) > cap * (1.0 + slack) + slack)
      throw PreconditionError("perturbation exceeds its admissible size at node " +
                              std::to_string(i) + " (z = " +
                              std::to_string(grid->nodes[i]) + ")");
  }

  SolutionTrace base = solve_picard(spec, grid, tol, max_iter);
  SolutionTrace pert = perturb_and_solve(spec, h, grid, tol, max_iter);

  StabilityReport report;
  report.epsilon = eps;
  report.mode = mode;
  report.theta = base.theta;
  report.omega = pert.theta;
  report.deviation.resize(n);
  report.bound.resize(n);

  double gq3 = 0.0, B = 0.0;
  if (rassias) {
    gq3 = check_q3(*rho, spec.alpha, grid);
    B = uhr_B(gq3, lip);
    report.B = B;
  } else {
    report.gamma = uh_gamma(spec.alpha, spec.psi, spec.b, lip);
  }

  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    report.deviation[i] = std::abs(pert.theta.values[i] - base.theta.values[i]);
    switch (mode) {
      case StabilityMode::UH:
      case StabilityMode::GUH:  // rho(eps) = gamma * eps with rho(0) = 0
        report.bound[i] = *report.gamma * eps;
        break;
      case StabilityMode::UHR: report.bound[i] = B * eps * rvals[i]; break;
      case StabilityMode::GUHR: report.bound[i] = B * rvals[i]; break;
    }
    if (report.deviation[i] > report.bound[i]) ok = false;
  }
  report.satisfied = ok;
  return report;
}

}  // namespace psifrac
