#include "psifrac/solver.hpp"

#include <cmath>
#include <random>

#include "psifrac/errors.hpp"
#include "psifrac/special.hpp"

namespace psifrac {

ContractionCertificate check_contraction(const ProblemSpec& spec,
                                         const LipschitzData& lip) {
  const double dpsi = spec.psi(spec.b) - spec.psi(0.0);
  const double a = spec.alpha.value();
  const double L =
      std::pow(dpsi, a) / gamma_fn(a + 1.0) * lip.W1 * (1.0 + lip.W2);
  return {L, L < 1.0};
}

namespace {

double quotient_or_zero(double num, double den) {
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

LipschitzData estimate_lipschitz(const ProblemSpec& spec,
                                 const std::shared_ptr<const Grid>& grid,
                                 const SamplingBox& box, std::size_t samples,
                                 std::uint64_t seed) {
  if (samples < 2) throw DomainError("estimate_lipschitz requires samples >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uz(0.0, spec.b);
  std::uniform_real_distribution<double> utheta(box.theta[0], box.theta[1]);
  std::uniform_real_distribution<double> uw(box.w[0], box.w[1]);
  std::uniform_real_distribution<double> ug(box.g[0], box.g[1]);

  const double dtheta = 1e-5 * (box.theta[1] - box.theta[0]);
  const double dw = 1e-5 * (box.w[1] - box.w[0]);
  const double dg = 1e-5 * (box.g[1] - box.g[0]);

  double W1 = 0.0, W2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double z = uz(rng);
    const double t1 = utheta(rng), w1 = uw(rng);
    // Alternate wide pairs with close pairs; the latter approach the
    // pointwise derivative and tighten the estimate from below.
    const bool close = (s % 2 == 1);
    const double t2 = close ? t1 + dtheta : utheta(rng);
    const double w2 = close ? w1 + dw : uw(rng);

    const double f11 = spec.F.eval({{"z", z}, {"theta", t1}, {"w", w1}});
    const double f21 = spec.F.eval({{"z", z}, {"theta", t2}, {"w", w1}});
    const double f12 = spec.F.eval({{"z", z}, {"theta", t1}, {"w", w2}});
    const double f22 = spec.F.eval({{"z", z}, {"theta", t2}, {"w", w2}});
    W1 = std::max({W1, quotient_or_zero(std::abs(f21 - f11), std::abs(t2 - t1)),
                   quotient_or_zero(std::abs(f12 - f11), std::abs(w2 - w1)),
                   quotient_or_zero(std::abs(f22 - f11),
                                    std::abs(t2 - t1) + std::abs(w2 - w1))});

    const double tau = uz(rng);
    const double g1 = ug(rng);
    const double g2 = close ? g1 + dg : ug(rng);
    const double h1 = spec.H.eval({{"z", z}, {"tau", tau}, {"g", g1}});
    const double h2 = spec.H.eval({{"z", z}, {"tau", tau}, {"g", g2}});
    W2 = std::max(W2, quotient_or_zero(std::abs(h2 - h1), std::abs(g2 - g1)));
  }

  // W3 = sup over the grid of |F(z, 0, w0(z))| with the inner kernel at g == 0.
  SampledFunction zero(grid, std::vector<double>(grid->node_count(), 0.0));
  SampledFunction w0 = inner_kernel_trace(spec.alpha, spec.H, zero);
  double W3 = 0.0;
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    W3 = std::max(W3, std::abs(spec.F.eval({{"z", grid->nodes[i]},
                                            {"theta", 0.0},
                                            {"w", w0.values[i]}})));
  }

  return {W1, W2, W3, LipschitzData::Provenance::SampledEstimate};
}

SolutionTrace solve_picard(const ProblemSpec& spec,
                           const std::shared_ptr<const Grid>& grid, double tol,
                           std::size_t max_iter, double start_value) {
  if (!(tol > 0.0)) throw DomainError("solve_picard requires tol > 0");
  const std::size_t n = grid->node_count();

  SampledFunction g(grid, std::vector<double>(n, start_value));
  std::vector<double> sup_diffs;
  bool converged = false;

  for (std::size_t k = 0; k < max_iter; ++k) {
    SampledFunction Ig = frac_integral_trace(spec.alpha, g);
    SampledFunction w = inner_kernel_trace(spec.alpha, spec.H, g);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = spec.F.eval({{"z", grid->nodes[i]},
                             {"theta", spec.theta0 + Ig.values[i]},
                             {"w", w.values[i]}});
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diff = std::max(diff, std::abs(next[i] - g.values[i]));
    g = SampledFunction(grid, std::move(next));
    sup_diffs.push_back(diff);
    if (diff < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergence(max_iter, sup_diffs.back());

  SampledFunction Ig = frac_integral_trace(spec.alpha, g);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = spec.theta0 + Ig.values[i];
  theta[0] = spec.theta0;  // node-0 integral is exactly 0

  SolutionTrace trace{SampledFunction(grid, std::move(theta)), std::move(g),
                      sup_diffs.size(), std::move(sup_diffs), 0.0};
  trace.residual = residual(spec, trace);
  return trace;
}

double residual(const ProblemSpec& spec, const SolutionTrace& trace) {
  require_same_grid(trace.theta, trace.g);
  const auto& grid = *trace.theta.grid;
  const std::size_t n = grid.node_count();

  SampledFunction w = inner_kernel_trace(spec.alpha, spec.H, trace.g);
  std::vector<double> fvals(n);
  for (std::size_t i = 0; i < n; ++i) {
    fvals[i] = spec.F.eval({{"z", grid.nodes[i]},
                            {"theta", trace.theta.values[i]},
                            {"w", w.values[i]}});
  }
  SampledFunction IF =
      frac_integral_trace(spec.alpha, SampledFunction(trace.theta.grid, std::move(fvals)));
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    defect = std::max(defect, std::abs(trace.theta.values[i] - spec.theta0 -
                                       IF.values[i]));
  }
  return defect;
}

}  // namespace psifrac
