#ifndef PSIFRAC_SOLVER_HPP
#define PSIFRAC_SOLVER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "psifrac/expr.hpp"
#include "psifrac/fracops.hpp"
#include "psifrac/psi.hpp"

namespace psifrac {

/// The implicit initial value problem: find theta on [0, b] with
/// N^{alpha,psi} theta(z) = F(z, theta(z), w(z)), theta(0) = theta0,
/// where w(z) = I^{alpha,psi} H(z, tau, N^{alpha,psi} theta(tau)).
struct ProblemSpec {
  FractionalOrder alpha;
  double b;
  double theta0;
  PsiFunction psi;
  Expr F;  // variables z, theta, w
  Expr H;  // variables z, tau, g
};

struct LipschitzData {
  enum class Provenance { UserSupplied, SampledEstimate };
  double W1 = 0.0;  // Lipschitz coefficient of F in (theta, w)
  double W2 = 0.0;  // Lipschitz coefficient of H in g
  double W3 = 0.0;  // sup over the grid of |F(z, 0, w0(z))| with g == 0
  Provenance provenance = Provenance::UserSupplied;
};

struct ContractionCertificate {
  double L;
  bool contracting;
};

struct SolutionTrace {
  SampledFunction theta;  // solution
  SampledFunction g;      // N^{alpha,psi} theta
  std::size_t iterates = 0;
  std::vector<double> sup_diffs;
  double residual = 0.0;
};

/// L = (psi(b) - psi(0))^alpha / Gamma(alpha + 1) * W1 * (1 + W2).
ContractionCertificate check_contraction(const ProblemSpec& spec,
                                         const LipschitzData& lip);

/// Sampling ranges for the Lipschitz estimator.
struct SamplingBox {
  std::array<double, 2> theta{-1.0, 1.0};
  std::array<double, 2> w{-1.0, 1.0};
  std::array<double, 2> g{-1.0, 1.0};
};

/// Estimates W1, W2 by seeded difference-quotient sampling (a mix of
/// wide pairs and close pairs, per coordinate and jointly) and W3 by a
/// grid sweep of |F(z, 0, w0(z))|. Deterministic for a fixed seed.
LipschitzData estimate_lipschitz(const ProblemSpec& spec,
                                 const std::shared_ptr<const Grid>& grid,
                                 const SamplingBox& box, std::size_t samples,
                                 std::uint64_t seed);

/// Picard iteration on g = N^{alpha,psi} theta:
///   g_{k+1}(z_i) = F(z_i, theta0 + (I g_k)(z_i), (inner kernel of g_k)(z_i)),
/// starting from g_0 == start_value, until the sup-norm change drops
/// below tol. theta is recovered as theta0 + I^{alpha,psi} g.
/// Throws NoConvergence after max_iter iterations.
SolutionTrace solve_picard(const ProblemSpec& spec,
                           const std::shared_ptr<const Grid>& grid, double tol,
                           std::size_t max_iter, double start_value = 0.0);

/// Sup-node defect of the equivalent integral equation,
/// |theta(z) - theta0 - I^{alpha,psi} F(z, theta(z), w(z))|,
/// recomputed from the trace (independent of the stored field).
double residual(const ProblemSpec& spec, const SolutionTrace& trace);

}  // namespace psifrac

#endif
