#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psifrac/analysis.hpp"
#include "psifrac/errors.hpp"
#include "psifrac/special.hpp"

using namespace psifrac;

namespace {

ProblemSpec make_problem(double alpha, double b, double theta0, const char* F,
                         const char* H,
                         PsiFunction psi = PsiFunction::identity()) {
  return ProblemSpec{FractionalOrder(alpha), b,      theta0,
                     std::move(psi),         Expr::parse(F), Expr::parse(H)};
}

SampledFunction constant(const std::shared_ptr<const Grid>& grid, double c) {
  return SampledFunction(grid, std::vector<double>(grid->node_count(), c));
}

}  // namespace

TEST_CASE("gronwall_bound trivial cases") {
  auto grid = make_grid(1.0, 64, Grid::Spacing::UniformInZ, PsiFunction::identity());
  FractionalOrder a(0.5);

  auto zero_eta = gronwall_bound(constant(grid, 0.0), constant(grid, 1.0), a);
  for (double x : zero_eta.values) CHECK(x == 0.0);

  auto zero_rho = gronwall_bound(constant(grid, 2.0), constant(grid, 0.0), a);
  for (double x : zero_rho.values) CHECK(x == 2.0);
}

TEST_CASE("gronwall_bound matches the constant closed form") {
  // eta = rho = 1, psi = id, alpha = 0.5 at z = 1:
  // E_{0.5}(Gamma(0.5)) = 45.99932608938283 by the series oracle
  auto grid = make_grid(1.0, 2048, Grid::Spacing::UniformInZ, PsiFunction::identity());
  FractionalOrder a(0.5);
  auto bound = gronwall_bound(constant(grid, 1.0), constant(grid, 1.0), a);
  const double closed =
      gronwall_bound_constant(1.0, 1.0, a, PsiFunction::identity(), 1.0);
  CHECK(closed == doctest::Approx(45.99932608938283).epsilon(1e-12));
  CHECK(bound.values.back() == doctest::Approx(closed).epsilon(2e-3));
}

TEST_CASE("gronwall_bound preconditions") {
  auto grid = make_grid(1.0, 16, Grid::Spacing::UniformInZ, PsiFunction::identity());
  FractionalOrder a(0.5);
  CHECK_THROWS_AS(gronwall_bound(constant(grid, -1.0), constant(grid, 1.0), a),
                  PreconditionError);
  CHECK_THROWS_AS(gronwall_bound(constant(grid, 1.0), constant(grid, -1.0), a),
                  PreconditionError);
  std::vector<double> decreasing(grid->node_count());
  for (std::size_t i = 0; i < decreasing.size(); ++i)
    decreasing[i] = 2.0 - static_cast<double>(i) * 0.1;
  CHECK_THROWS_AS(
      gronwall_bound(constant(grid, 1.0), SampledFunction(grid, decreasing), a),
      PreconditionError);
}

TEST_CASE("gronwall_bound_constant") {
  FractionalOrder a(0.5);
  auto id = PsiFunction::identity();
  CHECK(gronwall_bound_constant(0.0, 5.0, a, id, 1.0) == 0.0);
  CHECK(gronwall_bound_constant(3.0, 0.0, a, id, 1.0) == 3.0);  // E_a(0) = 1
  CHECK(gronwall_bound_constant(1.0, 1.0, a, id, 1.0) ==
        doctest::Approx(45.99932608938283).epsilon(1e-12));
  CHECK_THROWS_AS(gronwall_bound_constant(-1.0, 1.0, a, id, 1.0), PreconditionError);
}

TEST_CASE("a_priori_bound") {
  // zero Lipschitz data: bound is |theta0|
  auto spec0 = make_problem(0.5, 1.0, -2.5, "0", "0");
  CHECK(a_priori_bound(spec0, {}) == 2.5);

  // theta0=0, W1=0.2, W2=0.1, W3=1: (1/Gamma(1.5)) * E_{0.5}(0.22)
  // = 1.4736643803479870 by the gamma and Mittag-Leffler oracles
  auto spec1 = make_problem(0.5, 1.0, 0.0, "0", "0");
  CHECK(a_priori_bound(spec1, {0.2, 0.1, 1.0}) ==
        doctest::Approx(1.4736643803479870).epsilon(1e-9));

  // theta0=1, W1=0, W2=0.5, W3=0: 1 + 0.5/Gamma(1.5) = 1.5641895835477563
  auto spec2 = make_problem(0.5, 1.0, 1.0, "0", "0");
  CHECK(a_priori_bound(spec2, {0.0, 0.5, 0.0}) ==
        doctest::Approx(1.5641895835477563).epsilon(1e-9));
}

TEST_CASE("uh_gamma") {
  FractionalOrder a(0.5);
  auto id = PsiFunction::identity();
  CHECK(uh_gamma(a, id, 1.0, {0.0, 0.0, 0.0}) ==
        doctest::Approx(1.1283791670955126).epsilon(1e-9));
  CHECK(uh_gamma(a, id, 1.0, {0.2, 0.1, 0.0}) ==
        doctest::Approx(1.4736643803479870).epsilon(1e-9));
  // scales as b^alpha for small b
  CHECK(uh_gamma(a, id, 1e-8, {0.2, 0.1, 0.0}) ==
        doctest::Approx(1.1283791671e-4).epsilon(1e-6));
}

TEST_CASE("uh_gamma monotonicity in W1, W2, b") {
  FractionalOrder a(0.5);
  auto id = PsiFunction::identity();
  const double w1s[] = {0.0, 0.1, 0.3, 0.6};
  double prev = -1.0;
  for (double w1 : w1s) {
    double g = uh_gamma(a, id, 1.0, {w1, 0.1, 0.0});
    CHECK(g >= prev);
    prev = g;
  }
  prev = -1.0;
  for (double w2 : w1s) {
    double g = uh_gamma(a, id, 1.0, {0.2, w2, 0.0});
    CHECK(g >= prev);
    prev = g;
  }
  prev = -1.0;
  for (double b : {0.5, 1.0, 1.5, 2.0}) {
    double g = uh_gamma(a, id, b, {0.2, 0.1, 0.0});
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("check_q3") {
  FractionalOrder a(0.5);
  auto grid = make_grid(1.0, 1024, Grid::Spacing::UniformInZ, PsiFunction::identity());

  // rho = sqrt(z): I^{0.5} z^{0.5} = Gamma(1.5)/Gamma(2) z, so the ratio is
  // Gamma(1.5) sqrt(z) with its max at z = 1
  double g_sqrt = check_q3(Expr::parse("sqrt(z)"), a, grid);
  CHECK(g_sqrt == doctest::Approx(0.8862269254527580).epsilon(1e-3));

  // rho == 1 (increasing with slack): gamma = (psi(b)-psi(0))^a / Gamma(a+1)
  double g_one = check_q3(Expr::parse("1"), a, grid);
  CHECK(g_one == doctest::Approx(1.1283791670955126).epsilon(1e-9));

  // rho = exp: positive, below the constant-1 value scaled by sup/inf
  double g_exp = check_q3(Expr::parse("exp(z)"), a, grid);
  CHECK(g_exp > 0.0);
  CHECK(g_exp < 1.13);

  CHECK_THROWS_AS(check_q3(Expr::parse("-1"), a, grid), PreconditionError);
  CHECK_THROWS_AS(check_q3(Expr::parse("1 - z"), a, grid), PreconditionError);
}

TEST_CASE("uhr_B") {
  CHECK(uhr_B(0.5, {1.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(uhr_B(0.7, {0.0, 0.0, 0.0}) == 0.7);  // W1 = 0: B = gamma_q3
  CHECK_THROWS_AS(uhr_B(0.9, {1.0, 0.2, 0.0}), DivergentSeries);  // q = 1.08
  // continuity at the trivial case
  CHECK(std::abs(uhr_B(0.8, {1e-12, 0.0, 0.0}) - 0.8) <= 1e-9);
}

TEST_CASE("perturb_and_solve") {
  auto grid = make_grid(1.0, 256, Grid::Spacing::UniformInZ, PsiFunction::identity());

  // h == 0 reproduces the base solve bitwise
  auto spec = make_problem(0.5, 1.0, 1.0, "0.2*theta + 0.2*w", "0.1*g");
  auto base = solve_picard(spec, grid, 1e-10, 100);
  auto same = perturb_and_solve(spec, Expr::parse("0"), grid, 1e-10, 100);
  for (std::size_t i = 0; i < base.theta.values.size(); ++i)
    CHECK(same.theta.values[i] == base.theta.values[i]);

  // F = 0, h = 0.1: omega(1) = 0.1/Gamma(1.5)
  auto zero = make_problem(0.5, 1.0, 0.0, "0", "0");
  auto pert = perturb_and_solve(zero, Expr::parse("0.1"), grid, 1e-12, 100);
  CHECK(pert.theta.values.back() == doctest::Approx(0.11283791670955126).epsilon(1e-9));
}

TEST_CASE("perturbed sqrt problem stays within the UH bound") {
  auto spec = make_problem(0.5, 1.0, 0.0, "0.8862269254527580", "0");
  auto grid = make_grid(1.0, 512, Grid::Spacing::UniformInZ, PsiFunction::identity());
  auto base = solve_picard(spec, grid, 1e-11, 100);
  auto pert = perturb_and_solve(spec, Expr::parse("0.05*sin(z)"), grid, 1e-11, 100);
  double dev = 0.0;
  for (std::size_t i = 0; i < base.theta.values.size(); ++i)
    dev = std::max(dev, std::abs(pert.theta.values[i] - base.theta.values[i]));
  const double gamma = uh_gamma(spec.alpha, spec.psi, spec.b, {0.0, 0.0, 0.0});
  CHECK(dev <= gamma * 0.05);
}

TEST_CASE("stability_experiment UH") {
  auto spec = make_problem(0.5, 1.0, 1.0, "0.2*theta + 0.2*w", "0.1*g");
  auto grid = make_grid(1.0, 256, Grid::Spacing::UniformInZ, PsiFunction::identity());
  LipschitzData lip{0.2, 0.1, 0.0};

  auto zero_h = stability_experiment(spec, Expr::parse("0"), 0.05, StabilityMode::UH,
                                     std::nullopt, grid, 1e-11, lip);
  CHECK(zero_h.satisfied);
  for (double d : zero_h.deviation) CHECK(d <= 1e-9);

  auto rep = stability_experiment(spec, Expr::parse("0.05"), 0.05, StabilityMode::UH,
                                  std::nullopt, grid, 1e-11, lip);
  CHECK(rep.satisfied);
  REQUIRE(rep.gamma.has_value());
  CHECK(*rep.gamma == doctest::Approx(1.4736643803479870).epsilon(1e-9));

  // an inadmissible perturbation is rejected with the node named
  CHECK_THROWS_AS(
      stability_experiment(spec, Expr::parse("0.2"), 0.05, StabilityMode::UH,
                           std::nullopt, grid, 1e-11, lip),
      PreconditionError);
}

TEST_CASE("stability_experiment UHR with rho = exp") {
  auto spec = make_problem(0.5, 1.0, 1.0, "0.2*theta + 0.2*w", "0.1*g");
  auto grid = make_grid(1.0, 256, Grid::Spacing::UniformInZ, PsiFunction::identity());
  LipschitzData lip{0.2, 0.1, 0.0};
  auto rep = stability_experiment(spec, Expr::parse("0.01*exp(z)"), 0.01,
                                  StabilityMode::UHR, Expr::parse("exp(z)"), grid,
                                  1e-11, lip);
  CHECK(rep.satisfied);
  CHECK(rep.B.has_value());
}

TEST_CASE("solution trace dominated by the a-priori bound") {
  auto spec = make_problem(0.5, 1.0, 1.0, "0.2*theta + 0.2*w", "0.1*g");
  auto grid = make_grid(1.0, 256, Grid::Spacing::UniformInZ, PsiFunction::identity());
  auto trace = solve_picard(spec, grid, 1e-11, 100);
  // W3 for this F with g == 0: |F(z, 0, w0)| where w0 == 0, so W3 = 0... use
  // the sampled estimate to stay conservative.
  auto lip = estimate_lipschitz(spec, grid, SamplingBox{}, 2000, 3);
  const double bound = a_priori_bound(spec, lip);
  for (double x : trace.theta.values) CHECK(std::abs(x) <= bound);
}
