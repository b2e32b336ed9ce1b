#include "psifrac/psi.hpp"

#include <cmath>
#include <limits>

#include "psifrac/errors.hpp"

namespace psifrac {

PsiFunction PsiFunction::identity() {
  PsiFunction p;
  p.family_ = PsiFamily::Identity;
  return p;
}

PsiFunction PsiFunction::shifted_log(double shift) {
  if (!(shift > 0.0)) throw DomainError("ShiftedLog requires shift c > 0");
  PsiFunction p;
  p.family_ = PsiFamily::ShiftedLog;
  p.shift_ = shift;
  return p;
}

PsiFunction PsiFunction::power(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("Power requires sigma > 0");
  PsiFunction p;
  p.family_ = PsiFamily::Power;
  p.sigma_ = sigma;
  return p;
}

PsiFunction PsiFunction::custom(Expr expression) {
  PsiFunction p;
  p.family_ = PsiFamily::Custom;
  p.expression_ = std::move(expression);
  return p;
}

double PsiFunction::operator()(double z) const {
  if (z < 0.0) throw DomainError("psi evaluated at z < 0");
  switch (family_) {
    case PsiFamily::Identity:
      return z;
    case PsiFamily::ShiftedLog:
      if (z + shift_ <= 0.0) throw DomainError("log argument <= 0");
      return std::log(z + shift_);
    case PsiFamily::Power:
      return z == 0.0 ? 0.0 : std::pow(z, sigma_);
    case PsiFamily::Custom:
      return expression_->eval({{"z", z}});
  }
  throw DomainError("unreachable psi family");
}

double PsiFunction::derivative(double z) const {
  if (z < 0.0) throw DomainError("psi' evaluated at z < 0");
  switch (family_) {
    case PsiFamily::Identity:
      return 1.0;
    case PsiFamily::ShiftedLog:
      if (z + shift_ <= 0.0) throw DomainError("log argument <= 0");
      return 1.0 / (z + shift_);
    case PsiFamily::Power:
      if (z == 0.0) {
        if (sigma_ < 1.0)
          throw SingularDerivative("psi' of Power(sigma < 1) is singular at z = 0");
        return sigma_ == 1.0 ? 1.0 : 0.0;
      }
      return sigma_ * std::pow(z, sigma_ - 1.0);
    case PsiFamily::Custom: {
      // Central difference, one-sided at the left endpoint.
      const double h = 1e-6 * std::max(1.0, std::abs(z));
      if (z - h < 0.0)
        return ((*this)(z + h) - (*this)(z)) / h;
      return ((*this)(z + h) - (*this)(z - h)) / (2.0 * h);
    }
  }
  throw DomainError("unreachable psi family");
}

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw DomainError("fractional order must lie in (0, 1)");
}

namespace {

// Monotone bisection for psi(z) = target on [lo, hi].
double invert_psi(const PsiFunction& psi, double target, double lo, double hi) {
  constexpr double kTol = 1e-13;
  while (hi - lo > kTol) {
    double mid = 0.5 * (lo + hi);
    if (psi(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::shared_ptr<const Grid> make_grid(double b, std::size_t n,
                                      Grid::Spacing spacing,
                                      const PsiFunction& psi) {
  if (!(b > 0.0)) throw DomainError("grid requires b > 0");
  if (n < 2) throw DomainError("grid requires n >= 2");

  auto grid = std::make_shared<Grid>();
  grid->b = b;
  grid->spacing = spacing;
  grid->nodes.resize(n + 1);
  grid->nodes[0] = 0.0;
  grid->nodes[n] = b;

  if (spacing == Grid::Spacing::UniformInZ) {
    for (std::size_t i = 1; i < n; ++i)
      grid->nodes[i] = b * static_cast<double>(i) / static_cast<double>(n);
  } else {
    const double u0 = psi(0.0), ub = psi(b);
    if (!(ub > u0)) throw DomainError("psi is not increasing on [0, b]");
    for (std::size_t i = 1; i < n; ++i) {
      double target = u0 + (ub - u0) * static_cast<double>(i) / static_cast<double>(n);
      grid->nodes[i] = invert_psi(psi, target, 0.0, b);
    }
  }

  grid->psi_values.resize(n + 1);
  grid->psi_prime_values.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid->psi_values[i] = psi(grid->nodes[i]);
    try {
      grid->psi_prime_values[i] = psi.derivative(grid->nodes[i]);
    } catch (const SingularDerivative&) {
      if (i != 0) throw;
      grid->psi_prime_values[0] = std::numeric_limits<double>::infinity();
      grid->psi_prime_singular_at_origin = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(grid->psi_values[i + 1] > grid->psi_values[i]))
      throw DomainError("psi is not strictly increasing on the grid");
  }
  return grid;
}

ValidationReport validate_psi(const PsiFunction& psi, const Grid& grid) {
  ValidationReport report;
  const std::size_t n = grid.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    try {
      d = psi.derivative(grid.nodes[i]);
    } catch (const SingularDerivative&) {
      report.singular_origin_derivative = true;
      continue;
    }
    if (!(d > 0.0))
      report.violations.push_back({i, "psi' <= 0"});
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(psi(grid.nodes[i + 1]) > psi(grid.nodes[i])))
      report.violations.push_back({i + 1, "psi not strictly increasing"});
  }
  return report;
}

}  // namespace psifrac
