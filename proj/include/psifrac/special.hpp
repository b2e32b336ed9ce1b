#ifndef PSIFRAC_SPECIAL_HPP
#define PSIFRAC_SPECIAL_HPP

namespace psifrac {

/// Gamma function for positive arguments (Lanczos approximation).
/// Relative accuracy better than 1e-12 on [0.05, 50]. Throws DomainError
/// for x <= 0.
double gamma_fn(double x);

/// One-parameter Mittag-Leffler function E_alpha(z) = sum z^m / Gamma(alpha*m + 1)
/// for 0 < alpha <= 1 and z >= 0. The series is summed until a term falls
/// below 1e-15 of the partial sum; throws ConvergenceError if 10000 terms
/// do not suffice.
double mittag_leffler(double alpha, double z);

}  // namespace psifrac

#endif
