// Lattice Gaussian sums
//
//   S(a, beta) = sum_{j in Z} exp(-a j^2 + beta j),   a > 0, beta complex,
//
// which is the canonical form used throughout the library for every theta
// function expression. Two independent evaluations are provided:
//
//   direct  : sum over j around the peak round(Re(beta) / 2a)
//   poisson : sqrt(pi/a) exp(beta^2 / 4a) sum_k exp(-pi^2 k^2 / a - i pi k beta / a)
//
// Both are evaluated with the dominant exponential factored out, so results
// carry a (mantissa, log_scale) pair and never overflow for the level
// ranges the sweeps expose. The truncation window is widened until the
// certified relative tail is below the requested epsilon.
#ifndef MOBIUS_LATTICESUM_HPP
#define MOBIUS_LATTICESUM_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mobius {

template <typename Real>
struct GaussSumSpec {
  Real a = Real(1);
  std::complex<Real> beta{};
  Real epsilon = Real(1e-18);
};

template <typename Real>
struct GaussSumResult {
  /// value = mantissa * exp(log_scale)
  std::complex<Real> mantissa;
  Real log_scale = Real(0);
  /// Summation window; for the Poisson form this is the dual index range.
  long j_lo = 0;
  long j_hi = 0;
  Real tail_bound = Real(0);

  std::complex<Real> value() const {
    using std::exp;
    return mantissa * exp(log_scale);
  }
  Real log_abs() const {
    using std::abs;
    using std::log;
    return log(abs(mantissa)) + log_scale;
  }
};

/// num / den, combining scales before exponentiating.
template <typename Real>
std::complex<Real> gauss_sum_ratio(const GaussSumResult<Real>& num, const GaussSumResult<Real>& den) {
  using std::exp;
  return num.mantissa / den.mantissa * exp(num.log_scale - den.log_scale);
}

/// |x - y| / |x|, computed on a common scale.
template <typename Real>
Real gauss_sum_relative_difference(const GaussSumResult<Real>& x, const GaussSumResult<Real>& y) {
  using std::abs;
  using std::exp;
  const std::complex<Real> y_on_x = y.mantissa * exp(y.log_scale - x.log_scale);
  return abs(x.mantissa - y_on_x) / abs(x.mantissa);
}

namespace detail {

template <typename Real>
void validate(const GaussSumSpec<Real>& spec) {
  using std::isfinite;
  if (!(spec.a > Real(0)) || !isfinite(spec.a))
    throw std::domain_error("lattice sum: quadratic coefficient a must be positive");
  if (!(spec.epsilon > Real(0) && spec.epsilon < Real(1)))
    throw std::invalid_argument("lattice sum: epsilon must lie in (0, 1)");
  if (!isfinite(spec.beta.real()) || !isfinite(spec.beta.imag()))
    throw std::invalid_argument("lattice sum: beta must be finite");
}

// Bound on sum_{|k| >= d} exp(-w k^2)-type tails on one side, d > 0.
template <typename Real>
Real gaussian_side_tail(Real width, Real d) {
  using std::exp;
  using std::sqrt;
  const Real full = sqrt(std::numbers::pi_v<Real> / width) + Real(1);
  if (d <= Real(0)) return full;
  const Real geometric = Real(1) - exp(-Real(2) * width * d);
  if (geometric <= Real(0)) return full;
  const Real bound = exp(-width * d * d) / geometric;
  return bound < full ? bound : full;
}

// sum_k exp(-width (k - center)^2) * exp(i (phase_slope k + phase_offset)),
// window widened until the relative tail is <= epsilon.
template <typename Real>
GaussSumResult<Real> centered_gaussian_sum(Real width, Real center, Real phase_slope,
                                           Real phase_offset, Real epsilon, Real log_scale) {
  using std::abs;
  using std::ceil;
  using std::exp;
  using std::llround;
  using std::log;
  using std::sqrt;

  const long mid = static_cast<long>(llround(center));
  const Real offset = center - Real(mid);
  long half = static_cast<long>(ceil(sqrt(log(Real(1) / epsilon) / width))) + 2;
  constexpr long max_half = 1L << 24;

  for (;;) {
    std::complex<Real> sum{};
    for (long m = -half; m <= half; ++m) {
      const Real u = Real(m) - offset;
      const Real phase = phase_slope * Real(mid + m) + phase_offset;
      sum += std::polar(exp(-width * u * u), phase);
    }
    const Real right = Real(half + 1) - offset;
    const Real left = Real(half + 1) + offset;
    const Real tail = gaussian_side_tail(width, right) + gaussian_side_tail(width, left);
    const Real modulus = abs(sum);
    const Real relative = modulus > Real(0) ? tail / modulus : std::numeric_limits<Real>::infinity();
    if (relative <= epsilon || half >= max_half) {
      if (relative > epsilon)
        throw std::domain_error("lattice sum: cannot certify tail (sum too close to a zero)");
      return GaussSumResult<Real>{sum, log_scale, mid - half, mid + half, relative};
    }
    half *= 2;
  }
}

}  // namespace detail

/// Direct lattice summation around the peak index.
template <typename Real>
GaussSumResult<Real> gauss_sum_direct(const GaussSumSpec<Real>& spec) {
  detail::validate(spec);
  const Real b = spec.beta.real();
  const Real y = spec.beta.imag();
  // -a j^2 + b j = -a (j - b/2a)^2 + b^2/4a
  return detail::centered_gaussian_sum(spec.a, b / (Real(2) * spec.a), y, Real(0), spec.epsilon,
                                       b * b / (Real(4) * spec.a));
}

/// Reciprocal-lattice (Poisson-resummed) evaluation of the same sum.
template <typename Real>
GaussSumResult<Real> gauss_sum_poisson(const GaussSumSpec<Real>& spec) {
  using std::log;
  detail::validate(spec);
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real a = spec.a;
  const Real b = spec.beta.real();
  const Real y = spec.beta.imag();
  // exp(beta^2/4a) exp(-pi^2 k^2/a - i pi k beta/a)
  //   = exp(b^2/4a) exp(i b y / 2a) exp(-(pi^2/a)(k - y/2pi)^2) exp(-i pi k b / a)
  return detail::centered_gaussian_sum(pi * pi / a, y / (Real(2) * pi), -pi * b / a,
                                       b * y / (Real(2) * a), spec.epsilon,
                                       b * b / (Real(4) * a) + log(pi / a) / Real(2));
}

template <typename Real>
GaussSumResult<Real> gauss_sum_direct(Real a, std::complex<Real> beta, Real epsilon = Real(1e-18)) {
  return gauss_sum_direct(GaussSumSpec<Real>{a, beta, epsilon});
}

template <typename Real>
GaussSumResult<Real> gauss_sum_poisson(Real a, std::complex<Real> beta, Real epsilon = Real(1e-18)) {
  return gauss_sum_poisson(GaussSumSpec<Real>{a, beta, epsilon});
}

/// g(c) = sum_j exp(-(j - c)^2) = exp(-c^2) S(1, 2c). Positive and 1-periodic,
/// within 2e-4 of sqrt(pi).
template <typename Real>
Real gauss_comb(Real c) {
  return gauss_sum_direct(GaussSumSpec<Real>{Real(1), {Real(2) * c, Real(0)}, Real(1e-18)})
      .mantissa.real();
}

}  // namespace mobius

#endif  // MOBIUS_LATTICESUM_HPP
