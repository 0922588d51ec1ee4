// Phase / angular-momentum uncertainty measures for coherent states on the strip.
//
//   D2(J)   = 1/4 | ln(<e^{-2J}> <e^{2J}>) |
//   D2(phi) = 1/4 | ln(1 / |<e^{2 i phi}>|^2) |
//
// Closed forms come in two conventions. `normalized` divides the
// unnormalized expectation sums by the state norm S(1, 2l'), so every
// expectation of a unitary stays inside the unit disk. `paper_literal`
// keeps the literal prefactors and reads each theta ratio as a ratio of
// Gaussian combs g(c) = sum_j exp(-(j - c)^2):
//
//   <e^{i phi}>   = e^{l' + i phi - 1/2}  g(l' - 1/2) / g(l')
//   <e^{2 i phi}> = e^{2(l' + i phi) - 2} g(l' - 1)   / g(l')
//   <e^{-2 lambda J}> = e^{lambda^2 - 2 lambda l'} g(l' - lambda) / g(l')
//
// The two conventions agree for <e^{-2 lambda J}> and differ for the phase
// expectations.
#ifndef MOBIUS_UNCERTAINTY_HPP
#define MOBIUS_UNCERTAINTY_HPP

#include "mobius/fock.hpp"
#include "mobius/geometry.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace mobius {

enum class Convention { normalized, paper_literal };

Convention parse_convention(std::string_view text);  // "normalized" | "paper"
std::string to_string(Convention conv);

/// |<e^{i phi_hat}>|^2 needed before the small-angle reading is accepted.
inline constexpr double kSmallAngleThreshold = 0.9;

std::complex<double> expect_U_closed(double l_prime, double phi, Convention conv);
std::complex<double> expect_U2_closed(double l_prime, double phi, Convention conv);
/// <e^{-2 lambda J}> for lambda = +1 or -1.
double expect_expJ_closed(double l_prime, int lambda, Convention conv);

double delta2_J(double l_prime, Convention conv);
double delta2_phi(double l_prime, Convention conv);

struct SumRule {
  double sum;
  double paper_target;  ///< l'
  double deviation;     ///< sum - l'
};
SumRule sum_rule(double l_prime, Convention conv);

/// Var(J) (1 - |<U>|^2) >= |<U>|^2 / 4, with moments from the engine.
struct HeisenbergCheck {
  double lhs;
  double rhs;
  bool satisfied;
};
HeisenbergCheck heisenberg_check(const FockStated& state);

struct SmallAngleReport {
  double product;  ///< D2(J) D2(phi)
  bool valid;      ///< |<U>|^2 >= kSmallAngleThreshold for the normalized coherent state
  double target = 0.25;
};
SmallAngleReport small_angle_report(double l_prime, Convention conv);

struct UncertaintyReport {
  double l_prime;
  double phi;
  Convention convention;
  double d2_J;
  double d2_phi;
  double sum;
  double heis_lhs;
  double heis_rhs;
  bool heis_satisfied;
  double small_angle_product;
  bool small_angle_valid;
};

/// Closed-form measures at (l', phi) plus the Heisenberg check on the
/// coherent state built there.
UncertaintyReport uncertainty_report(double l_prime, double phi, Convention conv);

struct SumMinimum {
  double phi;
  double l_prime;
  double sum;
};

/// Local minima of phi -> sum_rule(l'(phi)).sum on [phi_min, phi_max],
/// bracketed on a uniform grid of `samples` points and refined by golden
/// section to `phi_tol`. Sorted by phi.
std::vector<SumMinimum> find_sum_minima(const StripConfigd& strip, double phi_min, double phi_max,
                                        Convention conv, long samples = 4001, double phi_tol = 1e-10);

}  // namespace mobius

#endif  // MOBIUS_UNCERTAINTY_HPP
