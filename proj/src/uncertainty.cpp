#include "mobius/uncertainty.hpp"

#include "mobius/latticesum.hpp"
#include "mobius/states.hpp"

#include <cmath>
#include <stdexcept>

namespace mobius {

namespace {

// log of the real positive ratio S(1, 2a) / S(1, 2b)
double log_norm_ratio(double a, double b) {
  const auto num = gauss_sum_direct(1.0, {2 * a, 0});
  const auto den = gauss_sum_direct(1.0, {2 * b, 0});
  return num.log_scale - den.log_scale + std::log(num.mantissa.real() / den.mantissa.real());
}

double log_comb_ratio(double a, double b) { return std::log(gauss_comb(a) / gauss_comb(b)); }

// log |<e^{i k phi_hat}>| for k = 1, 2
double log_abs_expect_Uk(double l_prime, int k, Convention conv) {
  const double shift = 0.5 * k;
  // e^{k l' - k^2/2} times the theta ratio at l' - k/2
  const double prefactor = k * l_prime - 0.5 * k * k;
  if (conv == Convention::normalized) return prefactor + log_norm_ratio(l_prime - shift, l_prime);
  return prefactor + log_comb_ratio(l_prime - shift, l_prime);
}

double log_expect_expJ(double l_prime, int lambda, Convention conv) {
  if (lambda != 1 && lambda != -1) throw std::invalid_argument("expect_expJ: lambda must be +1 or -1");
  const double lam = lambda;
  if (conv == Convention::normalized) return log_norm_ratio(l_prime - lam, l_prime);
  return lam * lam - 2 * lam * l_prime + log_comb_ratio(l_prime - lam, l_prime);
}

}  // namespace

Convention parse_convention(std::string_view text) {
  if (text == "normalized") return Convention::normalized;
  if (text == "paper" || text == "paper-literal") return Convention::paper_literal;
  throw std::invalid_argument("convention must be 'normalized' or 'paper', got '" + std::string(text) + "'");
}

std::string to_string(Convention conv) {
  return conv == Convention::normalized ? "normalized" : "paper-literal";
}

std::complex<double> expect_U_closed(double l_prime, double phi, Convention conv) {
  return std::polar(std::exp(log_abs_expect_Uk(l_prime, 1, conv)), phi);
}

std::complex<double> expect_U2_closed(double l_prime, double phi, Convention conv) {
  return std::polar(std::exp(log_abs_expect_Uk(l_prime, 2, conv)), 2 * phi);
}

double expect_expJ_closed(double l_prime, int lambda, Convention conv) {
  return std::exp(log_expect_expJ(l_prime, lambda, conv));
}

double delta2_J(double l_prime, Convention conv) {
  return 0.25 * std::abs(log_expect_expJ(l_prime, 1, conv) + log_expect_expJ(l_prime, -1, conv));
}

double delta2_phi(double l_prime, Convention conv) {
  // 1/4 |ln(1/|z|^2)| = 1/2 |ln|z||
  return 0.5 * std::abs(log_abs_expect_Uk(l_prime, 2, conv));
}

SumRule sum_rule(double l_prime, Convention conv) {
  const double sum = delta2_J(l_prime, conv) + delta2_phi(l_prime, conv);
  return SumRule{sum, l_prime, sum - l_prime};
}

HeisenbergCheck heisenberg_check(const FockStated& state) {
  const MomentSetd m = moments(state);
  const double u2 = std::norm(m.exp_U);
  const double lhs = m.var_J * (1 - u2);
  const double rhs = u2 / 4;
  return HeisenbergCheck{lhs, rhs, lhs >= rhs - 1e-12};
}

SmallAngleReport small_angle_report(double l_prime, Convention conv) {
  const double product = delta2_J(l_prime, conv) * delta2_phi(l_prime, conv);
  const FockStated cs = build_cs({l_prime, 0.0}, {.padding = std::nullopt, .unit_peak = true});
  const double u2 = std::norm(moments(cs).exp_U);
  return SmallAngleReport{product, u2 >= kSmallAngleThreshold};
}

UncertaintyReport uncertainty_report(double l_prime, double phi, Convention conv) {
  UncertaintyReport r{};
  r.l_prime = l_prime;
  r.phi = phi;
  r.convention = conv;
  r.d2_J = delta2_J(l_prime, conv);
  r.d2_phi = delta2_phi(l_prime, conv);
  r.sum = r.d2_J + r.d2_phi;
  const HeisenbergCheck h = heisenberg_check(build_cs({l_prime, phi}, {.padding = std::nullopt, .unit_peak = true}));
  r.heis_lhs = h.lhs;
  r.heis_rhs = h.rhs;
  r.heis_satisfied = h.satisfied;
  const SmallAngleReport s = small_angle_report(l_prime, conv);
  r.small_angle_product = s.product;
  r.small_angle_valid = s.valid;
  return r;
}

std::vector<SumMinimum> find_sum_minima(const StripConfigd& strip, double phi_min, double phi_max,
                                        Convention conv, long samples, double phi_tol) {
  if (samples < 3) throw std::invalid_argument("find_sum_minima: need at least 3 samples");
  auto curve = [&](double phi) { return sum_rule(effective_level(strip, phi), conv).sum; };

  const std::vector<double> grid = uniform_grid(phi_min, phi_max, samples);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = curve(grid[i]);

  std::vector<SumMinimum> minima;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const bool local = values[i] <= values[i - 1] && values[i] <= values[i + 1];
    const bool strict = values[i] < values[i - 1] || values[i] < values[i + 1];
    if (!local || !strict) continue;

    // golden section on [grid[i-1], grid[i+1]]
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = grid[i - 1];
    double b = grid[i + 1];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = curve(c);
    double fd = curve(d);
    while (b - a > phi_tol) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = curve(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = curve(d);
      }
    }
    const double phi = (a + b) / 2;
    if (!minima.empty() && std::abs(minima.back().phi - phi) < 10 * phi_tol) continue;
    const double lp = effective_level(strip, phi);
    minima.push_back(SumMinimum{phi, lp, sum_rule(lp, conv).sum});
  }
  return minima;
}

}  // namespace mobius
