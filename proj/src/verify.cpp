#include "mobius/verify.hpp"

#include "mobius/detail/parallel.hpp"
#include "mobius/latticesum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mobius {

namespace {

constexpr double kPi = std::numbers::pi;

// Paper-literal values further than this from the engine are marked unreproduced.
constexpr double kReproducedTolerance = 1e-9;
constexpr double kUnitarityTolerance = 1e-9;

double relative_deviation(std::complex<double> value, std::complex<double> reference) {
  const double scale = std::abs(reference);
  if (scale == 0) return std::abs(value);
  return std::abs(value - reference) / scale;
}

}  // namespace

ResidualEntry eigenvalue_residual(double l_prime, double phi, const BuildOptions& options,
                                  double epsilon_tail) {
  const CSParams p{l_prime, phi, epsilon_tail};
  const FockStated cs = build_cs(p, options);
  const FockStated diff = ladder_X(cs) - p.xi() * cs;
  return ResidualEntry{l_prime, phi, diff.norm() / cs.norm(), cs.tail_bound(),
                       cs.tail_bound() > epsilon_tail};
}

std::vector<PeriodicityEntry> periodicity_report(const StripConfigd& strip,
                                                 const std::vector<double>& phi0s,
                                                 const std::vector<double>& periods, StateKind kind,
                                                 const ChiRule& chi, const BuildOptions& options) {
  if (phi0s.empty() || periods.empty())
    throw std::invalid_argument("periodicity_report: phi0 and period lists must be nonempty");
  std::string label = to_string(kind);
  if (kind != StateKind::cs) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", chi.value);
    label += chi.tied_to_phi ? std::string(" chi=phi") : " chi=" + std::string(buf);
  }
  std::vector<PeriodicityEntry> entries;
  entries.reserve(phi0s.size() * periods.size());
  for (double phi0 : phi0s) {
    const FockStated start = build_strip_state(strip, kind, chi, phi0, options);
    for (double period : periods) {
      const FockStated later = build_strip_state(strip, kind, chi, phi0 + period, options);
      double f = std::numeric_limits<double>::quiet_NaN();
      if (!start.is_zero() && !later.is_zero()) f = fidelity(start, later);
      const bool pass = std::abs(f - 1) <= kSameStateTolerance;
      entries.push_back(PeriodicityEntry{strip.profile.id(), label, strip.l, phi0, period, f, pass});
    }
  }
  return entries;
}

Quantity parse_quantity(std::string_view id) {
  if (id == "norm") return Quantity::norm;
  if (id == "overlap") return Quantity::overlap;
  if (id == "expect_U") return Quantity::expect_U;
  if (id == "expect_U2") return Quantity::expect_U2;
  if (id == "expect_expJ") return Quantity::expect_expJ;
  throw std::invalid_argument("unknown quantity id '" + std::string(id) + "'");
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::norm:
      return "norm";
    case Quantity::overlap:
      return "overlap";
    case Quantity::expect_U:
      return "expect_U";
    case Quantity::expect_U2:
      return "expect_U2";
    case Quantity::expect_expJ:
      return "expect_expJ";
  }
  return "norm";
}

DiscrepancyEntry closed_vs_direct(Quantity quantity, const DiscrepancyParams& params,
                                  const BuildOptions& options) {
  DiscrepancyEntry e{};
  e.quantity = quantity;
  e.params = params;
  const CSParams p1{params.l_prime, params.phi};
  const FockStated cs = build_cs(p1, options);

  switch (quantity) {
    case Quantity::norm:
      e.engine_value = inner_product(cs, cs);
      e.closed_normalized = norm_closed(params.l_prime);
      e.closed_paper_literal = e.closed_normalized;
      break;
    case Quantity::overlap: {
      const CSParams p2{params.l_prime2, params.phi2};
      e.engine_value = inner_product(cs, build_cs(p2, options));
      e.closed_normalized = overlap_closed(p1, p2);
      e.closed_paper_literal = overlap_paper_literal(p1, p2);
      break;
    }
    case Quantity::expect_U:
      e.engine_value = moments(cs).exp_U;
      e.closed_normalized = expect_U_closed(params.l_prime, params.phi, Convention::normalized);
      e.closed_paper_literal = expect_U_closed(params.l_prime, params.phi, Convention::paper_literal);
      e.unitarity_violation = std::abs(e.closed_paper_literal) > 1 + kUnitarityTolerance;
      break;
    case Quantity::expect_U2:
      e.engine_value = moments(cs).exp_U2;
      e.closed_normalized = expect_U2_closed(params.l_prime, params.phi, Convention::normalized);
      e.closed_paper_literal = expect_U2_closed(params.l_prime, params.phi, Convention::paper_literal);
      e.unitarity_violation = std::abs(e.closed_paper_literal) > 1 + kUnitarityTolerance;
      break;
    case Quantity::expect_expJ: {
      const MomentSetd m = moments(cs);
      e.engine_value = params.lambda == 1 ? m.exp_expJ_minus : m.exp_expJ_plus;
      e.closed_normalized = expect_expJ_closed(params.l_prime, params.lambda, Convention::normalized);
      e.closed_paper_literal =
          expect_expJ_closed(params.l_prime, params.lambda, Convention::paper_literal);
      break;
    }
  }
  e.rel_dev_normalized = relative_deviation(e.closed_normalized, e.engine_value);
  e.rel_dev_paper_literal = relative_deviation(e.closed_paper_literal, e.engine_value);
  e.paper_unreproduced = e.rel_dev_paper_literal > kReproducedTolerance;
  return e;
}

DiscrepancyEntry closed_vs_direct(std::string_view quantity, const DiscrepancyParams& params,
                                  const BuildOptions& options) {
  return closed_vs_direct(parse_quantity(quantity), params, options);
}

double poisson_check(double a, std::complex<double> beta) {
  if (!(a > 0)) throw std::domain_error("poisson_check: a must be positive");
  const auto direct = gauss_sum_direct(a, beta);
  const auto dual = gauss_sum_poisson(a, beta);
  // At a zero of the sum (e.g. a = 1, beta = 1 + i pi) both values are pure rounding
  // noise; measure against the sum of term moduli S(a, Re beta) instead.
  const auto terms = gauss_sum_direct(a, std::complex<double>(beta.real(), 0));
  const double terms_on_direct = terms.mantissa.real() * std::exp(terms.log_scale - direct.log_scale);
  const bool vanishes = std::abs(direct.mantissa) <= 64 * std::numeric_limits<double>::epsilon() * terms_on_direct;
  const double scale = vanishes ? terms_on_direct : std::abs(direct.mantissa);
  const std::complex<double> dual_on_direct = dual.mantissa * std::exp(dual.log_scale - direct.log_scale);
  return std::abs(direct.mantissa - dual_on_direct) / scale;
}

bool VerifyReport::passed(double tolerance) const {
  for (const auto& r : eigenvalue_residuals)
    if (!(r.residual <= tolerance) || r.truncation_warning) return false;
  for (const auto& p : poisson_checks)
    if (!(p.rel_dev <= tolerance)) return false;
  for (const auto& d : discrepancies)
    if (!(d.rel_dev_normalized <= tolerance)) return false;
  for (const auto& p : periodicity)
    if (!p.pass) return false;
  return true;
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  const BuildOptions build{options.padding, false};

  const std::vector<double> residual_levels{-1, 0, 1, 2};
  const std::vector<double> residual_angles{0, 1, kPi, 2 * kPi};
  report.eigenvalue_residuals.resize(residual_levels.size() * residual_angles.size());
  detail::parallel_for(report.eigenvalue_residuals.size(), options.threads, [&](std::size_t i) {
    report.eigenvalue_residuals[i] = eigenvalue_residual(
        residual_levels[i / residual_angles.size()], residual_angles[i % residual_angles.size()], build);
  });

  for (int re = 0; re < 11; ++re)
    for (int im = 0; im < 5; ++im)
      report.poisson_checks.push_back({1.0, {-10.0 + 2.0 * re, -kPi + kPi / 2 * im}, 0});
  report.poisson_checks.push_back({1.0, {0, 0}, 0});
  report.poisson_checks.push_back({1.0, {2 * 0.287682, 0}, 0});
  report.poisson_checks.push_back({1.0, {1, kPi}, 0});
  detail::parallel_for(report.poisson_checks.size(), options.threads, [&](std::size_t i) {
    auto& p = report.poisson_checks[i];
    p.rel_dev = poisson_check(p.a, p.beta);
  });

  const std::vector<double> levels{-0.5, 0, 0.69, 1, 2.5};
  const std::vector<double> angles{0, 1, kPi};
  std::vector<std::pair<Quantity, DiscrepancyParams>> requests;
  for (double lp : levels) {
    for (double phi : angles) {
      requests.push_back({Quantity::norm, {lp, phi}});
      requests.push_back({Quantity::expect_U, {lp, phi}});
      requests.push_back({Quantity::expect_U2, {lp, phi}});
      requests.push_back({Quantity::expect_expJ, {lp, phi, 0, 0, 1}});
      requests.push_back({Quantity::expect_expJ, {lp, phi, 0, 0, -1}});
      for (double lp2 : {-0.405465, 0.693147})
        requests.push_back({Quantity::overlap, {lp, phi, lp2, 0}});
    }
  }
  // beyond the grid: the paper-literal phase expectations leave the unit disk
  requests.push_back({Quantity::expect_U, {4, 0}});
  requests.push_back({Quantity::expect_U2, {4, 0}});
  report.discrepancies.resize(requests.size());
  detail::parallel_for(requests.size(), options.threads, [&](std::size_t i) {
    report.discrepancies[i] = closed_vs_direct(requests[i].first, requests[i].second, build);
  });

  const std::vector<StateKind> kinds{StateKind::cs, StateKind::scs_angle, StateKind::scs_xi,
                                     StateKind::scs_xi_minus};
  const std::vector<ChiRule> chis{ChiRule{false, 0.7}, ChiRule{true, 0}};
  const std::vector<double> phi0s{0, 1, kPi};
  struct Claim {
    StripConfigd strip;
    std::vector<double> phi0s;
    std::vector<double> periods;
  };
  const std::vector<Claim> claims{
      {{0, RadialProfiled::constant(0.0)}, phi0s, {2 * kPi, 4 * kPi}},
      {{0, RadialProfiled::constant(0.3)}, phi0s, {4 * kPi}},
      {{0, RadialProfiled::constant(0.5)}, phi0s, {4 * kPi}},
      {{0, RadialProfiled::constant(0.7)}, phi0s, {4 * kPi}},
      {{0, RadialProfiled::sin_squared()}, {0}, {2 * kPi, 4 * kPi}},
      {{0, RadialProfiled::sin_squared()}, phi0s, {4 * kPi}},
      {{0, RadialProfiled::cos_squared()}, phi0s, {4 * kPi}},
  };
  std::vector<std::vector<PeriodicityEntry>> blocks(claims.size() * kinds.size() * chis.size());
  detail::parallel_for(blocks.size(), options.threads, [&](std::size_t i) {
    const Claim& c = claims[i / (kinds.size() * chis.size())];
    const StateKind kind = kinds[(i / chis.size()) % kinds.size()];
    const ChiRule& chi = chis[i % chis.size()];
    if (kind == StateKind::cs && i % chis.size() != 0) return;
    blocks[i] = periodicity_report(c.strip, c.phi0s, c.periods, kind, chi, build);
  });
  // superpositions that vanish identically (e.g. scs-angle with chi = phi at phi = pi) carry no claim
  for (auto& b : blocks)
    for (auto& e : b)
      if (!std::isnan(e.fidelity)) report.periodicity.push_back(std::move(e));
  return report;
}

}  // namespace mobius
