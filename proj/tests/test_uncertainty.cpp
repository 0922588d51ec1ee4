#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mobius/uncertainty.hpp"
#include "mobius/states.hpp"
#include "oracle.hpp"

#include <cmath>
#include <numbers>

using namespace mobius;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;
constexpr auto N = Convention::normalized;
constexpr auto P = Convention::paper_literal;

std::vector<double> level_grid() {
  std::vector<double> v;
  for (int i = 0; i <= 100; ++i) v.push_back(-2 + 0.1 * i);
  return v;
}

}  // namespace

TEST_CASE("expect_U_closed") {
  CHECK(expect_U_closed(0, 0, N).real() == doctest::Approx(0.77863967150613793959).epsilon(1e-14));
  for (double lp : {0.0, 1.0, 2.0, 3.0}) {
    const double m = std::abs(expect_U_closed(lp, 0.4, N));
    CHECK(m >= 0.7785);
    CHECK(m <= 0.7789);
  }
  const cd u = expect_U_closed(0.3, 1.2, N);
  CHECK(std::arg(u) == doctest::Approx(1.2).epsilon(1e-14));
  for (double lp : {6.0, 9.5})
    CHECK(std::norm(expect_U_closed(lp, 0, P)) / std::exp(2 * lp - 1) == doctest::Approx(1).epsilon(5e-4));
}

TEST_CASE("expect_U2_closed") {
  for (double lp : {0.0, 0.5, 1.0, 4.0}) {
    CHECK(std::abs(expect_U2_closed(lp, 0.3, N)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(expect_U2_closed(lp, 0, N)) ==
          doctest::Approx(static_cast<double>(std::abs(oracle::expect_Uk(lp, 0, 2)))).epsilon(1e-13));
  }
  CHECK(std::abs(expect_U2_closed(1, 0, P)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(expect_U2_closed(4, 0, P)) == doctest::Approx(std::exp(6.0)).epsilon(1e-13));
  CHECK(std::arg(expect_U2_closed(0.2, 0.5, P)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("expect_expJ_closed") {
  CHECK(expect_expJ_closed(0, 1, N) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(expect_expJ_closed(0, -1, N) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  for (double lp : {0.0, 0.3, 2.0})
    CHECK(expect_expJ_closed(lp, 1, N) * expect_expJ_closed(lp, -1, N) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(expect_expJ_closed(0.3, 1, N) == doctest::Approx(static_cast<double>(oracle::expect_expJ(0.3L, -2))).epsilon(1e-13));
  CHECK_THROWS(expect_expJ_closed(0, 2, N));
}

TEST_CASE("delta2 and the sum rule") {
  for (auto conv : {N, P}) {
    CHECK(delta2_J(2.7, conv) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(delta2_J(0.0, conv) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(delta2_phi(1.3, N) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(delta2_phi(4, P) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(delta2_phi(1, P)) <= 1e-12);

  const auto s4 = sum_rule(4, P);
  CHECK(s4.sum == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(s4.paper_target == 4);
  CHECK(s4.deviation == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(sum_rule(1, P).sum == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sum_rule(-0.7, N).sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid invariants") {
  for (double lp : level_grid()) {
    CHECK(std::abs(expect_U_closed(lp, 0.1, N)) <= 1);
    CHECK(std::abs(expect_U2_closed(lp, 0.1, N)) <= 1);
    CHECK(std::abs(delta2_J(lp, N) - 0.5) <= 1e-9);
    CHECK(std::abs(delta2_phi(lp, N) - 0.5) <= 1e-9);
    const double en = expect_expJ_closed(lp, 1, N), ep = expect_expJ_closed(lp, 1, P);
    CHECK(std::abs(en - ep) <= 1e-12 * en);
    CHECK(expect_expJ_closed(lp, -1, N) == doctest::Approx(expect_expJ_closed(lp, -1, P)).epsilon(1e-12));
    if (lp >= -1e-12) CHECK(std::abs(sum_rule(lp, P).sum - (std::abs(lp - 1) + 0.5)) <= 1e-9);
  }
}

TEST_CASE("closed forms match engine moments") {
  for (double lp : {-1.5, 0.0, 0.69, 2.5, 6.0})
    for (double phi : {0.0, 1.0, pi}) {
      const auto m = moments(build_cs({lp, phi}, {.unit_peak = true}));
      const cd u = expect_U_closed(lp, phi, N), u2 = expect_U2_closed(lp, phi, N);
      CHECK(std::abs(m.exp_U - u) / std::abs(u) <= 1e-11);
      CHECK(std::abs(m.exp_U2 - u2) / std::abs(u2) <= 1e-11);
      CHECK(std::abs(m.exp_expJ_minus - expect_expJ_closed(lp, 1, N)) / m.exp_expJ_minus <= 1e-11);
      CHECK(std::abs(m.exp_expJ_plus - expect_expJ_closed(lp, -1, N)) / m.exp_expJ_plus <= 1e-11);
    }
}

TEST_CASE("heisenberg check") {
  const auto h = heisenberg_check(build_cs({0.0, 0.0}));
  CHECK(h.lhs == doctest::Approx(0.19645819410248124).epsilon(1e-12));
  CHECK(h.rhs == doctest::Approx(0.15156993451079660).epsilon(1e-12));
  CHECK(h.satisfied);

  const auto b = heisenberg_check(FockStated::basis(0));
  CHECK(b.lhs == 0);
  CHECK(b.rhs == 0);
  CHECK(b.satisfied);

  const auto cat = heisenberg_check(build_scs({SCSKind::opposite_xi, {0.0, 0.0}, 0.0}));
  CHECK(cat.rhs <= 1e-28);
  CHECK(cat.satisfied);

  for (double lp : level_grid()) {
    const auto c = heisenberg_check(build_cs({lp, 0.3}));
    CHECK(c.lhs - c.rhs >= -1e-12);
    for (auto kind : {StateKind::scs_angle, StateKind::scs_xi, StateKind::scs_xi_minus}) {
      const auto s = build_state(lp, 0.3, kind, ChiRule{false, 0.6});
      if (!s.is_zero()) CHECK(heisenberg_check(s).satisfied);
    }
  }
  CHECK_THROWS_AS(heisenberg_check(FockStated::zero(0, 3)), ZeroStateError);
}

TEST_CASE("small angle report") {
  for (double lp : {-1.0, 0.0, 3.3}) {
    const auto r = small_angle_report(lp, N);
    CHECK(r.product == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_FALSE(r.valid);
    CHECK(r.target == 0.25);
  }
  CHECK(small_angle_report(2, P).product == doctest::Approx(0.5).epsilon(1e-12));
  const auto one = small_angle_report(1, P);
  CHECK(std::abs(one.product) <= 1e-12);
  CHECK_FALSE(one.valid);
}

TEST_CASE("uncertainty report") {
  const auto r = uncertainty_report(0.0, 0.0, N);
  CHECK(r.convention == N);
  CHECK(r.sum == doctest::Approx(r.d2_J + r.d2_phi));
  CHECK(r.heis_satisfied);
  CHECK(r.d2_J >= 0);
  CHECK(r.d2_phi >= 0);
  const auto big = uncertainty_report(40.0, 0.3, P);
  CHECK(std::isfinite(big.heis_lhs));
  CHECK(big.sum == doctest::Approx(39.5).epsilon(1e-12));
}

TEST_CASE("sum minima sit at the roots of l'(phi) = 1") {
  const StripConfigd strip{0.9, RadialProfiled::cos_squared()};
  const auto all = find_sum_minima(strip, 0, 4 * pi, P);
  // remaining minima sit where l' has a local maximum below 1 (r = 0 at phi = 7 pi / 2)
  std::vector<SumMinimum> minima;
  for (const auto& m : all) {
    if (m.sum < 0.5 + 1e-6) minima.push_back(m);
    else CHECK(m.l_prime < 1);
  }
  CHECK(all.size() == 5);
  const auto roots = oracle::bisection_roots(
      [&](double phi) { return effective_level(strip, phi) - 1; }, 0, 4 * pi, 4000, 1e-13);
  REQUIRE(roots.size() == 4);
  REQUIRE(minima.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(std::abs(minima[i].phi - roots[i]) <= 1e-6);
    CHECK(std::abs(minima[i].sum - 0.5) <= 1e-9);
  }
  CHECK(roots[0] == doctest::Approx(2.259679574759613).epsilon(1e-10));
}

TEST_CASE("convention parsing") {
  CHECK(parse_convention("paper") == P);
  CHECK(parse_convention("paper-literal") == P);
  CHECK(parse_convention("normalized") == N);
  CHECK_THROWS_AS(parse_convention("other"), std::invalid_argument);
}
