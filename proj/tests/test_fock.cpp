#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mobius/fock.hpp"
#include "mobius/states.hpp"
#include "oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mobius;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

FockStated random_state(std::mt19937_64& rng, long j_lo, long n) {
  std::normal_distribution<double> g;
  FockStated::Vector v(n);
  for (long i = 0; i < n; ++i) v[i] = cd(g(rng), g(rng));
  return FockStated(j_lo, v);
}

double max_abs_diff(const FockStated& a, const FockStated& b) {
  double m = 0;
  for (long j = std::min(a.j_lo(), b.j_lo()); j <= std::max(a.j_hi(), b.j_hi()); ++j)
    m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST_CASE("basis inner products") {
  CHECK(inner_product(FockStated::basis(2), FockStated::basis(2)) == cd(1));
  CHECK(inner_product(FockStated::basis(2), FockStated::basis(3)) == cd(0));
}

TEST_CASE("coherent-state norm equals the lattice sum") {
  const auto cs = build_cs({0.0, 0.0});
  CHECK(inner_product(cs, cs).real() == doctest::Approx(1.772637204826652153).epsilon(1e-14));
}

TEST_CASE("conjugate symmetry and linearity") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_state(rng, -2, 5);
    const auto b = random_state(rng, 0, 5);
    const cd ab = inner_product(a, b), ba = inner_product(b, a);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-14 * (1 + std::abs(ab)));
    const cd s(0.3, -1.1);
    CHECK(std::abs(inner_product(s * a, b) - std::conj(s) * ab) <= 1e-13 * (1 + std::abs(ab)));
    CHECK(std::abs(inner_product(a, s * b) - s * ab) <= 1e-13 * (1 + std::abs(ab)));
  }
}

TEST_CASE("phase shift") {
  const auto up = phase_shift(FockStated::basis(0), 1);
  CHECK(up[1] == cd(1));
  CHECK(up[0] == cd(0));

  std::mt19937_64 rng(2);
  const auto s = random_state(rng, -3, 7);
  CHECK(phase_shift(s, 5).squared_norm() == s.squared_norm());
  CHECK(phase_shift(phase_shift(s, 3), -3)[-1] == s[-1]);

  // |<U^2>| on CS(1, 0) = e^{-1}
  const auto cs = build_cs({1.0, 0.0});
  const cd u2 = inner_product(cs, phase_shift(cs, 2)) / cs.squared_norm();
  CHECK(std::abs(u2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(u2) == doctest::Approx(static_cast<double>(std::abs(oracle::expect_Uk(1, 0, 2)))).epsilon(1e-14));
}

TEST_CASE("scale_exp_J") {
  CHECK(scale_exp_J(FockStated::basis(0), 1.7)[0] == cd(1));
  CHECK(std::abs(scale_exp_J(FockStated::basis(1), 1.7)[1] - std::exp(1.7)) < 1e-14);

  const auto cs = build_cs({0.3, 0.0});
  const double plus = inner_product(cs, scale_exp_J(cs, 2.0)).real() / cs.squared_norm();
  const double minus = inner_product(cs, scale_exp_J(cs, -2.0)).real() / cs.squared_norm();
  CHECK(plus * minus == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(plus == doctest::Approx(static_cast<double>(oracle::expect_expJ(0.3L, 2))).epsilon(1e-13));

  // far outside double range on its own, finite after the log-domain product
  const auto tiny = FockStated(700, FockStated::Vector::Constant(1, cd(1e-300)));
  const auto scaled = scale_exp_J(tiny, 1.0);
  CHECK(std::isfinite(scaled[700].real()));
  CHECK(std::log(scaled[700].real()) == doctest::Approx(700 + std::log(1e-300)).epsilon(1e-12));
}

TEST_CASE("ladder operator") {
  const auto x0 = ladder_X(FockStated::basis(0));
  CHECK(std::abs(x0[1] - std::exp(-0.5)) < 1e-16);

  const auto cs = build_cs({0.0, 0.0});
  CHECK(max_abs_diff(ladder_X(cs), cs) / cs.norm() <= 1e-10);

  for (double lp : {-1.0, 0.0, 1.0, 2.0}) {
    for (double phi : {0.0, 1.0, pi}) {
      const CSParams p{lp, phi};
      const auto s = build_cs(p);
      const auto diff = ladder_X(s) - p.xi() * s;
      CHECK(diff.norm() / s.norm() <= 1e-10);
    }
  }
}

TEST_CASE("moments") {
  const auto m0 = moments(FockStated::basis(0));
  CHECK(m0.mean_J == 0);
  CHECK(m0.var_J == 0);
  CHECK(m0.exp_U == cd(0));
  CHECK(m0.exp_U2 == cd(0));

  const auto m = moments(build_cs({0.0, 0.0}));
  // e^{-1/2} S(1,-1) / S(1,0)
  CHECK(m.exp_U.real() == doctest::Approx(0.77863967150613793959).epsilon(1e-14));
  CHECK(std::abs(m.exp_U.imag()) < 1e-16);

  // discrete Gaussian variance; differs from 1/2 by the comb ripple (~1e-3)
  const double frozen[] = {0.49897913083282046176, 0.49897913083282046176, 0.50102108039945371556};
  const double levels[] = {0.0, 1.0, 2.5};
  for (int i = 0; i < 3; ++i) {
    const auto mi = moments(build_cs({levels[i], 0.4}));
    CHECK(mi.var_J == doctest::Approx(frozen[i]).epsilon(1e-13));
    CHECK(mi.var_J == doctest::Approx(static_cast<double>(oracle::var_J(levels[i]))).epsilon(1e-13));
    CHECK(std::abs(mi.var_J - 0.5) <= 1.1e-3);
  }

  CHECK_THROWS_AS(moments(FockStated::zero(-2, 2)), ZeroStateError);
}

TEST_CASE("commutator [J, U] = U on the window interior") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    auto v = random_state(rng, -4, 9).amplitudes();
    v[0] = v[1] = v[7] = v[8] = 0;
    const FockStated psi(-4, v);
    const auto lhs = apply_J(phase_shift(psi, 1)) - phase_shift(apply_J(psi), 1);
    const auto rhs = phase_shift(psi, 1);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-14 * rhs.amplitudes().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("unitarity of e^{ik phi_hat} expectations") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_state(rng, -5, 11);
    for (long k = 1; k <= 3; ++k)
      CHECK(std::abs(inner_product(s, phase_shift(s, k))) / s.squared_norm() <= 1 + 1e-12);
  }
}

TEST_CASE("tail bound stays an upper bound under composed operations") {
  // the same operations on a much wider window give the mass the narrow window misses
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> level(-3, 6);
  std::uniform_int_distribution<int> op(0, 4);
  for (int t = 0; t < 200; ++t) {
    const double lp = level(rng);
    auto s = build_cs({lp, 0.7}, {.padding = 3});
    auto wide = build_cs({lp, 0.7}, {.padding = 30});
    for (int step = 0; step < 4; ++step) {
      const int k = op(rng);
      const auto apply = [k](const FockStated& x) {
        switch (k) {
          case 0: return phase_shift(x, 1);
          case 1: return phase_shift(x, -2);
          case 2: return scale_exp_J(x, 1.0);
          case 3: return scale_exp_J(x, -1.0);
          default: return ladder_X(x);
        }
      };
      s = apply(s);
      wide = apply(wide);
    }
    double outside = 0;
    for (long j = wide.j_lo(); j <= wide.j_hi(); ++j)
      if (j < s.j_lo() || j > s.j_hi()) outside += std::norm(wide[j]);
    CHECK(outside / s.squared_norm() <= s.tail_bound() * (1 + 1e-9));
  }
  CHECK(build_cs({0.4, 0.7}).tail_bound() <= 1e-18);

  // the bound is honest: a narrow window reports a large tail
  const auto narrow = build_cs({0.0, 0.0}, {.padding = 2});
  double outside = 0;
  for (int j = -80; j <= 80; ++j)
    if (j < -2 || j > 2) outside += static_cast<double>(std::norm(oracle::cs_coeff(0, 0, j)));
  CHECK(narrow.tail_bound() >= outside / narrow.squared_norm());
  CHECK(narrow.tail_bound() > 1e-6);
}

TEST_CASE("zero state") {
  const auto z = FockStated::zero(-1, 1);
  CHECK(z.is_zero());
  CHECK(z.tail_bound() == 0);
  CHECK_THROWS_AS(FockStated(0, FockStated::Vector()), std::invalid_argument);
}
