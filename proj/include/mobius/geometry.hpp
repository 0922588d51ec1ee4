// Möbius strip embedding, radial profiles and the effective level l'.
//
// The strip is obtained from a unit torus by tying the polar angle to the
// azimuth, theta = (phi + pi) / 2. A point at azimuth phi and radial offset r
// sits at
//
//   X = cos(phi) + r cos(phi/2) cos(phi)
//   Y = sin(phi) + r cos(phi/2) sin(phi)
//   Z = l + r sin(phi/2)
//
// and closes on itself only after phi advances by 4 pi. Angles are never
// reduced modulo 2 pi anywhere in this header.
#ifndef MOBIUS_GEOMETRY_HPP
#define MOBIUS_GEOMETRY_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobius {

enum class ProfileKind { constant, sin_squared, cos_squared };

template <typename Scalar>
class RadialProfile {
 public:
  static RadialProfile constant(Scalar r0) {
    if (!(r0 >= Scalar(0) && r0 < Scalar(1)))
      throw std::domain_error("radial profile: constant r must satisfy 0 <= r < 1");
    return RadialProfile(ProfileKind::constant, r0);
  }
  /// r(phi) = sin^2(phi) / 2
  static RadialProfile sin_squared() { return RadialProfile(ProfileKind::sin_squared, Scalar(0)); }
  /// r(phi) = cos^2(phi) / 2
  static RadialProfile cos_squared() { return RadialProfile(ProfileKind::cos_squared, Scalar(0)); }

  /// Accepts "const:<v>", "sin2" or "cos2".
  static RadialProfile parse(std::string_view text) {
    if (text == "sin2") return sin_squared();
    if (text == "cos2") return cos_squared();
    constexpr std::string_view prefix = "const:";
    if (text.substr(0, prefix.size()) == prefix) {
      const std::string value(text.substr(prefix.size()));
      std::size_t used = 0;
      double r0 = 0;
      try {
        r0 = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size())
        throw std::invalid_argument("radial profile: bad constant '" + value + "'");
      return constant(static_cast<Scalar>(r0));
    }
    throw std::invalid_argument("radial profile: expected const:<v>, sin2 or cos2, got '" +
                                std::string(text) + "'");
  }

  ProfileKind kind() const { return kind_; }
  Scalar constant_value() const { return r0_; }

  Scalar operator()(Scalar phi) const {
    using std::cos;
    using std::sin;
    switch (kind_) {
      case ProfileKind::sin_squared: {
        const Scalar s = sin(phi);
        return s * s / Scalar(2);
      }
      case ProfileKind::cos_squared: {
        const Scalar c = cos(phi);
        return c * c / Scalar(2);
      }
      case ProfileKind::constant:
        break;
    }
    return r0_;
  }

  /// Inverse of parse(); constants print with 17 significant digits.
  std::string id() const {
    switch (kind_) {
      case ProfileKind::sin_squared:
        return "sin2";
      case ProfileKind::cos_squared:
        return "cos2";
      case ProfileKind::constant:
        break;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "const:%.17g", static_cast<double>(r0_));
    return buf;
  }

 private:
  RadialProfile(ProfileKind kind, Scalar r0) : kind_(kind), r0_(r0) {}

  ProfileKind kind_;
  Scalar r0_;
};

template <typename Scalar>
Scalar radial_profile_eval(const RadialProfile<Scalar>& profile, Scalar phi) {
  return profile(phi);
}

/// Axial offset and radial profile of a strip. The major radius is fixed at 1.
template <typename Scalar>
struct StripConfig {
  static constexpr Scalar R = Scalar(1);

  Scalar l = Scalar(0);
  RadialProfile<Scalar> profile = RadialProfile<Scalar>::constant(Scalar(0));
};

template <typename Scalar>
struct StripPoint {
  Scalar x, y, z;
  Scalar phi;
  Scalar r;
  Scalar l_prime;

  Eigen::Matrix<Scalar, 3, 1> position() const { return {x, y, z}; }
};

/// Polar angle of the parent torus that the strip constraint ties to phi.
template <typename Scalar>
Scalar torus_constraint(Scalar phi) {
  return (phi + std::numbers::pi_v<Scalar>) / Scalar(2);
}

namespace detail {
template <typename Scalar>
void require_radius(Scalar r) {
  if (!(r >= Scalar(0) && r < Scalar(1)))
    throw std::domain_error("strip radius must satisfy 0 <= r < 1");
}
}  // namespace detail

/// l' = l + r sin(phi/2) - ln(1 + r cos(phi/2)).
template <typename Scalar>
Scalar effective_level(Scalar phi, Scalar r, Scalar l) {
  using std::cos;
  using std::log1p;
  using std::sin;
  detail::require_radius(r);
  const Scalar half = phi / Scalar(2);
  return l + r * sin(half) - log1p(r * cos(half));
}

template <typename Scalar>
Scalar effective_level(const StripConfig<Scalar>& config, Scalar phi) {
  return effective_level(phi, config.profile(phi), config.l);
}

template <typename Scalar>
StripPoint<Scalar> embed_point(Scalar phi, Scalar r, Scalar l) {
  using std::cos;
  using std::sin;
  detail::require_radius(r);
  const Scalar half = phi / Scalar(2);
  const Scalar ring = Scalar(1) + r * cos(half);
  return StripPoint<Scalar>{ring * cos(phi), ring * sin(phi), l + r * sin(half),
                            phi,             r,              effective_level(phi, r, l)};
}

template <typename Scalar>
StripPoint<Scalar> embed_point(const StripConfig<Scalar>& config, Scalar phi) {
  return embed_point(phi, config.profile(phi), config.l);
}

/// n points at uniform spacing in phi, both endpoints included.
template <typename Scalar>
std::vector<Scalar> uniform_grid(Scalar lo, Scalar hi, long n) {
  if (n < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("uniform grid needs lo < hi");
  std::vector<Scalar> grid(static_cast<std::size_t>(n));
  const Scalar step = (hi - lo) / Scalar(n - 1);
  for (long i = 0; i + 1 < n; ++i) grid[static_cast<std::size_t>(i)] = lo + Scalar(i) * step;
  grid.back() = hi;
  return grid;
}

template <typename Scalar>
std::vector<StripPoint<Scalar>> sample_trajectory(const StripConfig<Scalar>& config,
                                                  Scalar phi_min, Scalar phi_max, long n) {
  std::vector<StripPoint<Scalar>> points;
  points.reserve(static_cast<std::size_t>(n > 0 ? n : 0));
  for (Scalar phi : uniform_grid(phi_min, phi_max, n)) points.push_back(embed_point(config, phi));
  return points;
}

using RadialProfiled = RadialProfile<double>;
using StripConfigd = StripConfig<double>;
using StripPointd = StripPoint<double>;

}  // namespace mobius

#endif  // MOBIUS_GEOMETRY_HPP
