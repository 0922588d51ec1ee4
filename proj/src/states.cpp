#include "mobius/states.hpp"

#include "mobius/latticesum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mobius {

namespace {

constexpr long kMinPadding = 8;

// Branch cancellation below this relative level is treated as exact.
constexpr double kCancellation = 64 * std::numeric_limits<double>::epsilon();

GaussSumResult<double> lattice_sum(std::complex<double> beta) {
  return gauss_sum_direct(1.0, beta);
}

}  // namespace

void CSParams::validate() const {
  if (!std::isfinite(l_prime)) throw std::invalid_argument("CSParams: l' must be finite");
  if (!std::isfinite(phi)) throw std::invalid_argument("CSParams: phi must be finite");
  if (!(epsilon_tail > 0 && epsilon_tail <= 1e-6))
    throw std::invalid_argument("CSParams: epsilon_tail must lie in (0, 1e-6]");
}

std::complex<double> CSParams::xi() const { return std::polar(std::exp(-l_prime), phi); }

std::pair<long, long> default_window(const CSParams& p, std::optional<long> padding) {
  long pad = 0;
  if (padding) {
    if (*padding < 0) throw std::invalid_argument("window padding must be non-negative");
    pad = *padding;
  } else {
    // |c_j| / peak ~ exp(-(j - l')^2 / 2), so the relative tail mass beyond
    // distance d is ~ exp(-d^2).
    const long needed = static_cast<long>(std::ceil(std::sqrt(std::log(1.0 / p.epsilon_tail)))) + 2;
    pad = std::max(kMinPadding, needed);
  }
  return {static_cast<long>(std::floor(p.l_prime)) - pad, static_cast<long>(std::ceil(p.l_prime)) + pad};
}

FockStated build_cs(const CSParams& p, const BuildOptions& options) {
  p.validate();
  const auto [lo, hi] = default_window(p, options.padding);

  // log|c_j| = l' j - j^2/2 = l'^2/2 - (j - l')^2/2
  const double peak_log = p.l_prime * p.l_prime / 2;
  double shift = 0;
  if (options.unit_peak) {
    shift = -std::numeric_limits<double>::infinity();
    for (long j = lo; j <= hi; ++j)
      shift = std::max(shift, p.l_prime * double(j) - double(j) * double(j) / 2);
  }

  FockStated::Vector amps(hi - lo + 1);
  for (long j = lo; j <= hi; ++j) {
    const double jd = double(j);
    amps[j - lo] = std::polar(std::exp(p.l_prime * jd - jd * jd / 2 - shift), -p.phi * jd);
  }
  return FockStated(lo, std::move(amps), {GaussianEnvelope<double>{0.5, p.l_prime, peak_log - shift}});
}

double norm_closed(double l_prime) { return lattice_sum({2 * l_prime, 0}).value().real(); }

double log_norm_closed(double l_prime) { return lattice_sum({2 * l_prime, 0}).log_abs(); }

std::complex<double> overlap_closed(const CSParams& p1, const CSParams& p2) {
  return lattice_sum({p1.l_prime + p2.l_prime, p1.phi - p2.phi}).value();
}

std::complex<double> overlap_paper_literal(const CSParams& p1, const CSParams& p2) {
  return std::polar(1.0, -(p1.phi - p2.phi)) * lattice_sum({p1.l_prime + p2.l_prime, 0}).value();
}

double fidelity(const FockStated& a, const FockStated& b) {
  if (a.is_zero() || b.is_zero()) throw ZeroStateError("fidelity: zero state");
  // Normalize first so the product of norms cannot overflow.
  const std::complex<double> overlap = inner_product(a, b) / (a.norm() * b.norm());
  return std::norm(overlap);
}

FockStated build_scs(const SCSpec& spec, const BuildOptions& options) {
  if (!std::isfinite(spec.chi)) throw std::invalid_argument("SCSpec: chi must be finite");
  const CSParams& p = spec.base;
  const FockStated first = build_cs(p, options);

  CSParams other = p;
  std::complex<double> weight;
  switch (spec.kind) {
    case SCSKind::opposite_angle:
      other.phi = -p.phi;
      weight = std::polar(1.0, -spec.chi);
      break;
    case SCSKind::opposite_xi:
      other.phi = p.phi + std::numbers::pi;
      weight = std::polar(1.0, spec.chi);
      break;
    case SCSKind::opposite_xi_minus:
      other.phi = p.phi + std::numbers::pi;
      weight = -std::polar(1.0, spec.chi);
      break;
  }
  const FockStated second = build_cs(other, options);
  FockStated sum = first + weight * second;

  const double scale = first.norm() + second.norm();
  if (sum.norm() <= kCancellation * scale) return FockStated::zero(sum.j_lo(), sum.j_hi());
  return sum;
}

std::pair<FockStated, FockStated> parity_split(const FockStated& state) {
  FockStated::Vector even = state.amplitudes();
  FockStated::Vector odd = state.amplitudes();
  for (Eigen::Index i = 0; i < even.size(); ++i) {
    const long j = state.j_lo() + static_cast<long>(i);
    if (j % 2 == 0)
      odd[i] = 0;
    else
      even[i] = 0;
  }
  return {FockStated(state.j_lo(), std::move(even), state.envelopes()),
          FockStated(state.j_lo(), std::move(odd), state.envelopes())};
}

SCSpec minus_partner(SCSpec spec) {
  if (spec.kind != SCSKind::opposite_xi)
    throw std::invalid_argument("minus_partner: spec must be opposite_xi");
  spec.kind = SCSKind::opposite_xi_minus;
  return spec;
}

std::pair<FockStated, std::complex<double>> ladder_on_scs(const SCSpec& spec,
                                                         const BuildOptions& options) {
  if (spec.kind != SCSKind::opposite_xi)
    throw std::invalid_argument("ladder_on_scs: spec must be opposite_xi");
  return {ladder_X(build_scs(spec, options)), spec.base.xi()};
}

StateKind parse_state_kind(std::string_view text) {
  if (text == "cs") return StateKind::cs;
  if (text == "scs-angle") return StateKind::scs_angle;
  if (text == "scs-xi") return StateKind::scs_xi;
  if (text == "scs-xi-minus") return StateKind::scs_xi_minus;
  throw std::invalid_argument("unknown state kind '" + std::string(text) + "'");
}

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::cs:
      return "cs";
    case StateKind::scs_angle:
      return "scs-angle";
    case StateKind::scs_xi:
      return "scs-xi";
    case StateKind::scs_xi_minus:
      return "scs-xi-minus";
  }
  return "cs";
}

ChiRule ChiRule::parse(std::string_view text) {
  if (text == "phi") return ChiRule{true, 0};
  const std::string s(text);
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(value))
    throw std::invalid_argument("chi must be a number of radians or 'phi', got '" + s + "'");
  return ChiRule{false, value};
}

FockStated build_state(double l_prime, double phi, StateKind kind, const ChiRule& chi,
                       const BuildOptions& options) {
  const CSParams base{l_prime, phi};
  switch (kind) {
    case StateKind::cs:
      return build_cs(base, options);
    case StateKind::scs_angle:
      return build_scs({SCSKind::opposite_angle, base, chi.at(phi)}, options);
    case StateKind::scs_xi:
      return build_scs({SCSKind::opposite_xi, base, chi.at(phi)}, options);
    case StateKind::scs_xi_minus:
      return build_scs({SCSKind::opposite_xi_minus, base, chi.at(phi)}, options);
  }
  return build_cs(base, options);
}

FockStated build_strip_state(const StripConfigd& strip, StateKind kind, const ChiRule& chi,
                             double phi, const BuildOptions& options) {
  return build_state(effective_level(strip, phi), phi, kind, chi, options);
}

}  // namespace mobius
