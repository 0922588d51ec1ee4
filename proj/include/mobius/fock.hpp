// Truncated angular-momentum basis engine.
//
// A FockState holds amplitudes c_j on an inclusive integer window
// [j_lo, j_hi] of the basis |j>, j in Z. Mass outside the window is not
// stored; it is bounded by a list of Gaussian envelopes
//
//   |c_j| <= exp(log_amp - width (j - center)^2)   for j outside the window,
//
// one per coherent branch the state was built from. Every operator below
// maps envelopes to envelopes, so tail_bound() stays certified through
// composed operations.
//
// Operators: J|j> = j|j>, U = e^{i phi_hat} with U|j> = |j+1>, e^{lambda J},
// and the ladder X = e^{i(phi_hat + i J)} acting as X|j> = e^{-(j+1/2)}|j+1>.
#ifndef MOBIUS_FOCK_HPP
#define MOBIUS_FOCK_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mobius {

/// Thrown when a quantity needs a nonzero state (moments, fidelity).
class ZeroStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename Real>
struct GaussianEnvelope {
  Real width = Real(0.5);
  Real center = Real(0);
  Real log_amp = -std::numeric_limits<Real>::infinity();
};

template <typename Real>
class FockState {
 public:
  using Complex = std::complex<Real>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using Envelope = GaussianEnvelope<Real>;

  /// The zero state on the window {0}.
  FockState() : FockState(0, Vector::Zero(1)) {}

  FockState(long j_lo, Vector amps, std::vector<Envelope> envelopes = {})
      : j_lo_(j_lo), amps_(std::move(amps)), envelopes_(std::move(envelopes)) {
    if (amps_.size() == 0) throw std::invalid_argument("FockState: empty window");
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
        throw std::domain_error("FockState: non-finite amplitude");
    }
    squared_norm_ = amps_.squaredNorm();
    tail_bound_ = compute_tail_bound();
  }

  static FockState basis(long j) { return FockState(j, Vector::Constant(1, Complex(1))); }

  /// Explicit zero state on [j_lo, j_hi]; no tail.
  static FockState zero(long j_lo, long j_hi) {
    return FockState(j_lo, Vector::Zero(std::max(1L, j_hi - j_lo + 1)));
  }

  long j_lo() const { return j_lo_; }
  long j_hi() const { return j_lo_ + static_cast<long>(amps_.size()) - 1; }
  Eigen::Index size() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  const std::vector<Envelope>& envelopes() const { return envelopes_; }

  /// Amplitude at j; zero outside the window.
  Complex operator[](long j) const {
    if (j < j_lo_ || j > j_hi()) return Complex(0);
    return amps_[static_cast<Eigen::Index>(j - j_lo_)];
  }

  Real squared_norm() const { return squared_norm_; }
  Real norm() const { return std::sqrt(squared_norm_); }
  bool is_zero() const { return squared_norm_ == Real(0); }

  /// Certified bound on (mass outside the window) / (mass inside).
  Real tail_bound() const { return tail_bound_; }

  friend FockState operator*(Complex s, const FockState& x) {
    std::vector<Envelope> env = x.envelopes_;
    const Real log_s = std::log(std::abs(s));
    for (auto& e : env) e.log_amp += log_s;
    return FockState(x.j_lo_, (s * x.amps_).eval(), std::move(env));
  }
  friend FockState operator*(const FockState& x, Complex s) { return s * x; }

  friend FockState operator+(const FockState& x, const FockState& y) { return combine(x, y, Real(1)); }
  friend FockState operator-(const FockState& x, const FockState& y) { return combine(x, y, Real(-1)); }

 private:
  static FockState combine(const FockState& x, const FockState& y, Real sign) {
    const long lo = std::min(x.j_lo(), y.j_lo());
    const long hi = std::max(x.j_hi(), y.j_hi());
    Vector out = Vector::Zero(hi - lo + 1);
    out.segment(x.j_lo() - lo, x.size()) += x.amps_;
    out.segment(y.j_lo() - lo, y.size()) += sign * y.amps_;
    std::vector<Envelope> env = x.envelopes_;
    env.insert(env.end(), y.envelopes_.begin(), y.envelopes_.end());
    return FockState(lo, std::move(out), std::move(env));
  }

  // Minkowski sum of per-envelope tail norms, relative to the in-window norm.
  Real compute_tail_bound() const {
    using std::exp;
    using std::log;
    if (envelopes_.empty()) return Real(0);
    std::vector<Real> log_norms;
    for (const auto& e : envelopes_) {
      if (e.log_amp == -std::numeric_limits<Real>::infinity()) continue;
      // sum over one side of exp(-2 w (j - c)^2), nearest index at distance d
      const Real w2 = Real(2) * e.width;
      const Real full_line = std::sqrt(std::numbers::pi_v<Real> / w2) + Real(1);
      auto side = [&](Real d) {
        if (d <= Real(0)) return full_line;
        const Real geometric = Real(1) - exp(-Real(2) * w2 * d);
        if (geometric <= Real(0)) return full_line;
        return std::min(exp(-w2 * d * d) / geometric, full_line);
      };
      const Real mass = side(Real(j_hi() + 1) - e.center) + side(e.center - Real(j_lo_ - 1));
      log_norms.push_back(e.log_amp + Real(0.5) * log(mass));
    }
    if (log_norms.empty()) return Real(0);
    const Real peak = *std::max_element(log_norms.begin(), log_norms.end());
    Real acc = 0;
    for (Real v : log_norms) acc += exp(v - peak);
    const Real log_tail_norm = peak + log(acc);
    if (squared_norm_ == Real(0)) return std::numeric_limits<Real>::infinity();
    return exp(Real(2) * log_tail_norm - log(squared_norm_));
  }

  long j_lo_;
  Vector amps_;
  std::vector<Envelope> envelopes_;
  Real squared_norm_ = 0;
  Real tail_bound_ = 0;
};

/// <a|b>, conjugate-linear in a; zero outside the window intersection.
template <typename Real>
std::complex<Real> inner_product(const FockState<Real>& a, const FockState<Real>& b) {
  const long lo = std::max(a.j_lo(), b.j_lo());
  const long hi = std::min(a.j_hi(), b.j_hi());
  if (lo > hi) return {};
  const Eigen::Index n = hi - lo + 1;
  return a.amplitudes().segment(lo - a.j_lo(), n).dot(b.amplitudes().segment(lo - b.j_lo(), n));
}

/// U^k: (U^k psi)_j = psi_{j-k}. The window moves with the state, so no mass is dropped.
template <typename Real>
FockState<Real> phase_shift(const FockState<Real>& state, long k) {
  auto env = state.envelopes();
  for (auto& e : env) e.center += Real(k);
  return FockState<Real>(state.j_lo() + k, state.amplitudes(), std::move(env));
}

/// J|psi>.
template <typename Real>
FockState<Real> apply_J(const FockState<Real>& state) {
  typename FockState<Real>::Vector out = state.amplitudes();
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= Real(state.j_lo() + i);
  auto env = state.envelopes();
  // |j| e^{-w x^2} <= (|c| + |x|) e^{-w x^2} <= (|c| + 1/sqrt(e w)) e^{-(w/2) x^2},  x = j - c
  for (auto& e : env) {
    e.log_amp += std::log(std::abs(e.center) + Real(1) / std::sqrt(std::numbers::e_v<Real> * e.width));
    e.width /= Real(2);
  }
  return FockState<Real>(state.j_lo(), std::move(out), std::move(env));
}

namespace detail {
// c * exp(log_factor), without forming exp(log_factor) on its own.
template <typename Real>
std::complex<Real> scale_log(std::complex<Real> c, Real log_factor) {
  if (c == std::complex<Real>(0)) return c;
  if (std::abs(log_factor) < Real(600)) return c * std::exp(log_factor);
  return std::polar(std::exp(std::log(std::abs(c)) + log_factor), std::arg(c));
}
}  // namespace detail

/// e^{lambda J}: c_j -> e^{lambda j} c_j, evaluated in the log domain.
template <typename Real>
FockState<Real> scale_exp_J(const FockState<Real>& state, Real lambda) {
  typename FockState<Real>::Vector out(state.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = detail::scale_log(state.amplitudes()[i], lambda * Real(state.j_lo() + i));
  auto env = state.envelopes();
  // -w (j-c)^2 + lambda j = -w (j - c - lambda/2w)^2 + lambda c + lambda^2/4w
  for (auto& e : env) {
    e.log_amp += lambda * e.center + lambda * lambda / (Real(4) * e.width);
    e.center += lambda / (Real(2) * e.width);
  }
  return FockState<Real>(state.j_lo(), std::move(out), std::move(env));
}

/// X|j> = e^{-(j+1/2)} |j+1>.
template <typename Real>
FockState<Real> ladder_X(const FockState<Real>& state) {
  typename FockState<Real>::Vector out(state.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = detail::scale_log(state.amplitudes()[i], -(Real(state.j_lo() + i) + Real(0.5)));
  auto env = state.envelopes();
  // -w (m-1-c)^2 - (m - 1/2) = -w (m - c')^2 - (c + 1) + 1/4w + 1/2,  c' = c + 1 - 1/2w
  for (auto& e : env) {
    const Real inv = Real(1) / (Real(2) * e.width);
    e.log_amp += -(e.center + Real(1)) + inv / Real(2) + Real(0.5);
    e.center += Real(1) - inv;
  }
  return FockState<Real>(state.j_lo() + 1, std::move(out), std::move(env));
}

template <typename Real>
struct MomentSet {
  Real mean_J = 0;
  Real mean_J2 = 0;
  Real var_J = 0;
  std::complex<Real> exp_U;   ///< <e^{i phi_hat}>
  std::complex<Real> exp_U2;  ///< <e^{2 i phi_hat}>
  Real exp_expJ_plus = 0;     ///< <e^{2J}>
  Real exp_expJ_minus = 0;    ///< <e^{-2J}>
};

/// Normalized expectations. var_J is accumulated about the mean.
template <typename Real>
MomentSet<Real> moments(const FockState<Real>& state) {
  using std::exp;
  using std::log;
  if (state.is_zero()) throw ZeroStateError("moments: zero state has no expectation values");
  const auto& c = state.amplitudes();
  const Eigen::Index n = c.size();
  const Real norm2 = state.squared_norm();
  const Eigen::Matrix<Real, Eigen::Dynamic, 1> w = c.cwiseAbs2() / norm2;

  MomentSet<Real> m;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real j = Real(state.j_lo() + i);
    m.mean_J += j * w[i];
    m.mean_J2 += j * j * w[i];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real d = Real(state.j_lo() + i) - m.mean_J;
    m.var_J += d * d * w[i];
  }
  if (n > 1) m.exp_U = c.tail(n - 1).dot(c.head(n - 1)) / norm2;
  if (n > 2) m.exp_U2 = c.tail(n - 2).dot(c.head(n - 2)) / norm2;

  // <e^{+-2J}> = sum_j e^{+-2j} w_j, log-sum-exp over nonzero weights
  auto log_weighted = [&](Real sign) {
    Real peak = -std::numeric_limits<Real>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      if (w[i] > 0) peak = std::max(peak, log(w[i]) + sign * Real(2) * Real(state.j_lo() + i));
    Real acc = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (w[i] > 0) acc += exp(log(w[i]) + sign * Real(2) * Real(state.j_lo() + i) - peak);
    return exp(peak + log(acc));
  };
  m.exp_expJ_plus = log_weighted(Real(1));
  m.exp_expJ_minus = log_weighted(Real(-1));
  return m;
}

using FockStated = FockState<double>;
using MomentSetd = MomentSet<double>;

}  // namespace mobius

#endif  // MOBIUS_FOCK_HPP
