// Coherent states on the Möbius strip and their two-branch superpositions.
//
// A coherent state is labelled by the effective level l' and the strip angle
// phi; in the angular-momentum basis
//
//   |l', phi> = sum_j exp((l' - i phi) j) exp(-j^2 / 2) |j>,
//
// an eigenstate of X with eigenvalue xi = exp(-l' + i phi). The state |-xi>
// is |l', phi + pi>. Superpositions are left unnormalized.
#ifndef MOBIUS_STATES_HPP
#define MOBIUS_STATES_HPP

#include "mobius/fock.hpp"
#include "mobius/geometry.hpp"

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace mobius {

struct CSParams {
  double l_prime = 0;
  double phi = 0;
  double epsilon_tail = 1e-18;

  /// Throws std::invalid_argument unless l' is finite and epsilon_tail is in (0, 1e-6].
  void validate() const;
  /// xi = exp(-l' + i phi)
  std::complex<double> xi() const;
};

enum class SCSKind { opposite_angle, opposite_xi, opposite_xi_minus };

/// Two-branch superposition. chi is the relative phase of the second branch.
///   opposite_angle    : |l', phi> + e^{-i chi} |l', -phi>
///   opposite_xi       : |xi> + e^{i chi} |-xi>
///   opposite_xi_minus : |xi> - e^{i chi} |-xi>
struct SCSpec {
  SCSKind kind = SCSKind::opposite_xi;
  CSParams base;
  double chi = 0;
};

struct BuildOptions {
  /// Half-padding of the window around l'; by default chosen from epsilon_tail (at least 8).
  std::optional<long> padding;
  /// Scale amplitudes so the largest has modulus 1 (same ray; avoids overflow at large l').
  bool unit_peak = false;
};

/// Default window [floor(l') - pad, ceil(l') + pad].
std::pair<long, long> default_window(const CSParams& p, std::optional<long> padding = {});

FockStated build_cs(const CSParams& p, const BuildOptions& options = {});

/// S(1, 2 l') = <l', phi | l', phi>.
double norm_closed(double l_prime);
/// log S(1, 2 l'); finite for any level.
double log_norm_closed(double l_prime);

/// <p1|p2> = S(1, l'1 + l'2 + i (phi1 - phi2)).
std::complex<double> overlap_closed(const CSParams& p1, const CSParams& p2);

/// The literal projection formula, with a j-independent phase:
/// exp(-i (phi1 - phi2)) S(1, l'1 + l'2). Kept for discrepancy reporting only.
std::complex<double> overlap_paper_literal(const CSParams& p1, const CSParams& p2);

/// |<a|b>|^2 / (|a|^2 |b|^2). Throws ZeroStateError if either state is zero.
double fidelity(const FockStated& a, const FockStated& b);

/// Exact branch cancellation yields FockStated::zero on the branch window.
FockStated build_scs(const SCSpec& spec, const BuildOptions& options = {});

/// (even-j part, odd-j part)
std::pair<FockStated, FockStated> parity_split(const FockStated& state);

/// (X|psi_C>, xi) for an opposite_xi spec. X|psi_C> should equal xi |psi_C^->.
std::pair<FockStated, std::complex<double>> ladder_on_scs(const SCSpec& spec,
                                                         const BuildOptions& options = {});

/// The same spec with opposite_xi replaced by opposite_xi_minus.
SCSpec minus_partner(SCSpec spec);

enum class StateKind { cs, scs_angle, scs_xi, scs_xi_minus };

StateKind parse_state_kind(std::string_view text);
std::string to_string(StateKind kind);

/// Relative SCS phase: a fixed value, or tied to the strip angle (chi = phi).
struct ChiRule {
  bool tied_to_phi = false;
  double value = 0;

  double at(double phi) const { return tied_to_phi ? phi : value; }
  static ChiRule parse(std::string_view text);
};

/// State of the given kind at strip angle phi, with l' = l'(phi) from the strip.
FockStated build_strip_state(const StripConfigd& strip, StateKind kind, const ChiRule& chi,
                             double phi, const BuildOptions& options = {});

/// Same, at an explicit (l', phi).
FockStated build_state(double l_prime, double phi, StateKind kind, const ChiRule& chi,
                       const BuildOptions& options = {});

}  // namespace mobius

#endif  // MOBIUS_STATES_HPP
