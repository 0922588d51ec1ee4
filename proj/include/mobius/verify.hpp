// Cross-checks between closed forms, the Fock engine and the Poisson dual.
#ifndef MOBIUS_VERIFY_HPP
#define MOBIUS_VERIFY_HPP

#include "mobius/geometry.hpp"
#include "mobius/states.hpp"
#include "mobius/uncertainty.hpp"

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobius {

/// Fidelity threshold for "same state".
inline constexpr double kSameStateTolerance = 1e-12;

struct ResidualEntry {
  double l_prime;
  double phi;
  double residual;    ///< |X|xi> - xi|xi>| / ||xi>|
  double tail_bound;  ///< certified tail of the state the residual was measured on
  bool truncation_warning;
};

ResidualEntry eigenvalue_residual(double l_prime, double phi, const BuildOptions& options = {},
                                  double epsilon_tail = 1e-18);

struct PeriodicityEntry {
  std::string profile;
  std::string state;  ///< state kind, with the chi rule for superpositions
  double l;
  double phi0;
  double period;
  double fidelity;
  bool pass;
};

/// One entry per (phi0, period), in input order.
std::vector<PeriodicityEntry> periodicity_report(const StripConfigd& strip,
                                                 const std::vector<double>& phi0s,
                                                 const std::vector<double>& periods, StateKind kind,
                                                 const ChiRule& chi = {},
                                                 const BuildOptions& options = {});

enum class Quantity { norm, overlap, expect_U, expect_U2, expect_expJ };

Quantity parse_quantity(std::string_view id);  // throws std::invalid_argument
std::string to_string(Quantity q);

struct DiscrepancyParams {
  double l_prime = 0;
  double phi = 0;
  double l_prime2 = 0;  ///< second state, overlap only
  double phi2 = 0;      ///< second state, overlap only
  int lambda = 1;       ///< expect_expJ: <e^{-2 lambda J}>
};

struct DiscrepancyEntry {
  Quantity quantity;
  DiscrepancyParams params;
  std::complex<double> engine_value;
  std::complex<double> closed_normalized;
  std::complex<double> closed_paper_literal;
  double rel_dev_normalized;
  double rel_dev_paper_literal;
  bool unitarity_violation;  ///< paper-literal |<U^k>| > 1 + 1e-9
  bool paper_unreproduced;   ///< paper-literal value differs from the engine
};

DiscrepancyEntry closed_vs_direct(Quantity quantity, const DiscrepancyParams& params,
                                  const BuildOptions& options = {});
DiscrepancyEntry closed_vs_direct(std::string_view quantity, const DiscrepancyParams& params,
                                  const BuildOptions& options = {});

/// |direct - poisson| / |direct|; measured against S(a, Re beta) where the sum
/// cancels to rounding level.
double poisson_check(double a, std::complex<double> beta);

struct PoissonEntry {
  double a;
  std::complex<double> beta;
  double rel_dev;
};

struct VerifyOptions {
  double tolerance = 1e-10;       ///< residual, discrepancy and duality threshold
  std::optional<long> padding;    ///< window padding for every engine state
  unsigned threads = 1;
};

struct VerifyReport {
  std::vector<ResidualEntry> eigenvalue_residuals;
  std::vector<PoissonEntry> poisson_checks;
  std::vector<DiscrepancyEntry> discrepancies;
  std::vector<PeriodicityEntry> periodicity;

  /// Normalized-convention checks only; paper-literal flags are informational.
  bool passed(double tolerance) const;
};

/// The standard grids: residuals over l' in {-1,0,1,2} x phi in {0,1,pi,2pi},
/// the 11x5 duality grid, discrepancies over l' in {-0.5,0,0.69,1,2.5} x
/// phi in {0,1,pi}, and the periodicity claims that must hold.
VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace mobius

#endif  // MOBIUS_VERIFY_HPP
