// Command-line front end: trajectory, sweep, periodicity and verify.
//
// Every flag can also be given as a `key=value` line in the file named by
// --config (keys are the flag names without dashes); flags on the command
// line win. Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
#ifndef MOBIUS_CLI_HPP
#define MOBIUS_CLI_HPP

#include "mobius/geometry.hpp"
#include "mobius/states.hpp"
#include "mobius/uncertainty.hpp"

#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobius::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { trajectory, sweep, periodicity, verify };
enum class OutputFormat { csv, json };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::trajectory;
  StripConfigd strip;
  double phi_min = 0;
  double phi_max = 4 * std::numbers::pi;
  long steps = 101;
  std::vector<double> lp_override;  ///< sweep: fixed levels instead of l'(phi)
  Convention convention = Convention::normalized;
  StateKind state = StateKind::cs;
  ChiRule chi;
  std::vector<double> periods{2 * std::numbers::pi, 4 * std::numbers::pi};
  std::optional<double> tol;
  std::optional<long> padding;
  std::optional<OutputFormat> format;
  std::string output;  ///< empty: standard output
  unsigned threads = 1;
  bool help = false;
};

/// "1.5", "pi", "4pi", "-pi/2", "0.5pi" -> radians.
double parse_angle(std::string_view text);
/// Comma-separated angles.
std::vector<double> parse_angle_list(std::string_view text);

/// Throws UsageError on malformed input. Sets `help` and the usage text
/// when --help is given.
RunConfig parse_run_config(int argc, const char* const* argv, std::string* usage = nullptr);

/// 17 significant digits.
std::string format_real(double value);

void write_trajectory(const RunConfig& cfg, std::ostream& out);
void write_sweep(const RunConfig& cfg, std::ostream& out);
void write_periodicity(const RunConfig& cfg, std::ostream& out);
/// Returns true when every normalized-convention check passes.
bool write_verify(const RunConfig& cfg, std::ostream& out);

/// Runs one command; output goes to cfg.output or `out`. Returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

/// Parse and run. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace mobius::cli

#endif  // MOBIUS_CLI_HPP
