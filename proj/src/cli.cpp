#include "mobius/cli.hpp"

#include "mobius/detail/parallel.hpp"
#include "mobius/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace mobius::cli {

namespace {

using nlohmann::json;

const std::vector<std::pair<std::string, std::string>> kOptions{
    {"command", "trajectory | sweep | periodicity | verify"},
    {"l", "axial offset of the strip"},
    {"profile", "radial profile: const:<r> | sin2 | cos2"},
    {"phi-min", "start of the phi range (radians; accepts e.g. 2pi)"},
    {"phi-max", "end of the phi range (radians; accepts e.g. 4pi)"},
    {"steps", "number of phi samples"},
    {"lp", "sweep: comma-separated l' values overriding the strip geometry"},
    {"convention", "normalized | paper"},
    {"state", "cs | scs-angle | scs-xi | scs-xi-minus"},
    {"chi", "superposition phase in radians, or 'phi' to tie it to the strip angle"},
    {"period", "periodicity: comma-separated periods, e.g. 2pi,4pi"},
    {"tol", "relative tolerance override"},
    {"format", "csv | json"},
    {"output", "output path (default: standard output)"},
    {"threads", "worker threads (0: hardware concurrency)"},
    {"padding", "window half-padding for engine states"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value))
    throw UsageError("--" + key + ": expected a number, got '" + text + "'");
  return value;
}

long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw UsageError("--" + key + ": expected an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    std::string key = trim(content.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    std::string value = trim(content.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    bool known = false;
    for (const auto& [name, help] : kOptions) known = known || name == key;
    if (!known) throw UsageError(path + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    values[key] = value;
  }
  return values;
}

RunConfig to_run_config(const std::map<std::string, std::string>& values) {
  RunConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  const std::string* command = get("command");
  if (!command) throw UsageError("--command is required");
  if (*command == "trajectory")
    cfg.command = Command::trajectory;
  else if (*command == "sweep")
    cfg.command = Command::sweep;
  else if (*command == "periodicity")
    cfg.command = Command::periodicity;
  else if (*command == "verify")
    cfg.command = Command::verify;
  else
    throw UsageError("--command: unknown command '" + *command + "'");

  try {
    if (auto v = get("l")) cfg.strip.l = parse_real("l", *v);
    if (auto v = get("profile")) cfg.strip.profile = RadialProfiled::parse(*v);
    if (auto v = get("phi-min")) cfg.phi_min = parse_angle(*v);
    if (auto v = get("phi-max")) cfg.phi_max = parse_angle(*v);
    if (auto v = get("lp"))
      for (const auto& part : split_commas(*v)) cfg.lp_override.push_back(parse_real("lp", part));
    if (auto v = get("convention")) cfg.convention = parse_convention(*v);
    if (auto v = get("state")) cfg.state = parse_state_kind(*v);
    if (auto v = get("chi")) cfg.chi = ChiRule::parse(*v);
    if (auto v = get("period")) cfg.periods = parse_angle_list(*v);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (auto v = get("steps")) cfg.steps = parse_integer("steps", *v);
  if (cfg.steps < 1) throw UsageError("--steps must be positive");
  if (!(cfg.phi_min <= cfg.phi_max)) throw UsageError("--phi-min must not exceed --phi-max");
  if (auto v = get("tol")) {
    cfg.tol = parse_real("tol", *v);
    if (!(*cfg.tol > 0)) throw UsageError("--tol must be positive");
  }
  if (auto v = get("padding")) {
    cfg.padding = parse_integer("padding", *v);
    if (*cfg.padding < 0) throw UsageError("--padding must be non-negative");
  }
  if (auto v = get("format")) {
    if (*v == "csv")
      cfg.format = OutputFormat::csv;
    else if (*v == "json")
      cfg.format = OutputFormat::json;
    else
      throw UsageError("--format must be csv or json");
  }
  if (auto v = get("output")) cfg.output = *v;
  if (auto v = get("threads")) {
    const long t = parse_integer("threads", *v);
    if (t < 0) throw UsageError("--threads must be non-negative");
    cfg.threads = t == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<unsigned>(t);
  }
  if (cfg.command == Command::verify && cfg.format == OutputFormat::csv)
    throw UsageError("verify writes a JSON report; --format csv is not supported");
  return cfg;
}

OutputFormat format_of(const RunConfig& cfg) { return cfg.format.value_or(OutputFormat::csv); }

std::vector<double> phi_samples(const RunConfig& cfg) {
  if (cfg.steps == 1) return {cfg.phi_min};
  return uniform_grid(cfg.phi_min, cfg.phi_max, cfg.steps);
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void write_csv_rows(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_real(row[k]);
    }
    out << '\n';
  }
}

void write_json_rows(std::ostream& out, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  json array = json::array();
  for (const auto& row : rows) {
    json object = json::object();
    for (std::size_t k = 0; k < columns.size(); ++k) object[columns[k]] = row[k];
    array.push_back(std::move(object));
  }
  out << array.dump(2) << '\n';
}

}  // namespace

double parse_angle(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw UsageError("empty angle");
  std::string number = text;
  double divisor = 1;
  const auto slash = number.find('/');
  if (slash != std::string::npos) {
    divisor = parse_real("angle", number.substr(slash + 1));
    if (divisor == 0) throw UsageError("angle: division by zero in '" + text + "'");
    number = number.substr(0, slash);
  }
  double factor = 1;
  if (number.size() >= 2 && number.compare(number.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    number = number.substr(0, number.size() - 2);
    if (number.empty() || number == "+") number = "1";
    if (number == "-") number = "-1";
    if (!number.empty() && number.back() == '*') number.pop_back();
  }
  return parse_real("angle", number) * factor / divisor;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& part : split_commas(text)) out.push_back(parse_angle(part));
  return out;
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig parse_run_config(int argc, const char* const* argv, std::string* usage) {
  CLI::App app{"Coherent states on a Möbius strip: trajectories, uncertainty sweeps, "
               "periodicity and verification reports",
               "mobius_cli"};
  std::map<std::string, std::string> from_flags;
  std::vector<CLI::Option*> options;
  for (const auto& [name, help] : kOptions) options.push_back(app.add_option("--" + name, from_flags[name], help));
  std::string config_path;
  app.add_option("--config", config_path, "key=value file with defaults for any flag");

  RunConfig cfg;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (usage) *usage = app.help();
    cfg.help = true;
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::map<std::string, std::string> values;
  if (!config_path.empty()) values = read_config_file(config_path);
  for (std::size_t i = 0; i < kOptions.size(); ++i)
    if (options[i]->count() > 0) values[kOptions[i].first] = from_flags[kOptions[i].first];
  return to_run_config(values);
}

void write_trajectory(const RunConfig& cfg, std::ostream& out) {
  const auto points = sample_trajectory(cfg.strip, cfg.phi_min, cfg.phi_max, cfg.steps);
  std::vector<std::vector<double>> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back({p.phi, p.x, p.y, p.z, p.r, p.l_prime});
  const std::vector<std::string> columns{"phi", "x", "y", "z", "r", "l_prime"};
  if (format_of(cfg) == OutputFormat::json) return write_json_rows(out, columns, rows);
  out << "# mobius_cli " << kVersion << " trajectory\n";
  out << "# profile=" << cfg.strip.profile.id() << " l=" << format_real(cfg.strip.l) << '\n';
  out << "phi,x,y,z,r,l_prime\n";
  write_csv_rows(out, rows);
}

void write_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> phis = phi_samples(cfg);
  struct Point {
    double phi;
    double l_prime;
  };
  std::vector<Point> points;
  if (cfg.lp_override.empty()) {
    for (double phi : phis) points.push_back({phi, effective_level(cfg.strip, phi)});
  } else {
    for (double lp : cfg.lp_override)
      for (double phi : phis) points.push_back({phi, lp});
  }

  std::vector<std::vector<double>> rows(points.size());
  detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const auto [phi, lp] = points[i];
    const double d2j = delta2_J(lp, cfg.convention);
    const double d2phi = delta2_phi(lp, cfg.convention);
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double rhs = lhs;
    const FockStated state = build_state(lp, phi, cfg.state, cfg.chi, {cfg.padding, true});
    if (!state.is_zero()) {
      const HeisenbergCheck h = heisenberg_check(state);
      lhs = h.lhs;
      rhs = h.rhs;
    }
    rows[i] = {phi, lp, d2j, d2phi, d2j + d2phi, lhs, rhs};
  });

  const std::vector<std::string> columns{"phi", "l_prime", "d2J", "d2phi", "sum", "heis_lhs", "heis_rhs"};
  if (format_of(cfg) == OutputFormat::json) return write_json_rows(out, columns, rows);
  out << "# mobius_cli " << kVersion << " sweep\n";
  out << "# convention=" << to_string(cfg.convention) << '\n';
  out << "# state=" << to_string(cfg.state)
      << " chi=" << (cfg.chi.tied_to_phi ? std::string("phi") : format_real(cfg.chi.value)) << '\n';
  out << "phi,l_prime,d2J,d2phi,sum,heis_lhs,heis_rhs\n";
  write_csv_rows(out, rows);
}

void write_periodicity(const RunConfig& cfg, std::ostream& out) {
  const double tol = cfg.tol.value_or(kSameStateTolerance);
  auto entries = periodicity_report(cfg.strip, phi_samples(cfg), cfg.periods, cfg.state, cfg.chi,
                                    {cfg.padding, false});
  for (auto& e : entries) e.pass = std::abs(e.fidelity - 1) <= tol;

  if (format_of(cfg) == OutputFormat::json) {
    json array = json::array();
    for (const auto& e : entries)
      array.push_back({{"profile", e.profile}, {"phi0", e.phi0}, {"period", e.period},
                       {"fidelity", e.fidelity}, {"pass", e.pass}});
    out << array.dump(2) << '\n';
    return;
  }
  out << "# mobius_cli " << kVersion << " periodicity\n";
  out << "# state=" << to_string(cfg.state) << " l=" << format_real(cfg.strip.l)
      << " tol=" << format_real(tol) << '\n';
  out << "profile,phi0,period,fidelity,pass\n";
  for (const auto& e : entries)
    out << e.profile << ',' << format_real(e.phi0) << ',' << format_real(e.period) << ','
        << format_real(e.fidelity) << ',' << (e.pass ? "true" : "false") << '\n';
}

bool write_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions options;
  if (cfg.tol) options.tolerance = *cfg.tol;
  options.padding = cfg.padding;
  options.threads = cfg.threads;
  const VerifyReport report = run_verification(options);

  json residuals = json::array();
  for (const auto& r : report.eigenvalue_residuals)
    residuals.push_back({{"l_prime", r.l_prime},
                         {"phi", r.phi},
                         {"residual", r.residual},
                         {"tail_bound", r.tail_bound},
                         {"truncation_warning", r.truncation_warning},
                         {"pass", r.residual <= options.tolerance && !r.truncation_warning}});
  json poisson = json::array();
  for (const auto& p : report.poisson_checks)
    poisson.push_back({{"a", p.a},
                       {"beta", complex_json(p.beta)},
                       {"rel_dev", p.rel_dev},
                       {"pass", p.rel_dev <= options.tolerance}});
  json discrepancies = json::array();
  for (const auto& d : report.discrepancies) {
    json flags = json::array();
    if (d.unitarity_violation) flags.push_back("unitarity-violation");
    if (d.paper_unreproduced) flags.push_back("paper-unreproduced");
    json params = {{"l_prime", d.params.l_prime}, {"phi", d.params.phi}};
    if (d.quantity == Quantity::overlap) {
      params["l_prime2"] = d.params.l_prime2;
      params["phi2"] = d.params.phi2;
    }
    if (d.quantity == Quantity::expect_expJ) params["lambda"] = d.params.lambda;
    discrepancies.push_back({{"quantity", to_string(d.quantity)},
                             {"params", params},
                             {"engine_value", complex_json(d.engine_value)},
                             {"closed_normalized", complex_json(d.closed_normalized)},
                             {"closed_paper_literal", complex_json(d.closed_paper_literal)},
                             {"rel_dev_normalized", d.rel_dev_normalized},
                             {"rel_dev_paper_literal", d.rel_dev_paper_literal},
                             {"flags", flags},
                             {"pass", d.rel_dev_normalized <= options.tolerance}});
  }
  json periodicity = json::array();
  for (const auto& p : report.periodicity)
    periodicity.push_back({{"profile", p.profile},
                           {"state", p.state},
                           {"l", p.l},
                           {"phi0", p.phi0},
                           {"period", p.period},
                           {"fidelity", p.fidelity},
                           {"pass", p.pass}});

  const json doc = {{"eigenvalue_residuals", residuals},
                    {"poisson_checks", poisson},
                    {"discrepancies", discrepancies},
                    {"periodicity", periodicity}};
  out << doc.dump(2) << '\n';
  return report.passed(options.tolerance);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::out | std::ios::trunc);
    if (!file) {
      diag << "mobius_cli: cannot open output '" << cfg.output << "'\n";
      return 2;
    }
    sink = &file;
  }

  // Buffer so a failing command leaves no partial output behind.
  std::ostringstream buffer;
  int code = 0;
  try {
    switch (cfg.command) {
      case Command::trajectory:
        write_trajectory(cfg, buffer);
        break;
      case Command::sweep:
        write_sweep(cfg, buffer);
        break;
      case Command::periodicity:
        write_periodicity(cfg, buffer);
        break;
      case Command::verify:
        code = write_verify(cfg, buffer) ? 0 : 1;
        if (code != 0) diag << "mobius_cli: verification failed\n";
        break;
    }
  } catch (const std::exception& e) {
    diag << "mobius_cli: " << e.what() << '\n';
    return 2;
  }

  *sink << buffer.str();
  sink->flush();
  if (!*sink) {
    diag << "mobius_cli: write failed\n";
    return 2;
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
  RunConfig cfg;
  std::string usage;
  try {
    cfg = parse_run_config(argc, argv, &usage);
  } catch (const std::exception& e) {
    diag << "mobius_cli: " << e.what() << '\n';
    return 2;
  }
  if (cfg.help) {
    out << usage;
    return 0;
  }
  return run(cfg, out, diag);
}

}  // namespace mobius::cli
