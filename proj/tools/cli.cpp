#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "localitylab/errors.hpp"
#include "localitylab/inequalities.hpp"
#include "localitylab/qoracle.hpp"
#include "localitylab/report.hpp"
#include "localitylab/runtime.hpp"
#include "localitylab/strategies.hpp"

namespace localitylab::cli {

namespace {

using report::Json;

constexpr const char* kSeedEnv = "LOCALITYLAB_SEED";

struct Config {
  std::string command;
  std::string state = "singlet";
  std::string strategy;
  std::string source = "oracle";
  std::string settings_text;
  std::optional<double> angle_deg;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string output = "json";
  std::string out_path;
  unsigned threads = 1;
  bool exact = false;
  bool records = false;
  double step_deg = 15.0;
  std::uint64_t runs = 10000;
};

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t()[]");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t()[]");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token) {
  const std::string t = trim(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw UsageError("not a number: '" + token + "'");
  }
  return v;
}

RngSeed resolve_seed(const Config& c) {
  if (c.seed) return RngSeed{*c.seed};
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError(std::string(kSeedEnv) + " is not a 64-bit integer");
    return RngSeed{v};
  }
  return RngSeed{1};
}

/// Settings from --settings or --angle. --angle puts party a at 0 degrees and
/// party b at the given in-plane angle.
Settings settings_from(const Config& c, std::size_t parties, std::ostream& err) {
  if (c.angle_deg && !c.settings_text.empty()) {
    throw UsageError("use either --settings or --angle, not both");
  }
  Settings s;
  if (c.angle_deg) {
    if (parties != 2) throw UsageError("--angle applies to two-party experiments only");
    s = {UnitVector3::in_plane(0.0), UnitVector3::in_plane(radians(*c.angle_deg))};
  } else if (!c.settings_text.empty()) {
    s = parse_settings(c.settings_text, err);
  } else {
    throw UsageError("missing --settings or --angle");
  }
  if (s.size() != parties) {
    std::ostringstream os;
    os << "expected " << parties << " settings, got " << s.size();
    throw UsageError(os.str());
  }
  return s;
}

class Output {
 public:
  Output(const Config& c, std::ostream& out) : stream_(&out) {
    if (!c.out_path.empty()) {
      file_.open(c.out_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + c.out_path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  void json(const Json& j) { *stream_ << j.dump(2) << '\n'; }
  void line(const Json& j) { *stream_ << j.dump() << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void require_json(const Config& c) {
  if (c.output != "json") throw UsageError("CSV output is only available for chsh-scan");
}

std::size_t state_qubits(const std::string& state) {
  if (state == "singlet") return 2;
  if (state.rfind("ghz", 0) == 0) {
    const std::string digits = state.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("state must be singlet or ghzN, got '" + state + "'");
    }
    return static_cast<std::size_t>(std::stoul(digits));
  }
  throw UsageError("state must be singlet or ghzN, got '" + state + "'");
}

int cmd_oracle(const Config& c, std::ostream& out, std::ostream& err) {
  require_json(c);
  const std::size_t n = state_qubits(c.state);
  const StateVector state = c.state == "singlet" ? make_singlet() : make_ghz(n);
  const Settings s = settings_from(c, n, err);
  const auto d = joint_distribution(state, s);
  Output o(c, out);
  o.json(Json{{"schema", report::kOracleSchema},
              {"state", c.state},
              {"settings", report::settings(s)},
              {"expectation", joint_expectation(state, s)},
              {"distribution", report::distribution(d)}});
  return 0;
}

int cmd_run(const Config& c, std::ostream& out, std::ostream& err) {
  require_json(c);
  if (c.strategy.empty()) throw UsageError("run needs --strategy");
  const auto strategy = find_strategy(c.strategy);
  const Settings s = settings_from(c, strategy->spec().num_parties, err);
  const RngSeed seed = resolve_seed(c);
  Output o(c, out);
  if (c.exact) {
    o.json(report::exact(c.strategy, s, enumerate_exact(*strategy, s)));
    return 0;
  }
  const std::uint64_t trials = c.trials == 0 ? 100000 : c.trials;
  if (c.records) {
    for (std::uint64_t i = 0; i < trials; ++i) {
      Rng rng = Rng::for_stream(seed, i);
      o.line(report::run_record(c.strategy, i, run_trial(*strategy, s, rng)));
    }
    return 0;
  }
  const auto e = estimate_correlation(*strategy, s, trials, seed,
                                      SimulationOptions{.first_stream = 0, .threads = c.threads});
  o.json(report::estimate(c.strategy, s, seed, e));
  return 0;
}

int cmd_chsh_scan(const Config& c, std::ostream& out) {
  if (c.output != "json" && c.output != "csv") throw UsageError("--output must be json or csv");
  const double step = radians(c.step_deg);
  ChshScanResult r;
  if (c.source == "oracle") {
    r = chsh_scan_oracle(step);
  } else {
    const auto strategy = find_strategy(c.source);
    r = chsh_scan_strategy(*strategy, step, c.trials == 0 ? 100000 : c.trials, resolve_seed(c),
                           c.threads);
  }
  Output o(c, out);
  if (c.output == "csv") {
    o.stream() << report::chsh_scan_csv(r);
  } else {
    o.json(report::chsh_scan(r));
  }
  return 0;
}

int cmd_ghz_check(const Config& c, std::ostream& out) {
  require_json(c);
  const GhzParityReport r =
      c.source == "oracle"
          ? ghz_parity_oracle()
          : ghz_parity_strategy(*find_strategy(c.source), c.trials == 0 ? 100000 : c.trials,
                                resolve_seed(c));
  Output o(c, out);
  o.json(report::ghz_parity(r));
  return 0;
}

/// Audit cells: each party in turn, with a few own settings, against every
/// combination of the other parties' settings from a small menu.
std::vector<NoSignallingReport> no_signalling_suite(const Strategy& strategy,
                                                    std::uint64_t trials, RngSeed seed) {
  const auto& spec = strategy.spec();
  std::vector<MeasurementSetting> menu;
  if (spec.setting_kind == SettingKind::PauliOnly) {
    menu.assign(std::begin(kPauliAxes), std::end(kPauliAxes));
  } else {
    for (double deg : {0.0, 45.0, 90.0, 135.0, 180.0}) {
      menu.emplace_back(UnitVector3::in_plane(radians(deg)));
    }
  }
  std::vector<MeasurementSetting> own_menu;
  if (spec.setting_kind == SettingKind::PauliOnly) {
    own_menu = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  } else {
    own_menu = {UnitVector3::in_plane(0.0), UnitVector3::in_plane(radians(60.0))};
  }

  std::vector<Settings> others{{}};
  for (std::size_t p = 1; p < spec.num_parties; ++p) {
    std::vector<Settings> next;
    for (const auto& prefix : others) {
      for (const auto& m : menu) {
        auto s = prefix;
        s.push_back(m);
        next.push_back(std::move(s));
      }
    }
    others = std::move(next);
  }

  std::vector<NoSignallingReport> reports;
  std::uint64_t block = 0;
  for (PartyIndex party = 0; party < spec.num_parties; ++party) {
    for (const auto& own : own_menu) {
      // Cells within an audit share streams; audits get disjoint ranges.
      const RngSeed audit_seed{seed.value + block * trials};
      reports.push_back(audit_no_signalling(strategy, party, own, others, trials, audit_seed));
      ++block;
    }
  }
  return reports;
}

int cmd_audit(const Config& c, std::ostream& out) {
  require_json(c);
  if (c.strategy.empty()) throw UsageError("audit needs --strategy");
  const auto strategy = find_strategy(c.strategy);
  const RngSeed seed = resolve_seed(c);
  const std::uint64_t trials = c.trials == 0 ? 10000 : c.trials;

  const auto sample = random_settings_sample(*strategy, c.runs, seed);
  const auto comm = audit_communication(*strategy, sample, seed);
  const auto ns = no_signalling_suite(*strategy, trials, seed);

  bool ns_pass = true;
  Json ns_json = Json::array();
  for (const auto& r : ns) {
    ns_pass = ns_pass && r.pass();
    ns_json.push_back(report::no_signalling(r));
  }
  std::ostringstream summary;
  summary << "bits/run = ";
  if (comm.min_bits == comm.max_bits) {
    summary << comm.max_bits;
  } else {
    summary << comm.min_bits << ".." << comm.max_bits;
  }
  summary << "; no-signalling: " << (ns_pass ? "pass" : "fail");

  Output o(c, out);
  o.json(Json{{"schema", report::kAuditSchema},
              {"strategy", c.strategy},
              {"seed", seed.value},
              {"summary", summary.str()},
              {"communication", report::communication(comm)},
              {"no_signalling_pass", ns_pass},
              {"no_signalling", std::move(ns_json)}});
  return comm.matches_declared() ? 0 : 1;
}

void print_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

Settings parse_settings(const std::string& text, std::ostream& err) {
  Settings out;
  const bool vectors = text.find_first_of("0123456789.") != std::string::npos;
  if (!vectors) {
    for (const auto& tok : split(text, ',')) {
      const std::string t = trim(tok);
      if (t.size() != 1) throw UsageError("bad Pauli setting '" + tok + "'");
      try {
        out.emplace_back(pauli_from_char(t[0]));
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
    }
    return out;
  }
  std::vector<std::string> groups = split(text, ';');
  if (groups.size() == 1) {
    const auto toks = split(text, ',');
    if (toks.size() % 3 != 0) throw UsageError("directions need three components each");
    groups.clear();
    for (std::size_t i = 0; i < toks.size(); i += 3) {
      groups.push_back(toks[i] + "," + toks[i + 1] + "," + toks[i + 2]);
    }
  }
  for (const auto& g : groups) {
    const auto toks = split(g, ',');
    if (toks.size() != 3) throw UsageError("direction '" + g + "' needs three components");
    const Eigen::Vector3d v(parse_number(toks[0]), parse_number(toks[1]),
                            parse_number(toks[2]));
    const double norm = v.norm();
    if (!(norm > 0.0)) throw UsageError("direction '" + g + "' is zero");
    if (std::abs(norm - 1.0) > 1e-6) {
      err << "warning: direction (" << trim(g) << ") has norm " << norm
          << "; renormalised\n";
    }
    out.emplace_back(UnitVector3::normalized(v));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Classical simulations of quantum correlations, checked against exact "
               "quantum predictions."};
  app.name("localitylab");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--seed", c.seed, "64-bit RNG seed (overrides " + std::string(kSeedEnv) + ")");
  app.add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--output", c.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", c.out_path, "Write the report to this file");
  app.add_option("--threads", c.threads, "Worker threads; never changes results")
      ->check(CLI::Range(1u, 256u));

  auto* oracle = app.add_subcommand("oracle", "Exact quantum expectation and distribution");
  oracle->add_option("--state", c.state, "singlet or ghzN (N = 2..10)");
  oracle->add_option("--settings", c.settings_text, "Pauli letters or direction triples");
  oracle->add_option("--angle", c.angle_deg, "Angle between the two singlet settings, degrees");

  auto* run = app.add_subcommand("run", "Run a classical strategy");
  run->add_option("--strategy", c.strategy, "Registered strategy name")->required();
  run->add_option("--settings", c.settings_text, "Pauli letters or direction triples");
  run->add_option("--angle", c.angle_deg, "Angle between the two settings, degrees");
  run->add_flag("--exact", c.exact, "Enumerate the hidden-state space instead of sampling");
  run->add_flag("--records", c.records, "Stream one RunRecord per trial as JSON lines");

  auto* scan = app.add_subcommand("chsh-scan", "Maximise CHSH over an in-plane angle grid");
  scan->add_option("--source", c.source, "oracle or a two-party strategy");
  scan->add_option("--step", c.step_deg, "Grid step in degrees")->check(CLI::PositiveNumber);

  auto* ghz = app.add_subcommand("ghz-check", "GHZ all-or-nothing parity report");
  ghz->add_option("--source", c.source, "oracle or a three-party Pauli strategy");

  auto* audit = app.add_subcommand("audit", "Communication and no-signalling audit");
  audit->add_option("--strategy", c.strategy, "Registered strategy name")->required();
  audit->add_option("--runs", c.runs, "Runs in the communication sample")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name

  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return 2;
  }

  try {
    if (*oracle) return cmd_oracle(c, out, err);
    if (*run) return cmd_run(c, out, err);
    if (*scan) return cmd_chsh_scan(c, out);
    if (*ghz) return cmd_ghz_check(c, out);
    if (*audit) return cmd_audit(c, out);
  } catch (const UsageError& e) {
    print_error(err, e.code(), e.what());
    return 2;
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 1;
  }
  print_error(err, "usage", "no command given");
  return 2;
}

}  // namespace localitylab::cli
