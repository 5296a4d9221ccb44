// Reproduction suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance <path-to-localitylab-binary> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "localitylab/inequalities.hpp"
#include "localitylab/qoracle.hpp"
#include "localitylab/runtime.hpp"

using namespace localitylab;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kChshTol = 1e-10;
constexpr double kGhzTol = 1e-12;
constexpr double kBellTol = 0.005;
constexpr double kBellQuantumGap = 0.2;
constexpr double kTvTol = 1e-12;
constexpr double kTonerPairTol = 0.02;
constexpr int kTonerPairsRequired = 199;
constexpr double kTonerMeanTol = 0.01;

constexpr std::uint64_t kBellTrials = 1000000;
constexpr std::uint64_t kScanTrials = 100000;
constexpr std::uint64_t kTonerTrials = 100000;
constexpr int kTonerPairs = 200;
constexpr std::size_t kCommRuns = 10000;
constexpr std::uint64_t kAuditTrials = 100000;

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << detail
            << std::endl;
  failures += !pass;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

Settings pair_at(double theta) {
  return {UnitVector3::in_plane(0.0), UnitVector3::in_plane(theta)};
}

void quantum_chsh() {
  const auto cfg = ChshConfig::in_plane(0.0, kPi / 2, kPi / 4, -kPi / 4);
  const double v = chsh_value(oracle_singlet_correlation, cfg);
  const double err = std::abs(v - 2 * std::sqrt(2.0));
  report(1, err <= kChshTol, "quantum CHSH violation",
         "CHSH(0,90,45,-45) = " + fmt(v, 15) + ", |err| = " + fmt(err, 3));
}

void ghz_algebra() {
  const auto ghz = make_ghz(3);
  const auto v = [&](const PauliTriple& t) {
    return joint_expectation(ghz, Settings{t[0], t[1], t[2]});
  };
  const double xyy = v(kGhzXYY), yxy = v(kGhzYXY), yyx = v(kGhzYYX), xxx = v(kGhzXXX);
  const double worst = std::max({std::abs(xyy - 1), std::abs(yxy - 1), std::abs(yyx - 1),
                                 std::abs(xxx + 1)});
  const auto sx = sigma_x<double>();
  const auto sy = sigma_y<double>();
  const MatrixXc<double> lhs =
      kron<double>({sx, sy, sy}) * kron<double>({sy, sx, sy}) * kron<double>({sy, sy, sx});
  const double product_err = (lhs + kron<double>({sx, sx, sx})).cwiseAbs().maxCoeff();
  report(2, worst <= kGhzTol && product_err <= kGhzTol, "GHZ algebra",
         "XYY,YXY,YYX,XXX = " + fmt(xyy) + "," + fmt(yxy) + "," + fmt(yyx) + "," + fmt(xxx) +
             "; max deviation " + fmt(worst, 3) + "; stabiliser product + XXX max entry " +
             fmt(product_err, 3));
}

void bell_special_cases() {
  const auto bell = find_strategy(kBellSinglet);
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 101;
  for (double theta : {0.0, kPi / 2, kPi}) {
    const auto e = estimate_correlation(*bell, pair_at(theta), kBellTrials, RngSeed{seed++});
    ok = ok && std::abs(e.mean + std::cos(theta)) <= kBellTol;
    detail += "E(" + fmt(theta * 180 / kPi) + "deg) = " + fmt(e.mean) + "; ";
  }
  const auto q = estimate_correlation(*bell, pair_at(kPi / 4), kBellTrials, RngSeed{seed});
  const bool linear = std::abs(q.mean + 0.5) <= kBellTol;
  const bool classical = std::abs(q.mean + std::cos(kPi / 4)) > kBellQuantumGap;
  ok = ok && linear && classical;
  detail += "E(45deg) = " + fmt(q.mean) + " vs quantum " + fmt(-std::cos(kPi / 4));
  report(3, ok, "Bell model special cases", detail);
}

void classical_bound() {
  const auto r = chsh_scan_strategy(*find_strategy(kBellSinglet), kPi / 12, kScanTrials,
                                    RngSeed{2024});
  const double bound = 2 + 4 * hoeffding_epsilon(kScanTrials, kAuditConfidence);
  report(4, r.max_value <= bound, "classical CHSH bound",
         "bell-singlet max over pi/12 grid = " + fmt(r.max_value) + " <= " + fmt(bound));
}

std::vector<PauliTriple> all_triples() {
  std::vector<PauliTriple> out;
  for (auto a : kPauliAxes)
    for (auto b : kPauliAxes)
      for (auto c : kPauliAxes) out.push_back({a, b, c});
  return out;
}

std::string label(const PauliTriple& t) { return {to_char(t[0]), to_char(t[1]), to_char(t[2])}; }

void tessier_exactness() {
  const auto tessier = find_strategy(kTessierGhz3);
  const auto ghz = make_ghz(3);
  double worst = 0.0;
  std::string mismatched;
  int matches = 0;
  for (const auto& t : all_triples()) {
    const Settings s{t[0], t[1], t[2]};
    const double tv = tv_distance(enumerate_exact(*tessier, s), joint_distribution(ghz, s));
    worst = std::max(worst, tv);
    if (tv <= kTvTol) {
      ++matches;
    } else {
      mismatched += (mismatched.empty() ? "" : ",") + label(t) + " (TV " + fmt(tv, 3) + ")";
    }
  }
  report(5, matches == 64, "Tessier exactness",
         std::to_string(matches) + "/64 triples with TV <= 1e-12" +
             (mismatched.empty() ? "" : "; mismatched: " + mismatched));
}

void tessier_no_comm() {
  const Settings yxy{PauliAxis::Y, PauliAxis::X, PauliAxis::Y};
  const auto nocomm = enumerate_exact(*find_strategy(kTessierGhz3NoComm), yxy);
  const auto q = joint_distribution(make_ghz(3), yxy);
  double q_plus = 0.0, sim_minus = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto o = JointDistribution::outcomes_at(3, i);
    const int product = o[0] * o[1] * o[2];
    if (product == 1) q_plus += q[i];
    if (product == -1) sim_minus += nocomm[i];
  }
  report(6, sim_minus == 1.0 && std::abs(q_plus - 1.0) <= kGhzTol,
         "Tessier without communication fails",
         "nocomm P(product=-1 | YXY) = " + fmt(sim_minus) + ", oracle P(product=+1) = " +
             fmt(q_plus, 15));
}

void toner_bacon_fidelity() {
  const auto tb = find_strategy(kTonerBacon);
  Rng pick(RngSeed{777});
  int within = 0;
  double worst_pair = 0.0, worst_cell_mean = 0.0;
  double sum_a = 0.0, sum_b = 0.0;
  for (int k = 0; k < kTonerPairs; ++k) {
    const auto m = sample_sphere(pick);
    const auto n = sample_sphere(pick);
    const auto e = estimate_correlation(*tb, {m, n}, kTonerTrials,
                                        RngSeed{1000000 + static_cast<std::uint64_t>(k)});
    const double dev = std::abs(e.mean + m.dot(n));
    worst_pair = std::max(worst_pair, dev);
    within += dev <= kTonerPairTol;
    sum_a += e.party_means[0];
    sum_b += e.party_means[1];
    for (double pm : e.party_means) worst_cell_mean = std::max(worst_cell_mean, std::abs(pm));
  }
  // Single-party means pooled over all pairs (2 * 10^7 trials per party).
  const double mean_a = sum_a / kTonerPairs;
  const double mean_b = sum_b / kTonerPairs;
  const bool means_ok = std::abs(mean_a) <= kTonerMeanTol && std::abs(mean_b) <= kTonerMeanTol;
  report(7, within >= kTonerPairsRequired && means_ok, "Toner-Bacon fidelity",
         std::to_string(within) + "/200 pairs within 0.02 (worst " + fmt(worst_pair, 4) +
             "); pooled E[A] = " + fmt(mean_a, 3) + ", E[B] = " + fmt(mean_b, 3) +
             "; largest per-pair single-party mean " + fmt(worst_cell_mean, 4));
}

void communication_accounting() {
  bool ok = true;
  std::string detail;
  const std::pair<std::string_view, std::size_t> expected[] = {
      {kBellSinglet, 0}, {kTessierGhz3, 1}, {kTonerBacon, 1}};
  std::uint64_t seed = 31;
  for (const auto& [name, bits] : expected) {
    const auto s = find_strategy(name);
    const auto r = audit_communication(*s, random_settings_sample(*s, kCommRuns, RngSeed{seed}),
                                       RngSeed{seed + 1});
    seed += 2;
    ok = ok && r.runs == kCommRuns && r.min_bits == bits && r.max_bits == bits;
    detail += std::string(name) + " " + std::to_string(r.min_bits) + ".." +
              std::to_string(r.max_bits) + " bits; ";
  }
  report(8, ok, "communication accounting", detail + "over 10^4 runs each");
}

std::vector<Settings> counterpart_menu(const Strategy& s) {
  std::vector<MeasurementSetting> menu;
  if (s.spec().setting_kind == SettingKind::PauliOnly) {
    menu.assign(std::begin(kPauliAxes), std::end(kPauliAxes));
  } else {
    for (double deg : {0.0, 45.0, 90.0, 135.0, 180.0}) {
      menu.emplace_back(UnitVector3::in_plane(deg * kPi / 180));
    }
  }
  std::vector<Settings> out{{}};
  for (std::size_t p = 1; p < s.spec().num_parties; ++p) {
    std::vector<Settings> next;
    for (const auto& prefix : out) {
      for (const auto& m : menu) {
        auto row = prefix;
        row.push_back(m);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<MeasurementSetting> own_menu(const Strategy& s) {
  if (s.spec().setting_kind == SettingKind::PauliOnly) {
    return {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  }
  return {UnitVector3::in_plane(0.0), UnitVector3::in_plane(kPi / 3)};
}

void no_signalling() {
  const std::pair<std::string_view, std::vector<PartyIndex>> audited[] = {
      {kBellSinglet, {kAlice, kBob}},
      {kTessierGhz3, {kBob, kCandice}},
      {kTessierGhz3NoComm, {kAlice, kBob, kCandice}},
      {kTonerBacon, {kAlice}}};
  bool ok = true;
  std::size_t reports = 0, flags = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 5000;
  for (const auto& [name, parties] : audited) {
    const auto s = find_strategy(name);
    const auto others = counterpart_menu(*s);
    for (PartyIndex party : parties) {
      for (const auto& own : own_menu(*s)) {
        const auto r = audit_no_signalling(*s, party, own, others, kAuditTrials, RngSeed{seed++});
        ++reports;
        flags += r.flags.size();
        ok = ok && r.pass() && r.inbound_paths.empty();
        double lo = 1.0, hi = -1.0;
        for (const auto& c : r.cells) {
          lo = std::min(lo, c.marginal_mean);
          hi = std::max(hi, c.marginal_mean);
        }
        worst_ratio = std::max(worst_ratio, (hi - lo) / r.threshold);
      }
    }
  }
  report(9, ok, "no-signalling audit",
         std::to_string(reports) + " audits, " + std::to_string(flags) +
             " flags; largest spread = " + fmt(worst_ratio, 3) + " x (3 eps)");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void determinism(const std::string& binary, const std::filesystem::path& scratch) {
  const std::vector<std::string> commands = {
      "oracle --state ghz3 --settings X,Y,Y",
      "--seed 11 --trials 20000 run --strategy toner-bacon --angle 60",
      "--seed 11 --trials 200 run --strategy tessier-ghz3 --settings Y,X,Y --records",
      "--seed 11 --trials 2000 --threads 2 chsh-scan --source bell-singlet --step 45",
      "--output csv --seed 11 --trials 2000 chsh-scan --source toner-bacon --step 90",
      "ghz-check --source tessier-ghz3",
      "--seed 11 --trials 2000 audit --strategy toner-bacon --runs 500",
  };
  std::filesystem::create_directories(scratch);
  bool ok = true;
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto file = scratch / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".out");
      std::filesystem::remove(file);
      const std::string cmd = "\"" + binary + "\" --out \"" + file.string() + "\" " + commands[i] +
                              " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      outputs[rep] = status == 0 ? slurp(file) : std::string();
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    identical += same;
    ok = ok && same;
  }
  report(10, ok, "CLI determinism",
         std::to_string(identical) + "/" + std::to_string(commands.size()) +
             " commands byte-identical across two invocations");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <localitylab-binary> <scratch-dir>\n";
    return 2;
  }
  quantum_chsh();
  ghz_algebra();
  bell_special_cases();
  classical_bound();
  tessier_exactness();
  tessier_no_comm();
  toner_bacon_fidelity();
  communication_accounting();
  no_signalling();
  determinism(argv[1], argv[2]);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
