#include "localitylab/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace localitylab::report {

namespace {

double degrees(double radians) {
  // Round to 1e-9 degrees so that grid angles print as 45 rather than 45.00000000000001.
  return std::round(radians * 180.0 / std::numbers::pi * 1e9) / 1e9;
}

}  // namespace

Json setting(const MeasurementSetting& s) {
  if (const auto* p = std::get_if<PauliAxis>(&s)) return std::string(1, to_char(*p));
  const auto& d = std::get<UnitVector3>(s);
  return Json::array({d.x(), d.y(), d.z()});
}

Json settings(const Settings& s) {
  Json out = Json::array();
  for (const auto& x : s) out.push_back(setting(x));
  return out;
}

Json distribution(const JointDistribution& d) {
  Json out = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.push_back(Json{{"outcomes", JointDistribution::outcomes_at(d.num_parties(), i)},
                       {"probability", d[i]}});
  }
  return out;
}

Json transcript(const Transcript& t) {
  Json out = Json::array();
  for (const auto& m : t.messages) {
    out.push_back(Json{{"round", m.round},
                       {"sender", std::string(party_name(m.sender))},
                       {"receiver", std::string(party_name(m.receiver))},
                       {"bits", m.bits.to_string()}});
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json run_record(const std::string& strategy, std::uint64_t trial, const RunRecord& r) {
  return Json{{"schema", kRunRecordSchema},
              {"strategy", strategy},
              {"trial", trial},
              {"settings", settings(r.settings)},
              {"outcomes", r.outcomes},
              {"transcript", transcript(r.transcript)},
              {"bits", r.transcript.bit_count()},
              {"hidden_state_digest", hex64(r.hidden_state_digest)}};
}

Json estimate(const std::string& strategy, const Settings& s, RngSeed seed,
              const CorrelationEstimate& e) {
  return Json{{"schema", kEstimateSchema},
              {"strategy", strategy},
              {"settings", settings(s)},
              {"seed", seed.value},
              {"trials", e.trials},
              {"mean", e.mean},
              {"hoeffding_epsilon", e.hoeffding_epsilon},
              {"confidence", e.confidence},
              {"party_means", e.party_means}};
}

Json exact(const std::string& strategy, const Settings& s, const JointDistribution& d) {
  return Json{{"schema", kExactSchema},
              {"strategy", strategy},
              {"settings", settings(s)},
              {"product_expectation", d.product_expectation(measured_parties(s))},
              {"distribution", distribution(d)}};
}

Json chsh_scan(const ChshScanResult& r) {
  Json grid = Json::array();
  for (Eigen::Index i = 0; i < r.correlations.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < r.correlations.cols(); ++j) row.push_back(r.correlations(i, j));
    grid.push_back(std::move(row));
  }
  Json angles = Json::array();
  for (double a : r.angles) angles.push_back(degrees(a));
  return Json{{"schema", kChshScanSchema},
              {"source", r.source},
              {"step_degrees", degrees(r.step)},
              {"trials_per_cell", r.trials_per_cell},
              {"epsilon", r.epsilon},
              {"classical_bound", r.classical_bound()},
              {"max_value", r.max_value},
              {"argmax_degrees",
               Json{{"m", degrees(r.argmax[0])},
                    {"m_prime", degrees(r.argmax[1])},
                    {"n", degrees(r.argmax[2])},
                    {"n_prime", degrees(r.argmax[3])}}},
              {"violates_classical_bound", r.max_value > r.classical_bound()},
              {"angles_degrees", std::move(angles)},
              {"correlations", std::move(grid)}};
}

Json ghz_parity(const GhzParityReport& r) {
  return Json{{"schema", kGhzParitySchema},
              {"source", r.source},
              {"v_xyy", r.v_xyy},
              {"v_yxy", r.v_yxy},
              {"v_yyx", r.v_yyx},
              {"v_xxx", r.v_xxx},
              {"premises_hold", r.premises_hold},
              {"classical_prediction", r.classical_prediction},
              {"quantum_prediction", r.quantum_prediction},
              {"contradiction", r.contradiction},
              {"mermin_product", r.mermin_product},
              {"matches_quantum", r.matches_quantum},
              {"tolerance", r.tolerance}};
}

Json no_signalling(const NoSignallingReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back(Json{{"settings", settings(c.settings)}, {"marginal_mean", c.marginal_mean}});
  }
  Json flags = Json::array();
  for (const auto& f : r.flags) {
    flags.push_back(Json{{"first", f.first}, {"second", f.second}, {"difference", f.difference}});
  }
  Json paths = Json::array();
  for (const auto& p : r.inbound_paths) {
    paths.push_back(Json{{"round", p.round},
                         {"sender", std::string(party_name(p.sender))},
                         {"receiver", std::string(party_name(p.receiver))},
                         {"bits", p.bits}});
  }
  return Json{{"party", std::string(party_name(r.party))},
              {"own_setting", setting(r.own_setting)},
              {"trials", r.trials},
              {"confidence", r.confidence},
              {"epsilon", r.epsilon},
              {"threshold", r.threshold},
              {"cells", std::move(cells)},
              {"flags", std::move(flags)},
              {"inbound_paths", std::move(paths)},
              {"pass", r.pass()}};
}

Json communication(const CommunicationReport& r) {
  return Json{{"declared_bits", r.declared_bits},
              {"runs", r.runs},
              {"min_bits", r.min_bits},
              {"max_bits", r.max_bits},
              {"mean_bits", r.mean_bits},
              {"matches_declared", r.matches_declared()}};
}

std::string chsh_scan_csv(const ChshScanResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "m_deg,n_deg,correlation,epsilon\n";
  for (std::size_t i = 0; i < r.angles.size(); ++i) {
    for (std::size_t j = 0; j < r.angles.size(); ++j) {
      os << degrees(r.angles[i]) << ',' << degrees(r.angles[j]) << ','
         << r.correlations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ','
         << r.epsilon << '\n';
    }
  }
  return os.str();
}

}  // namespace localitylab::report
