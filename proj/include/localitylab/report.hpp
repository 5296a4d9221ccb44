#pragma once

// JSON forms of every report the library produces. Each top-level object
// carries a "schema" tag; docs/schemas.md lists the fields per version.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "localitylab/inequalities.hpp"
#include "localitylab/joint_distribution.hpp"
#include "localitylab/runtime.hpp"
#include "localitylab/settings.hpp"

namespace localitylab::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kOracleSchema = "localitylab.oracle/1";
inline constexpr const char* kRunRecordSchema = "localitylab.run-record/1";
inline constexpr const char* kEstimateSchema = "localitylab.estimate/1";
inline constexpr const char* kExactSchema = "localitylab.exact/1";
inline constexpr const char* kChshScanSchema = "localitylab.chsh-scan/1";
inline constexpr const char* kGhzParitySchema = "localitylab.ghz-parity/1";
inline constexpr const char* kAuditSchema = "localitylab.audit/1";

Json setting(const MeasurementSetting& s);
Json settings(const Settings& s);
Json distribution(const JointDistribution& d);
Json transcript(const Transcript& t);
std::string hex64(std::uint64_t v);

Json run_record(const std::string& strategy, std::uint64_t trial, const RunRecord& r);
Json estimate(const std::string& strategy, const Settings& s, RngSeed seed,
              const CorrelationEstimate& e);
Json exact(const std::string& strategy, const Settings& s, const JointDistribution& d);
Json chsh_scan(const ChshScanResult& r);
Json ghz_parity(const GhzParityReport& r);
Json no_signalling(const NoSignallingReport& r);
Json communication(const CommunicationReport& r);

/// CSV rows "m_deg,n_deg,correlation,epsilon" for every grid pair.
std::string chsh_scan_csv(const ChshScanResult& r);

}  // namespace localitylab::report
