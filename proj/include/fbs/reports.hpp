#pragma once

#include "fbs/calculus.hpp"
#include "fbs/report_io.hpp"
#include "fbs/solver.hpp"

namespace fbs {

// JSON views of the report structs. Key order is the documented schema;
// floats are serialized through format_double.

Json to_json(const MapConstants& k);
MapConstants map_constants_from_json(const Json& j);

Json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const Json& j);

Json to_json(const FixedPointReport& rep);
FixedPointReport fixed_point_report_from_json(const Json& j);

Json to_json(const RatioReport& rep);

Json to_json(const ScalingReport& rep);
Json to_json(const UniquenessReport& rep);

// Per-sample CSV rows of an audit; shared column set, blanks where an
// exponent does not apply.
extern const std::vector<std::string> kAuditCsvHeader;
void append_audit_csv_rows(CsvWriter& csv, const RatioReport& rep);

}  // namespace fbs
