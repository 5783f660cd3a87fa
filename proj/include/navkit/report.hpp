#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "navkit/sim.hpp"

namespace navkit {

inline constexpr const char* kCsvHeader = "t,robot_id,x,y,theta,v,u,mode,clearance";

/// Per-tick trace; doubles are written with round-trip precision.
void write_csv(std::ostream& out, const RunLog& log);

/// Inverse of write_csv. Throws std::runtime_error on a malformed row.
std::vector<TickRecord> read_csv(std::istream& in);

/// Plan view: obstacles at t = 0, dashed reference paths of moving
/// obstacles, one polyline per robot, targets and formation slots.
void write_svg(std::ostream& out, const Scenario& sc, const RunLog& log, const std::vector<Vec2>& slots = {});

std::string metrics_json(const RunLog& log, const Metrics& m);
std::string validation_json(const ValidationReport& report);
std::string validation_text(const ValidationReport& report);

std::string comparison_json(const std::vector<ComparisonEntry>& entries);
std::string comparison_text(const std::vector<ComparisonEntry>& entries);

void write_batch_csv(std::ostream& out, const BatchTable& table);
std::string batch_text(const BatchTable& table);

/// Consecutive-slot differences: desired value and residual error per pair.
std::string formation_table(const FormationResult& res);
std::string assignment_trace_text(const FormationResult& res);
std::string formation_json(const FormationResult& res);

}  // namespace navkit
