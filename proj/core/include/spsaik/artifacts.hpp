#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spsaik/experiment.hpp"
#include "spsaik/optimizer.hpp"
#include "spsaik/scenarios.hpp"

namespace spsaik {

// Numbers are written in shortest round-trip form, so re-parsing any CSV written here
// reproduces the in-memory values bit for bit. All angles are degrees.

/// Header `iteration,loss`.
void write_trace_csv(const std::vector<TracePoint>& trace, std::ostream& out);
std::vector<TracePoint> read_trace_csv(std::istream& in);

/// Header `seed,final_loss,pos_err,theta_err,wall_ms,dq_1..dq_n`. Failed seeds are written as nan.
void write_sweep_csv(const SweepReport& report, std::ostream& out);
/// Parses rows back and recomputes the summary statistics.
SweepReport read_sweep_csv(std::istream& in, std::string scenario_id);

/// Header `seed,nlspsa_final_loss,pso_best_loss`.
void write_compare_csv(const ComparisonReport& report, std::ostream& out);
std::vector<ComparisonRow> read_compare_csv(std::istream& in);

std::string sweep_summary_json(const SweepReport& report);
std::string compare_summary_json(const ComparisonReport& report);

/// A finished run together with the problem it solved.
struct RunArtifact {
    Scenario scenario;
    RunRecord record;
};

/// result.json: embedded scenario, start/final iterates, final pose, losses and counters.
std::string result_json(const Scenario& scenario, const RunRecord& record);
RunArtifact parse_result_json(std::string_view text);

/// Posture figure: initial chain in blue, final chain in magenta, target as a green dot,
/// equal axis scaling.
std::string posture_svg(const ChainModel& chain, const JointVector& initial, const JointVector& final_q,
                        const Pose& target);

/// Loss against iteration with a base-10 log vertical axis.
std::string convergence_svg(const std::vector<TracePoint>& trace);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spsaik
