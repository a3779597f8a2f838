#pragma once

#include <iosfwd>
#include <string>

#include "chemoeda/experiment.hpp"
#include "chemoeda/optimizers.hpp"

namespace chemo {

// All writers emit "# key = value" metadata headers (tool version, instance
// digest, spec echo) followed by CSV data. Nothing time-dependent is
// written, so equal inputs produce byte-identical files.

void write_run_record(const RunRecord& record, std::uint64_t instance_digest,
                      const std::string& instance_ref, std::ostream& out);

// Rows: run_index, seed, metric_value, censored_flag, total_evaluations,
// then a summary footer block.
void write_results_csv(const ExperimentSummary& summary, std::ostream& out);
// Sidecar: the experiment configuration echoed as JSON.
void write_results_meta(const ExperimentSummary& summary, std::ostream& out);

// Reads back what write_results_csv wrote. Statistics are recomputed from
// the rows when present; summary-only files (footer, no rows) are accepted.
struct LoadedResults {
    std::string label;
    Protocol protocol = Protocol::Efficiency;
    SummaryStats stats;
    std::vector<RunOutcome> outcomes;
};
LoadedResults load_results_csv(std::istream& in, const std::string& source_name);
LoadedResults load_results_csv_file(const std::string& path);

std::string format_double(double v);  // shortest round-trippable decimal

}  // namespace chemo
