#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpi/harness/report.hpp"
#include "vpi/harness/scenario.hpp"

namespace vpi {

struct RunOptions {
  bool timings = false;  // wall-clock times make reports non-reproducible; off by default
  std::optional<Mode> mode;
  std::optional<double> resolution;
};

/// Full verification pipeline. Never throws for scenario-level failures: the
/// verdict and failed_stage say what went wrong.
Report run_scenario(Scenario s, const RunOptions& options = {});

struct SweepRow {
  std::string value;
  std::optional<Report> report;
  std::string error;
};

/// One scenario per value with `parameter` (a dotted path) overridden, run
/// on up to `workers` threads; rows come back in input order.
std::vector<SweepRow> run_sweep(const std::string& template_yaml, const std::string& parameter,
                                const std::vector<std::string>& values, unsigned workers,
                                const RunOptions& options = {}, const std::string& origin = "<scenario>");

/// RFC 4180 table: parameter, value, the report columns, error.
std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

/// VPI_WORKERS when set and positive, otherwise the hardware concurrency.
unsigned default_workers();
/// VPI_OUT_DIR when set, otherwise "out".
std::string default_out_dir();

}  // namespace vpi
