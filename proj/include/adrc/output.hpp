#pragma once

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adrc/matrix.hpp"
#include "adrc/metrics.hpp"
#include "adrc/trace.hpp"

namespace adrc::harness {

// Header row then one row per sample, "%.12g" numbers, LF line endings.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

// "key: value" lines from trace.metadata.
void write_trace_metadata(const Trace& trace, const std::filesystem::path& path);

// Columns r,agent,tail_sup_tracking,tail_sup_estimation,max_state_norm; one
// row per agent per report. Agents are numbered from 1.
void write_metrics_csv(std::span<const MetricsReport> reports, const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  Vector t;
  Vector values;
};

// Line chart with axes, tick labels and a legend. The vertical range covers
// samples with t >= range_from; anything outside it is clipped to the frame.
void emit_plot_svg(std::span<const PlotSeries> series, const std::string& title, const std::filesystem::path& path,
                   double range_from = -INFINITY);

// Tracking errors y_i - y_0, second follower states x_i2 and estimation
// errors, written as <prefix>_tracking.svg, <prefix>_states.svg and
// <prefix>_estimation.svg. Returns the paths written.
std::vector<std::filesystem::path> emit_run_plots(const RunResult& run, const std::filesystem::path& dir,
                                                  const std::string& prefix);

}  // namespace adrc::harness
