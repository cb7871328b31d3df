#pragma once

/// @file run.hpp
/// @brief The time loop: integrates a configured problem to t_end and
/// streams records and snapshots to sinks.

#include <cstddef>
#include <functional>
#include <vector>

#include "lgf/config.hpp"
#include "lgf/diagnostics.hpp"

namespace lgf {

struct RunSinks {
  std::function<void(const DiagnosticsRecord&)> on_record;
  /// index is the position of the snapshot time in output.snapshot_times.
  std::function<void(const FlowState&, std::size_t index)> on_snapshot;
};

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticsRecord> records;
  std::size_t steps = 0;
};

/// Starts from the configured initial condition, or from `start` when given
/// (resume). Steps are clipped to land exactly on snapshot times and t_end,
/// so a resumed run repeats the step sequence of the uninterrupted one.
/// Records are emitted at step 0, every record_every steps and at the final
/// step. Numerical failures propagate with "step k, t=..." appended.
RunResult run(const SimConfig& cfg, const RunSinks& sinks = {}, const FlowState* start = nullptr);

}  // namespace lgf
