#include "lgf/run.hpp"

#include "lgf/csv.hpp"
#include "lgf/errors.hpp"

namespace lgf {

RunResult run(const SimConfig& cfg, const RunSinks& sinks, const FlowState* start) {
  const Model model = cfg.model();
  const Operators ops(cfg.grid, cfg.scheme);
  DiagnosticsEngine engine(model, ops, cfg.analysis);
  const IntegratorSettings& settings = cfg.integrator;

  FlowState state = start ? *start : make_initial_state(cfg.grid, cfg.eos, cfg.ic, cfg.seed);
  if (!(state.grid() == cfg.grid)) {
    throw DimensionError("starting state grid does not match grid.dim/grid.N/grid.L");
  }
  check_same_grid(state);
  try {
    check_positivity(state, settings.positivity_floor);
  } catch (NumericalFailure& e) {
    e.append_context("initial state, step 0");
    throw;
  }

  const auto& snaps = cfg.output.snapshot_times;
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() &&
         (start ? snaps[next_snap] <= state.t : snaps[next_snap] < state.t)) {
    ++next_snap;
  }

  RunResult result{state, {}, 0};
  auto emit = [&](const DiagnosticsRecord& r) {
    result.records.push_back(r);
    if (sinks.on_record) sinks.on_record(r);
  };
  auto emit_snapshots = [&] {
    while (next_snap < snaps.size() && snaps[next_snap] <= state.t) {
      if (sinks.on_snapshot) sinks.on_snapshot(state, next_snap);
      ++next_snap;
    }
  };

  emit(engine.record(0, 0.0, state, nullptr));
  emit_snapshots();

  std::size_t k = 0;
  while (state.t < settings.t_end) {
    double target = settings.t_end;
    if (next_snap < snaps.size() && snaps[next_snap] < target) target = snaps[next_snap];
    double dt = cfl_dt(state, model, settings);
    const bool lands = state.t + dt >= target;
    if (lands) dt = target - state.t;

    FlowState next = [&] {
      try {
        return step(state, dt, model, ops, settings);
      } catch (NumericalFailure& e) {
        e.append_context("step " + std::to_string(k + 1) + ", t=" + format_real(state.t));
        throw;
      }
    }();
    if (lands) next.t = target;
    ++k;
    FlowState prev = std::move(state);
    state = std::move(next);
    emit_snapshots();
    if (k % static_cast<std::size_t>(cfg.output.record_every) == 0 || state.t >= settings.t_end) {
      emit(engine.record(k, dt, state, &prev));
    }
  }
  result.final_state = std::move(state);
  result.steps = k;
  return result;
}

}  // namespace lgf
