#include "lgf/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "lgf/csv.hpp"
#include "lgf/errors.hpp"
#include "lgf/run.hpp"
#include "lgf/snapshot.hpp"
#include "lgf/verification.hpp"

namespace lgf {

namespace fs = std::filesystem;

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / kFileName) {
  fs::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw ParameterError("output directory '" + dir.string() +
                         "' is locked by another run (remove " + path_.string() +
                         " if no run is active)");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

struct Options {
  std::string config;
  std::string out_dir;
  std::string snapshot;
  std::string axis = "time";
  bool quiet = false;
};

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%04zu.tpfs", index);
  return buf;
}

/// Defaults for subcommands that accept an optional config.
EosParams default_eos() { return {1.0, 1.0, 1.0, 0.0, 1.0, 1.0}; }
ViscosityParams default_visc() { return {1.0, 0.0}; }

void print_summary(std::ostream& out, const SimConfig& cfg, const RunResult& r) {
  const auto& first = r.records.front();
  const auto& last = r.records.back();
  const auto small = smallness_report(first.E, last.A1, last.A2, cfg.analysis);
  auto rel = [](double a, double b) { return std::abs(b - a) / std::max(std::abs(a), 1e-300); };
  out << "steps: " << r.steps << "\n"
      << "t: " << format_real(r.final_state.t) << "\n"
      << "E0: " << format_real(first.E) << "\n"
      << "E_final: " << format_real(last.E) << "\n"
      << "mass_m drift (rel): " << format_real(rel(first.mass_m, last.mass_m)) << "\n"
      << "mass_n drift (rel): " << format_real(rel(first.mass_n, last.mass_n)) << "\n"
      << "A1 + A2: " << format_real(small.lhs) << " vs 2 E0^theta: " << format_real(small.rhs)
      << (small.satisfied ? " (within bound)" : " (bound exceeded)") << "\n"
      << "boundary shell norm: "
      << format_real(boundary_shell_norm(r.final_state, cfg.eos)) << "\n";
}

int simulate(const Options& o, bool resume, std::ostream& out) {
  SimConfig cfg = load_config(o.config);
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  std::optional<FlowState> start;
  if (resume) start = read_snapshot(o.snapshot);

  const fs::path dir = cfg.output.dir;
  DirectoryLock lock(dir);
  {
    std::ofstream used(dir / (resume ? "config_resume.cfg" : "config.cfg"), std::ios::trunc);
    used << format_config(cfg);
  }
  CsvWriter csv(dir / (resume ? "diagnostics_resume.csv" : "diagnostics.csv"));
  RunSinks sinks;
  sinks.on_record = [&](const DiagnosticsRecord& r) { csv.write(r); };
  sinks.on_snapshot = [&](const FlowState& s, std::size_t i) {
    write_snapshot(s, dir / snapshot_name(i));
  };
  try {
    const RunResult r = run(cfg, sinks, start ? &*start : nullptr);
    write_snapshot(r.final_state, dir / "final.tpfs");
    if (!o.quiet) print_summary(out, cfg, r);
  } catch (const NumericalFailure& e) {
    csv.mark_truncated(e.what());
    throw;
  }
  return kExitOk;
}

int verify(const Options& o, std::ostream& out) {
  const FlowState s = read_snapshot(o.snapshot);
  Model model{default_eos(), default_visc()};
  Scheme scheme;
  if (!o.config.empty()) {
    const SimConfig cfg = load_config(o.config);
    model = cfg.model();
    scheme = cfg.scheme;
  }
  const Operators ops(s.grid(), scheme);
  const auto energy = total_energy(s, model.eos);
  const auto ratio = ratio_bounds(s);
  const auto hoff = hoff_decomposition(s, model, ops);
  out << "t: " << format_real(s.t) << "\n"
      << "E: " << format_real(energy.E) << "\n"
      << "D: " << format_real(dissipation(s, model.visc, ops)) << "\n"
      << "min_s: " << format_real(ratio.min_s) << "\n"
      << "max_s: " << format_real(ratio.max_s) << "\n"
      << "res_construction: " << format_real(construction_identity_residual(s, model, ops)) << "\n"
      << "res_F: " << format_real(check_elliptic_f(s, model, ops)) << "\n";
  if (s.grid().dim() == 3) {
    out << "res_omega: " << format_real(check_elliptic_omega(s, model, ops)) << "\n";
  } else {
    out << "res_omega: 0 (no vorticity in 1D)\n";
  }
  out << "res_laplacian: " << format_real(check_laplacian_decomposition(s, model, ops)) << "\n"
      << "res_hoff: " << format_real(hoff.residual) << "\n"
      << "boundary shell norm: " << format_real(boundary_shell_norm(s, model.eos)) << "\n";
  if (!o.quiet) out << "(Lambda transport residuals need two states; see the run CSV)\n";
  return kExitOk;
}

double expected_order(SchemeKind k, Method m, RefinementAxis axis) {
  if (axis == RefinementAxis::time) return m == Method::rk4 ? 4.0 : 3.0;
  switch (k) {
    case SchemeKind::central2: return 2.0;
    case SchemeKind::central4: return 4.0;
    case SchemeKind::spectral: break;
  }
  throw ParameterError("space refinement needs scheme.kind = central2 or central4");
}

int convergence(const Options& o, std::ostream& out) {
  SimConfig cfg = load_config(o.config);
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  RefinementAxis axis;
  if (o.axis == "space") {
    axis = RefinementAxis::space;
  } else if (o.axis == "time") {
    axis = RefinementAxis::time;
  } else {
    throw ParameterError("--axis must be space or time");
  }
  const double expected = expected_order(cfg.scheme.kind, cfg.integrator.method, axis);
  const double horizon = cfg.integrator.t_end;
  if (!(horizon > 0.0)) throw ParameterError("convergence needs integrator.t_end > 0");

  const Model model = cfg.model();
  const MmsSolution mms(standard_mms_case(cfg.grid.dim(), cfg.grid.length(), cfg.eos, 0.1), model);
  const FlowState exact0 = mms.exact(cfg.grid, 0.0);
  const double dt0 = cfl_dt(exact0, model, cfg.integrator);

  std::vector<StudyLevel> levels;
  for (int i = 0; i < 3; ++i) {
    if (axis == RefinementAxis::space) {
      const double r = 1 << i;
      levels.push_back({cfg.grid.n() * (1 << i), dt0 / (r * r)});
    } else {
      levels.push_back({cfg.grid.n(), dt0 / (1 << i)});
    }
  }
  const double slack = 0.3;
  const auto report =
      convergence_study(mms, levels, cfg.scheme, cfg.integrator.method, axis, horizon, expected, slack);

  const fs::path dir = cfg.output.dir;
  DirectoryLock lock(dir);
  std::ofstream csv(dir / "convergence.csv", std::ios::trunc);
  write_report_csv(csv, report);
  if (!o.quiet) {
    for (std::size_t f = 0; f < kStudyFields.size(); ++f) {
      out << "order_l2(" << kStudyFields[f] << "): " << format_real(report.order_l2[f]) << "\n";
    }
    out << "expected: " << format_real(expected) << " +- " << format_real(slack) << "\n";
  }
  out << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? kExitOk : kExitInput;
}

int check_eos(const Options& o, std::ostream& out) {
  const EosParams eos = o.config.empty() ? default_eos() : load_config(o.config).eos;
  const auto report = eos_property_sweep(eos);
  if (!o.quiet) {
    out << "points checked: " << report.points_checked << "\n"
        << "violations: " << report.violations.size() << "\n"
        << "max FD relative error: " << format_real(report.max_fd_rel_error) << "\n"
        << "d2P/dn2 blow-up slope: " << format_real(report.blowup_slope) << " (expected "
        << format_real(kBlowupSlope) << ")\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 10); ++i) {
      const auto& v = report.violations[i];
      out << "  " << v.check << " at m=" << format_real(v.m) << " n=" << format_real(v.n)
          << ": " << format_real(v.value) << "\n";
    }
  }
  out << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? kExitOk : kExitInput;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-phase compressible flow solver and verification harness", "lgflow"};
  app.require_subcommand(1);
  Options o;

  auto* run_cmd = app.add_subcommand("run", "integrate a configured problem");
  run_cmd->add_option("--config", o.config, "configuration file")->required();
  run_cmd->add_option("--out-dir", o.out_dir, "output directory (overrides output.dir)");
  run_cmd->add_flag("--quiet", o.quiet, "suppress the summary");

  auto* resume_cmd = app.add_subcommand("resume", "continue a run from a snapshot");
  resume_cmd->add_option("--config", o.config, "configuration file")->required();
  resume_cmd->add_option("--snapshot", o.snapshot, "snapshot to start from")->required();
  resume_cmd->add_option("--out-dir", o.out_dir, "output directory (overrides output.dir)");
  resume_cmd->add_flag("--quiet", o.quiet, "suppress the summary");

  auto* verify_cmd = app.add_subcommand("verify", "identity residuals of a snapshot");
  verify_cmd->add_option("--snapshot", o.snapshot, "snapshot file")->required();
  verify_cmd->add_option("--config", o.config, "configuration supplying EOS, viscosity, scheme");
  verify_cmd->add_flag("--quiet", o.quiet, "terse output");

  auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution refinement study");
  conv_cmd->add_option("--config", o.config, "configuration file")->required();
  conv_cmd->add_option("--axis", o.axis, "space or time")->capture_default_str();
  conv_cmd->add_option("--out-dir", o.out_dir, "output directory (overrides output.dir)");
  conv_cmd->add_flag("--quiet", o.quiet, "only print PASS/FAIL");

  auto* eos_cmd = app.add_subcommand("check-eos", "pressure-law property sweep");
  eos_cmd->add_option("--config", o.config, "configuration supplying the EOS constants");
  eos_cmd->add_flag("--quiet", o.quiet, "only print PASS/FAIL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (run_cmd->parsed()) return simulate(o, false, out);
    if (resume_cmd->parsed()) return simulate(o, true, out);
    if (verify_cmd->parsed()) return verify(o, out);
    if (conv_cmd->parsed()) return convergence(o, out);
    return check_eos(o, out);
  } catch (const ConfigError& e) {
    err << "error: invalid configuration\n";
    for (const auto& m : e.messages()) err << "  " << m << "\n";
    return kExitInput;
  } catch (const NumericalFailure& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace lgf
