#pragma once

/// @file config.hpp
/// @brief Run configuration: plain-text `key = value` lines with dotted
/// section prefixes, '#' comments, UTF-8.
///
/// Recognized keys (defaults in parentheses, "required" otherwise):
///
///   grid.dim, grid.N, grid.L                                  required
///   scheme.kind (spectral), scheme.dealias (true)
///   eos.a_l, eos.a_g, eos.rho_l0, eos.P_l0, eos.m_tilde, eos.n_tilde  required
///   visc.mu, visc.lambda                                      required
///   analysis.q (1.1), analysis.theta (0.5)
///   integrator.method (rk4), integrator.cfl (0.4), integrator.dt_max (1.0),
///   integrator.t_end (required), integrator.positivity_floor (1e-8)
///   ic.recipe (equilibrium), ic.<recipe parameter>
///   output.dir (out), output.record_every (10), output.snapshot_times (empty list)
///   seed (0)
///
/// Unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lgf/dynamics.hpp"

namespace lgf {

struct OutputConfig {
  std::string dir = "out";
  int record_every = 10;
  std::vector<double> snapshot_times;
};

struct SimConfig {
  Grid grid;
  Scheme scheme;
  EosParams eos;
  ViscosityParams visc;
  AnalysisParams analysis;
  IntegratorSettings integrator;
  IcConfig ic;
  OutputConfig output;
  std::uint64_t seed = 0;

  Model model() const { return {eos, visc}; }
};

/// Parses and validates; throws ConfigError listing every problem found.
SimConfig parse_config(std::string_view text);

/// Reads the file and parses it. ConfigError also covers unreadable files.
SimConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config (17 significant digits for reals).
std::string format_config(const SimConfig& cfg);

}  // namespace lgf
