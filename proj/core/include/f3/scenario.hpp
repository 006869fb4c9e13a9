#pragma once

#include <cstdint>
#include <string>

#include "f3/reconstruction.hpp"

namespace f3 {

struct ScenarioConfig {
  int schema_version = 1;
  std::uint64_t seed = 20259;

  ClusterGeometry geometry;
  GridSpec grids;

  PotentialSpec va;
  std::vector<PotentialSpec> siblings;  // aligned with geometry.others
  double delta_scale = 1.0;

  int incident_channel = 0;
  double epsilon1 = 0.0;  // scenario-level channel cut

  LaplacianKind laplacian = LaplacianKind::stencil4;
  double truncation_tol_potential = 1e-10;
  double truncation_tol_channel = 1e-6;

  SolveOptions solve;
  int n_nodes = 16;

  double interval_lo = 0.0, interval_hi = 0.0;
  int zeta_rings = 3;
  int zeta_per_ring = 6;
  double ring_cap = 0.8;
  int z_samples = 24;
  std::string mode = "full";

  int threads = 0;  // 0 = hardware concurrency

  std::vector<PotentialSpec> scaled_siblings() const {
    std::vector<PotentialSpec> out = siblings;
    for (auto& s : out) s.amplitude *= delta_scale;
    return out;
  }
};

ScenarioConfig parse_scenario(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin = "<text>");
std::string serialize_scenario(const ScenarioConfig& cfg);

/// FNV-1a hash of the canonical (sorted-key) serialization; stable under
/// key reordering in the input file.
std::string scenario_hash(const ScenarioConfig& cfg);

/// The bundled default scenario (matches scenarios/default_scenario.json).
ScenarioConfig default_scenario();

/// Assembled working state shared by the CLI subcommands.
struct Workspace {
  ScenarioConfig cfg;
  GridPair grid;
  RealField ia;
  SpectralData sd;
  ChannelCut cut;
  std::vector<Channel> channels;
  std::vector<double> lambda_prime;
  EffectiveInteraction effective;
};

Workspace build_workspace(const ScenarioConfig& cfg);

}  // namespace f3
