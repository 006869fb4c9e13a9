#include "f3/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace f3 {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw config_error("scenario: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
}

const json& need(const json& j, const std::string& path, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing key '" + key + "'");
  return *it;
}

PotentialSpec parse_potential(const json& j, const std::string& path) {
  check_keys(j, path, {"profile", "amplitude", "width"});
  PotentialSpec p;
  p.kind = profile_from_string(need(j, path, "profile").get<std::string>());
  p.amplitude = need(j, path, "amplitude").get<double>();
  p.width = need(j, path, "width").get<double>();
  if (!(p.width > 0.0)) fail(path, "width must be positive");
  return p;
}

json potential_json(const PotentialSpec& p) {
  return json{{"profile", profile_to_string(p.kind)},
              {"amplitude", p.amplitude},
              {"width", p.width}};
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw config_error("scenario: " + origin + ": invalid JSON: " + e.what());
  }

  check_keys(j, origin,
             {"schema_version", "seed", "geometry", "grids", "potentials", "channel",
              "solver", "scattering", "reconstruction", "threads"});

  ScenarioConfig cfg;
  cfg.schema_version = need(j, origin, "schema_version").get<int>();
  if (cfg.schema_version != 1)
    fail(origin, "schema version mismatch: expected 1, got " +
                     std::to_string(cfg.schema_version));
  cfg.seed = j.value("seed", cfg.seed);

  {
    const json& g = need(j, origin, "geometry");
    check_keys(g, "geometry", {"dim_xa", "dim_xperp", "others"});
    cfg.geometry.dim_xa = need(g, "geometry", "dim_xa").get<int>();
    cfg.geometry.dim_xperp = need(g, "geometry", "dim_xperp").get<int>();
    for (const auto& oc : need(g, "geometry", "others")) {
      check_keys(oc, "geometry.others[]", {"name", "proj", "decay_mu"});
      OtherCluster c;
      c.name = need(oc, "geometry.others[]", "name").get<std::string>();
      const auto& rows = need(oc, "geometry.others[]", "proj");
      const int ncols = cfg.geometry.dim_total();
      c.proj.resize(rows.size(), ncols);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != ncols)
          fail("geometry.others[].proj", "row has wrong length");
        for (int cidx = 0; cidx < ncols; ++cidx) c.proj(r, cidx) = rows[r][cidx].get<double>();
      }
      c.decay_mu = need(oc, "geometry.others[]", "decay_mu").get<double>();
      cfg.geometry.others.push_back(std::move(c));
    }
    auto rep = check_geometry(cfg.geometry);
    if (!rep.ok) fail("geometry", rep.failures.front());
  }

  {
    const json& g = need(j, origin, "grids");
    check_keys(g, "grids", {"xa_lengths", "xa_counts", "xperp_lengths", "xperp_counts"});
    cfg.grids.xa_lengths = need(g, "grids", "xa_lengths").get<std::vector<double>>();
    cfg.grids.xa_counts = need(g, "grids", "xa_counts").get<std::vector<int>>();
    cfg.grids.xperp_lengths = need(g, "grids", "xperp_lengths").get<std::vector<double>>();
    cfg.grids.xperp_counts = need(g, "grids", "xperp_counts").get<std::vector<int>>();
  }

  {
    const json& p = need(j, origin, "potentials");
    check_keys(p, "potentials", {"va", "siblings", "delta_scale"});
    cfg.va = parse_potential(need(p, "potentials", "va"), "potentials.va");
    const auto& sib = need(p, "potentials", "siblings");
    if (sib.size() != cfg.geometry.others.size())
      fail("potentials.siblings", "one potential per sibling cluster required");
    for (std::size_t i = 0; i < sib.size(); ++i) {
      check_keys(sib[i], "potentials.siblings[]", {"cluster", "profile", "amplitude", "width"});
      PotentialSpec ps;
      ps.kind = profile_from_string(
          need(sib[i], "potentials.siblings[]", "profile").get<std::string>());
      ps.amplitude = need(sib[i], "potentials.siblings[]", "amplitude").get<double>();
      ps.width = need(sib[i], "potentials.siblings[]", "width").get<double>();
      const std::string cluster =
          need(sib[i], "potentials.siblings[]", "cluster").get<std::string>();
      if (cluster != cfg.geometry.others[i].name)
        fail("potentials.siblings[]", "cluster name '" + cluster +
                                          "' does not match geometry order");
      cfg.siblings.push_back(ps);
    }
    cfg.delta_scale = need(p, "potentials", "delta_scale").get<double>();
    if (cfg.delta_scale < 0.0) fail("potentials.delta_scale", "negative interaction scale");
  }

  {
    const json& c = need(j, origin, "channel");
    check_keys(c, "channel", {"incident", "epsilon1"});
    cfg.incident_channel = need(c, "channel", "incident").get<int>();
    cfg.epsilon1 = need(c, "channel", "epsilon1").get<double>();
  }

  {
    const json& s = need(j, origin, "solver");
    check_keys(s, "solver",
               {"laplacian", "fixed_point_tol", "max_iterations", "eta_schedule",
                "spread_tol", "truncation_tol_potential", "truncation_tol_channel"});
    cfg.laplacian = laplacian_from_string(need(s, "solver", "laplacian").get<std::string>());
    cfg.solve.tol = need(s, "solver", "fixed_point_tol").get<double>();
    cfg.solve.max_iterations = need(s, "solver", "max_iterations").get<int>();
    cfg.solve.eta_schedule = need(s, "solver", "eta_schedule").get<std::vector<double>>();
    cfg.solve.spread_tol = need(s, "solver", "spread_tol").get<double>();
    cfg.truncation_tol_potential = need(s, "solver", "truncation_tol_potential").get<double>();
    cfg.truncation_tol_channel = need(s, "solver", "truncation_tol_channel").get<double>();
  }

  {
    const json& s = need(j, origin, "scattering");
    check_keys(s, "scattering", {"n_nodes"});
    cfg.n_nodes = need(s, "scattering", "n_nodes").get<int>();
  }

  {
    const json& r = need(j, origin, "reconstruction");
    check_keys(r, "reconstruction",
               {"interval", "zeta_rings", "zeta_per_ring", "ring_cap", "z_samples", "mode"});
    const auto& iv = need(r, "reconstruction", "interval");
    if (iv.size() != 2) fail("reconstruction.interval", "expected [lo, hi]");
    cfg.interval_lo = iv[0].get<double>();
    cfg.interval_hi = iv[1].get<double>();
    cfg.zeta_rings = need(r, "reconstruction", "zeta_rings").get<int>();
    cfg.zeta_per_ring = need(r, "reconstruction", "zeta_per_ring").get<int>();
    cfg.ring_cap = need(r, "reconstruction", "ring_cap").get<double>();
    cfg.z_samples = need(r, "reconstruction", "z_samples").get<int>();
    cfg.mode = need(r, "reconstruction", "mode").get<std::string>();
    if (cfg.mode != "full" && cfg.mode != "near_forward")
      fail("reconstruction.mode", "expected 'full' or 'near_forward'");
  }

  cfg.threads = j.value("threads", 0);
  return cfg;
}

ScenarioConfig parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("scenario: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["seed"] = cfg.seed;
  json others = json::array();
  for (const auto& oc : cfg.geometry.others) {
    json rows = json::array();
    for (int r = 0; r < oc.proj.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < oc.proj.cols(); ++c) row.push_back(oc.proj(r, c));
      rows.push_back(row);
    }
    others.push_back(json{{"name", oc.name}, {"proj", rows}, {"decay_mu", oc.decay_mu}});
  }
  j["geometry"] = json{{"dim_xa", cfg.geometry.dim_xa},
                       {"dim_xperp", cfg.geometry.dim_xperp},
                       {"others", others}};
  j["grids"] = json{{"xa_lengths", cfg.grids.xa_lengths},
                    {"xa_counts", cfg.grids.xa_counts},
                    {"xperp_lengths", cfg.grids.xperp_lengths},
                    {"xperp_counts", cfg.grids.xperp_counts}};
  json sib = json::array();
  for (std::size_t i = 0; i < cfg.siblings.size(); ++i) {
    json s = potential_json(cfg.siblings[i]);
    s["cluster"] = cfg.geometry.others[i].name;
    sib.push_back(s);
  }
  j["potentials"] = json{{"va", potential_json(cfg.va)},
                         {"siblings", sib},
                         {"delta_scale", cfg.delta_scale}};
  j["channel"] = json{{"incident", cfg.incident_channel}, {"epsilon1", cfg.epsilon1}};
  j["solver"] = json{{"laplacian", laplacian_to_string(cfg.laplacian)},
                     {"fixed_point_tol", cfg.solve.tol},
                     {"max_iterations", cfg.solve.max_iterations},
                     {"eta_schedule", cfg.solve.eta_schedule},
                     {"spread_tol", cfg.solve.spread_tol},
                     {"truncation_tol_potential", cfg.truncation_tol_potential},
                     {"truncation_tol_channel", cfg.truncation_tol_channel}};
  j["scattering"] = json{{"n_nodes", cfg.n_nodes}};
  j["reconstruction"] = json{{"interval", {cfg.interval_lo, cfg.interval_hi}},
                             {"zeta_rings", cfg.zeta_rings},
                             {"zeta_per_ring", cfg.zeta_per_ring},
                             {"ring_cap", cfg.ring_cap},
                             {"z_samples", cfg.z_samples},
                             {"mode", cfg.mode}};
  j["threads"] = cfg.threads;
  return j.dump(2);
}

std::string scenario_hash(const ScenarioConfig& cfg) {
  const std::string canon = serialize_scenario(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.seed = 20259;
  cfg.geometry.dim_xa = 2;
  cfg.geometry.dim_xperp = 1;
  const double s25 = std::sin(25.0 * M_PI / 180.0);
  const double c25 = std::cos(25.0 * M_PI / 180.0);
  {
    OtherCluster b;
    b.name = "b";
    b.proj.resize(2, 3);
    b.proj << c25, 0.0, -s25, 0.0, 1.0, 0.0;
    b.decay_mu = 3.0;
    cfg.geometry.others.push_back(b);
    OtherCluster c;
    c.name = "c";
    c.proj.resize(2, 3);
    c.proj << 0.0, c25, -s25, 1.0, 0.0, 0.0;
    c.decay_mu = 3.0;
    cfg.geometry.others.push_back(c);
  }
  cfg.grids.xa_lengths = {20.0, 20.0};
  cfg.grids.xa_counts = {48, 48};
  cfg.grids.xperp_lengths = {30.0};
  cfg.grids.xperp_counts = {256};

  cfg.va = PotentialSpec{ProfileKind::sech2, -6.0, 1.0};
  cfg.siblings = {PotentialSpec{ProfileKind::gaussian, -1.0, 1.0},
                  PotentialSpec{ProfileKind::gaussian, -1.0, 1.0}};
  cfg.delta_scale = 0.05;

  cfg.incident_channel = 0;
  cfg.epsilon1 = -1.375;
  cfg.laplacian = LaplacianKind::stencil4;
  cfg.solve.tol = 1e-10;
  cfg.solve.max_iterations = 200;
  cfg.solve.eta_schedule = {0.02, 0.01, 0.005};
  cfg.solve.spread_tol = 5e-2;
  cfg.truncation_tol_potential = 1e-10;
  cfg.truncation_tol_channel = 1e-6;
  cfg.n_nodes = 16;
  cfg.interval_lo = -3.3;
  cfg.interval_hi = -3.0;
  cfg.zeta_rings = 3;
  cfg.zeta_per_ring = 6;
  cfg.ring_cap = 0.8;
  cfg.z_samples = 24;
  cfg.mode = "full";
  cfg.threads = 0;
  return cfg;
}

Workspace build_workspace(const ScenarioConfig& cfg) {
  Workspace ws;
  ws.cfg = cfg;
  ws.grid = build_grids(cfg.grids);
  ws.ia = assemble_intercluster(cfg.geometry, cfg.scaled_siblings(), ws.grid,
                                cfg.truncation_tol_potential);
  ws.sd = eigensolve_subsystem(cfg.va, ws.grid, cfg.laplacian, cfg.truncation_tol_potential);
  const double eps1 = cfg.epsilon1 != 0.0 ? cfg.epsilon1 : ws.sd.epsilon1;
  auto [channels, cut] = channel_partition(ws.sd, eps1, ws.grid);
  ws.channels = channels;
  ws.cut = cut;
  if (cfg.incident_channel < 0 ||
      cfg.incident_channel >= static_cast<int>(ws.sd.eigenvalues.size()) ||
      ws.sd.eigenvalues(cfg.incident_channel) >= 0.0)
    throw config_error("scenario: incident channel is not a bound state");
  ws.lambda_prime = full_thresholds(cfg.geometry, cfg.va, cfg.scaled_siblings(), ws.grid,
                                    cfg.laplacian);
  Channel incident = make_channel(ws.sd, cfg.incident_channel, ws.grid);
  ws.effective = effective_interaction(incident, ws.ia, ws.grid);
  return ws;
}

}  // namespace f3
