#include "f3/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace f3 {

double PotentialSpec::operator()(double r) const {
  const double u = r / width;
  switch (kind) {
    case ProfileKind::gaussian:
      return amplitude * std::exp(-0.5 * u * u);
    case ProfileKind::sech2: {
      const double c = std::cosh(u);
      return amplitude / (c * c);
    }
    case ProfileKind::bump:
      // Compactly supported on |y| < width.
      if (u >= 1.0) return 0.0;
      return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  return 0.0;
}

double PotentialSpec::radius_at_fraction(double frac) const {
  if (amplitude == 0.0) return std::numeric_limits<double>::infinity();
  switch (kind) {
    case ProfileKind::gaussian:
      return width * std::sqrt(-2.0 * std::log(frac));
    case ProfileKind::sech2:
      // sech^2(u) ~ 4 exp(-2u)
      return width * 0.5 * std::log(4.0 / frac);
    case ProfileKind::bump:
      return width;
  }
  return 0.0;
}

ProfileKind profile_from_string(const std::string& s) {
  if (s == "gaussian") return ProfileKind::gaussian;
  if (s == "sech2") return ProfileKind::sech2;
  if (s == "bump") return ProfileKind::bump;
  throw config_error("unknown potential profile '" + s + "'");
}

std::string profile_to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::sech2: return "sech2";
    case ProfileKind::bump: return "bump";
  }
  return "?";
}

GeometryCheckReport check_geometry(const ClusterGeometry& geom, double sv_tol) {
  GeometryCheckReport rep;
  if (geom.dim_xa < 2) {
    rep.ok = false;
    rep.failures.push_back("dim X_a must be >= 2");
  }
  if (geom.dim_xperp < 1) {
    rep.ok = false;
    rep.failures.push_back("dim X^a must be >= 1");
  }
  const int n = geom.dim_total();
  for (const auto& oc : geom.others) {
    if (oc.proj.cols() != n) {
      rep.ok = false;
      rep.failures.push_back("cluster " + oc.name + ": proj has wrong column count");
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_full(oc.proj);
    if (svd_full.singularValues().minCoeff() <= sv_tol) {
      rep.ok = false;
      rep.failures.push_back("cluster " + oc.name + ": proj not full row rank");
    }
    // proj restricted to the X_a coordinate block; injectivity there
    // encodes X_a meeting X_b only at the origin.
    Eigen::MatrixXd on_xa = oc.proj.leftCols(geom.dim_xa);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_xa(on_xa);
    const double smin = (on_xa.rows() >= geom.dim_xa)
                            ? svd_xa.singularValues()(geom.dim_xa - 1)
                            : 0.0;
    rep.min_singular_value_on_xa.push_back(smin);
    if (smin <= sv_tol) {
      rep.ok = false;
      rep.failures.push_back("cluster " + oc.name + ": proj restricted to X_a is singular");
    }
    if (!(oc.decay_mu > 0.0)) {
      rep.ok = false;
      rep.failures.push_back("cluster " + oc.name + ": decay_mu must be positive");
    }
  }
  return rep;
}

double projected_box_inradius(const Eigen::MatrixXd& proj, const GridPair& grid) {
  const int n = static_cast<int>(proj.cols());
  const int d = static_cast<int>(proj.rows());
  std::vector<double> half_lengths;
  for (const auto& ax : grid.xa) half_lengths.push_back(0.5 * ax.length);
  for (const auto& ax : grid.xperp) half_lengths.push_back(0.5 * ax.length);

  // Zonotope generators: columns of proj scaled by half box lengths.
  Eigen::MatrixXd gen(d, n);
  for (int j = 0; j < n; ++j) gen.col(j) = proj.col(j) * half_lengths[j];

  auto support = [&](const Eigen::VectorXd& dir) {
    double h = 0.0;
    for (int j = 0; j < n; ++j) h += std::abs(dir.dot(gen.col(j)));
    return h;
  };

  double inr = std::numeric_limits<double>::infinity();
  if (d == 1) {
    Eigen::VectorXd e(1);
    e << 1.0;
    return support(e);
  }
  if (d == 2) {
    // Facet normals of a planar zonotope are perpendicular to generators.
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd g = gen.col(j);
      if (g.norm() < 1e-14) continue;
      Eigen::VectorXd nvec(2);
      nvec << -g(1), g(0);
      nvec /= nvec.norm();
      inr = std::min(inr, support(nvec));
    }
    return inr;
  }
  if (d == 3) {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Eigen::Vector3d a = gen.col(j), b = gen.col(k);
        Eigen::Vector3d nvec = a.cross(b);
        if (nvec.norm() < 1e-14) continue;
        nvec /= nvec.norm();
        inr = std::min(inr, support(nvec));
      }
    return inr;
  }
  // Fallback for higher d: sampled directions (not used by the default
  // geometries, which have d_b <= 3).
  std::srand(12345);
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd dir = Eigen::VectorXd::Random(d);
    if (dir.norm() < 1e-12) continue;
    dir /= dir.norm();
    inr = std::min(inr, support(dir));
  }
  return inr;
}

RealField assemble_intercluster(const ClusterGeometry& geom,
                                const std::vector<PotentialSpec>& vb,
                                const GridPair& grid,
                                double truncation_tol) {
  if (vb.size() != geom.others.size())
    throw config_error("assemble_intercluster: one potential spec per sibling cluster required");

  // Truncation check: the potential, seen through the projection, must be
  // below tolerance at the boundary of the projected box.
  for (std::size_t b = 0; b < vb.size(); ++b) {
    if (vb[b].amplitude == 0.0) continue;
    const double inr = projected_box_inradius(geom.others[b].proj, grid);
    const double boundary = std::abs(vb[b](inr));
    if (boundary > truncation_tol * std::abs(vb[b].amplitude)) {
      std::ostringstream os;
      os << "potential for cluster " << geom.others[b].name
         << " exceeds truncation tolerance at the box boundary ("
         << boundary / std::abs(vb[b].amplitude) << " of peak at projected inradius " << inr
         << "); periodic wrap-around would corrupt decay";
      throw config_error(os.str());
    }
  }

  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const int ma = grid.dim_xa();
  const int mp = grid.dim_xperp();
  const int n = ma + mp;

  RealField out(na * np);
  std::vector<double> w(n);
  for (std::size_t ia = 0; ia < na; ++ia) {
    grid.xa_node(ia, w.data());
    for (std::size_t ip = 0; ip < np; ++ip) {
      grid.xperp_node(ip, w.data() + ma);
      double val = 0.0;
      for (std::size_t b = 0; b < vb.size(); ++b) {
        if (vb[b].amplitude == 0.0) continue;
        const auto& P = geom.others[b].proj;
        double r2 = 0.0;
        for (int row = 0; row < P.rows(); ++row) {
          double y = 0.0;
          for (int col = 0; col < n; ++col) y += P(row, col) * w[col];
          r2 += y * y;
        }
        val += vb[b](std::sqrt(r2));
      }
      out.values[ia * np + ip] = val;
    }
  }
  return out;
}

double ia_decay_constant(const RealField& ia, double mu, const GridPair& grid) {
  if (!(mu > 0.0)) throw config_error("ia_decay_constant: mu must be positive");
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const int ma = grid.dim_xa();
  const int mp = grid.dim_xperp();

  std::vector<double> wa(ma), wp(mp);
  double best = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    grid.xa_node(i, wa.data());
    double ra2 = 0.0;
    for (int d = 0; d < ma; ++d) ra2 += wa[d] * wa[d];
    const double weight_a = std::pow(1.0 + ra2, 0.5 * mu);
    for (std::size_t p = 0; p < np; ++p) {
      grid.xperp_node(p, wp.data());
      double rp2 = 0.0;
      for (int d = 0; d < mp; ++d) rp2 += wp[d] * wp[d];
      const double weight_p = std::pow(1.0 + rp2, -0.5 * mu);
      const double cand = weight_a * weight_p * std::abs(ia.values[i * np + p]);
      if (cand > best) best = cand;
    }
  }
  return best;
}

}  // namespace f3
