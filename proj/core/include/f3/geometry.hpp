#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "f3/grids.hpp"

namespace f3 {

/// Radial potential profiles. All profiles are functions of |y| on the
/// cluster's internal space, scaled by amplitude and width.
enum class ProfileKind { gaussian, sech2, bump };

struct PotentialSpec {
  ProfileKind kind = ProfileKind::gaussian;
  double amplitude = 0.0;
  double width = 1.0;

  /// Profile value at radius r (amplitude included).
  double operator()(double r) const;
  /// Radius where |profile| first falls below frac*|amplitude|; used by
  /// truncation checks. Returns +inf for amplitude == 0 (never exceeds).
  double radius_at_fraction(double frac) const;
};

ProfileKind profile_from_string(const std::string& s);
std::string profile_to_string(ProfileKind k);

/// A sibling 2-cluster b != a. `proj` maps total coordinates w to the
/// internal coordinate w^b of the cluster; V_b lives on that space.
struct OtherCluster {
  std::string name;
  Eigen::MatrixXd proj;  // d_b x (dim_xa + dim_xperp)
  double decay_mu = 3.0;
};

struct ClusterGeometry {
  int dim_xa = 2;
  int dim_xperp = 1;
  std::vector<OtherCluster> others;

  int dim_total() const { return dim_xa + dim_xperp; }
};

struct GeometryCheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<double> min_singular_value_on_xa;  // per sibling
};

/// Structural invariants: dim X_a >= 2, full row rank of each proj, and
/// injectivity of proj restricted to the X_a block (X_a and X_b meet only
/// at the origin). Rank decisions by singular values.
GeometryCheckReport check_geometry(const ClusterGeometry& geom, double sv_tol = 1e-10);

/// Inradius of the image of the grid box under `proj` (a centrally
/// symmetric zonotope). The potential seen through the projection must
/// fall below the truncation tolerance at this radius, otherwise the
/// periodic identification cuts through non-negligible values.
double projected_box_inradius(const Eigen::MatrixXd& proj, const GridPair& grid);

/// I_a(w) = sum_b V_b(proj_b w) sampled on the product grid.
/// Throws config_error if any |V_b| exceeds tol*|amplitude| at the
/// boundary of the projected box.
RealField assemble_intercluster(const ClusterGeometry& geom,
                                const std::vector<PotentialSpec>& vb,
                                const GridPair& grid,
                                double truncation_tol = 1e-10);

/// Grid maximum of <w_a>^mu <w^a>^(-mu) |I_a|; the empirical constant in
/// the intercluster decay estimate.
double ia_decay_constant(const RealField& ia, double mu, const GridPair& grid);

}  // namespace f3
