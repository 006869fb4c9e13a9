#include "f3/subsystem.hpp"

#include "f3/numerics/fft.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace f3 {

LaplacianKind laplacian_from_string(const std::string& s) {
  if (s == "stencil2") return LaplacianKind::stencil2;
  if (s == "stencil4") return LaplacianKind::stencil4;
  if (s == "spectral") return LaplacianKind::spectral;
  throw config_error("unknown laplacian kind '" + s + "'");
}

std::string laplacian_to_string(LaplacianKind k) {
  switch (k) {
    case LaplacianKind::stencil2: return "stencil2";
    case LaplacianKind::stencil4: return "stencil4";
    case LaplacianKind::spectral: return "spectral";
  }
  return "?";
}

namespace {

std::vector<double> stencil_coefficients(LaplacianKind kind, double h) {
  // Positive Laplacian -d^2/ds^2.
  const double h2 = h * h;
  if (kind == LaplacianKind::stencil2) return {2.0 / h2, -1.0 / h2};
  if (kind == LaplacianKind::stencil4)
    return {30.0 / (12.0 * h2), -16.0 / (12.0 * h2), 1.0 / (12.0 * h2)};
  return {};
}

Eigen::MatrixXd dense_laplacian(const GridAxis& ax, LaplacianKind kind) {
  const int n = ax.count;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  if (kind == LaplacianKind::spectral) {
    // Circulant F^{-1} |xi|^2 F, assembled from the exact kernel.
    std::vector<double> kernel(n, 0.0);
    for (int d = 0; d < n; ++d) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double xi = ax.frequencies[k];
        acc += xi * xi * std::cos(2.0 * M_PI * k * d / n);
      }
      kernel[d] = acc / n;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lap(i, j) = kernel[(i - j + n) % n];
    lap = 0.5 * (lap + lap.transpose()).eval();
    return lap;
  }
  const auto c = stencil_coefficients(kind, ax.spacing);
  const int b = static_cast<int>(c.size()) - 1;
  for (int i = 0; i < n; ++i) {
    lap(i, i) = c[0];
    for (int d = 1; d <= b; ++d) {
      lap(i, (i + d) % n) += c[d];
      lap(i, (i - d + n) % n) += c[d];
    }
  }
  return lap;
}

double default_epsilon1(const Eigen::VectorXd& evals) {
  // Midpoint between the lowest eigenvalue and min(0, next eigenvalue).
  double lowest = evals(0);
  double next = 0.0;
  for (int k = 1; k < evals.size(); ++k) {
    if (evals(k) < 0.0) {
      next = evals(k);
      break;
    }
  }
  if (next >= 0.0) next = 0.0;
  return 0.5 * (lowest + std::min(0.0, next));
}

double fit_decay_rate(const Eigen::VectorXd& psi, const GridAxis& ax) {
  // Least-squares slope of log|psi| against |s| over the outer tail.
  const int n = ax.count;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  const double smax = 0.5 * ax.length;
  for (int i = 0; i < n; ++i) {
    const double s = std::abs(ax.nodes[i]);
    if (s < 0.55 * smax || s > 0.9 * smax) continue;
    const double a = std::abs(psi(i));
    if (a < 1e-300) continue;
    const double y = std::log(a);
    sx += s;
    sy += y;
    sxx += s * s;
    sxy += s * y;
    ++cnt;
  }
  if (cnt < 4) return 0.0;
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return -slope;
}

}  // namespace

SpectralData eigensolve_on_axis(const std::vector<double>& potential, const GridAxis& axis,
                                LaplacianKind kind) {
  const int n = axis.count;
  Eigen::MatrixXd h = dense_laplacian(axis, kind);
  for (int i = 0; i < n; ++i) h(i, i) += potential[i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw solver_error("subsystem eigensolve failed");

  SpectralData sd;
  sd.eigenvalues = es.eigenvalues();
  sd.eigenvectors = es.eigenvectors();
  sd.quad_weight = axis.spacing;
  sd.laplacian = kind;
  sd.stencil = stencil_coefficients(kind, axis.spacing);
  sd.potential = potential;
  return sd;
}

SpectralData eigensolve_subsystem(const PotentialSpec& va, const GridPair& grid,
                                  LaplacianKind kind, double truncation_tol) {
  if (grid.dim_xperp() != 1)
    throw config_error("eigensolve_subsystem currently requires a 1-D X^a grid");
  const GridAxis& ax = grid.xperp[0];

  if (va.amplitude != 0.0) {
    const double boundary = std::abs(va(0.5 * ax.length));
    if (boundary > truncation_tol * std::abs(va.amplitude)) {
      std::ostringstream os;
      os << "V_a exceeds truncation tolerance at the X^a box boundary ("
         << boundary / std::abs(va.amplitude) << " of peak)";
      throw config_error(os.str());
    }
  }

  std::vector<double> pot(ax.count);
  for (int i = 0; i < ax.count; ++i) pot[i] = va(std::abs(ax.nodes[i]));
  SpectralData sd = eigensolve_on_axis(pot, ax, kind);

  if (sd.eigenvalues(0) >= 0.0)
    throw solver_error("no bound state: subsystem Hamiltonian has no negative eigenvalue");

  sd.epsilon1 = default_epsilon1(sd.eigenvalues);
  auto [channels, cut] = channel_partition(sd, sd.epsilon1, grid);
  sd.epsilon0 = cut.epsilon0;
  sd.bound_channels = cut.bound;
  return sd;
}

Channel make_channel(const SpectralData& sd, int index, const GridPair& grid) {
  Channel ch;
  ch.index = index;
  ch.energy = sd.eigenvalues(index);
  ch.psi = sd.eigenvectors.col(index) / std::sqrt(sd.quad_weight);
  ch.decay_rate = fit_decay_rate(ch.psi, grid.xperp[0]);
  return ch;
}

std::pair<std::vector<Channel>, ChannelCut> channel_partition(const SpectralData& sd,
                                                              double epsilon1,
                                                              const GridPair& grid) {
  if (!(epsilon1 < 0.0)) throw config_error("epsilon1 must be negative");
  for (int k = 0; k < sd.n(); ++k)
    if (std::abs(sd.eigenvalues(k) - epsilon1) < 1e-9)
      throw config_error("epsilon1 coincides with an eigenvalue of H^a (excluded choice)");

  ChannelCut cut;
  cut.epsilon1 = epsilon1;
  cut.lambda_prime_a.push_back(0.0);
  for (int k = 0; k < sd.n(); ++k)
    if (sd.eigenvalues(k) < 0.0) cut.lambda_prime_a.push_back(sd.eigenvalues(k));
  std::sort(cut.lambda_prime_a.begin(), cut.lambda_prime_a.end());

  double eps0 = std::numeric_limits<double>::infinity();
  for (double t : cut.lambda_prime_a)
    if (t > epsilon1) eps0 = std::min(eps0, t);
  cut.epsilon0 = eps0;

  std::vector<Channel> channels;
  for (int k = 0; k < sd.n(); ++k) {
    if (sd.eigenvalues(k) <= epsilon1 && sd.eigenvalues(k) < 0.0) {
      cut.bound.push_back(k);
      channels.push_back(make_channel(sd, k, grid));
    }
  }
  return {channels, cut};
}

EffectiveInteraction effective_interaction(const Channel& ch, const RealField& ia,
                                           const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const double hp = grid.xperp_weight();

  EffectiveInteraction eff;
  eff.values.assign(na, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    double acc = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const double psi = ch.psi(static_cast<Eigen::Index>(p));
      acc += ia.values[i * np + p] * psi * psi;
    }
    eff.values[i] = acc * hp;
  }

  // Continuum-normalized DFT: V^(xi_k) = sum V(w) e^{-i xi_k w} h^m.
  std::vector<cplx> buf(na);
  for (std::size_t i = 0; i < na; ++i) buf[i] = eff.values[i];
  fft_xa_only_forward(buf, grid);
  const double ha = grid.xa_weight();
  eff.fourier.resize(na);
  for (std::size_t k = 0; k < na; ++k) eff.fourier[k] = buf[k] * ha * dual_phase(grid, k);
  return eff;
}

cplx effective_fourier_direct(const EffectiveInteraction& eff, const GridPair& grid,
                              const Eigen::VectorXd& zeta) {
  const std::size_t na = grid.xa_size();
  const int m = grid.dim_xa();
  std::vector<double> w(m);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    grid.xa_node(i, w.data());
    double phase = 0.0;
    for (int d = 0; d < m; ++d) phase += zeta(d) * w[d];
    acc += eff.values[i] * std::polar(1.0, -phase);
  }
  return acc * grid.xa_weight();
}

std::vector<double> full_thresholds(const ClusterGeometry& geom, const PotentialSpec& va,
                                    const std::vector<PotentialSpec>& vb, const GridPair& grid,
                                    LaplacianKind kind, const ThresholdOptions& opt) {
  std::set<double> acc;
  acc.insert(0.0);

  SpectralData sda = eigensolve_subsystem(va, grid, kind);
  for (int k = 0; k < sda.n(); ++k)
    if (sda.eigenvalues(k) < 0.0) acc.insert(sda.eigenvalues(k));

  for (std::size_t b = 0; b < vb.size(); ++b) {
    if (vb[b].amplitude == 0.0) continue;
    const int db = static_cast<int>(geom.others[b].proj.rows());
    if (db == 1) {
      GridSpec gs;
      gs.xa_lengths = {1.0};  // dummy X_a factor, unused
      gs.xa_counts = {8};
      gs.xperp_lengths = {opt.sibling_box_length};
      gs.xperp_counts = {opt.sibling_count_1d};
      GridPair gb = build_grids(gs);
      std::vector<double> pot(gb.xperp[0].count);
      for (int i = 0; i < gb.xperp[0].count; ++i) pot[i] = vb[b](std::abs(gb.xperp[0].nodes[i]));
      SpectralData sdb = eigensolve_on_axis(pot, gb.xperp[0], LaplacianKind::stencil4);
      for (int k = 0; k < sdb.n(); ++k)
        if (sdb.eigenvalues(k) < -opt.detect_tol) acc.insert(sdb.eigenvalues(k));
    } else if (db == 2) {
      // Coarse dense 2-D detection; weakly attractive 2-D wells bind only
      // at exponentially small energies that fall below detect_tol.
      const int n1 = opt.sibling_count_2d;
      const double len = 0.5 * opt.sibling_box_length;
      GridSpec gs;
      gs.xa_lengths = {1.0};
      gs.xa_counts = {8};
      gs.xperp_lengths = {len};
      gs.xperp_counts = {n1};
      GridPair gb = build_grids(gs);
      const GridAxis& ax = gb.xperp[0];
      Eigen::MatrixXd lap1 = Eigen::MatrixXd::Zero(n1, n1);
      {
        const auto c = stencil_coefficients(LaplacianKind::stencil4, ax.spacing);
        for (int i = 0; i < n1; ++i) {
          lap1(i, i) = c[0];
          for (int d = 1; d < static_cast<int>(c.size()); ++d) {
            lap1(i, (i + d) % n1) += c[d];
            lap1(i, (i - d + n1) % n1) += c[d];
          }
        }
      }
      const int nn = n1 * n1;
      if (nn <= 4096) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nn, nn);
        for (int i = 0; i < n1; ++i)
          for (int j = 0; j < n1; ++j) {
            const int row = i * n1 + j;
            for (int k = 0; k < n1; ++k) {
              h(row, k * n1 + j) += lap1(i, k);
              h(row, i * n1 + k) += lap1(j, k);
            }
            const double r = std::hypot(ax.nodes[i], ax.nodes[j]);
            h(row, row) += vb[b](r);
          }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        for (int k = 0; k < nn; ++k)
          if (es.eigenvalues()(k) < -opt.detect_tol) acc.insert(es.eigenvalues()(k));
      }
    }
    // d_b >= 3 siblings: weak wells there do not bind; nothing to add.
  }
  return std::vector<double>(acc.begin(), acc.end());
}

bool near_threshold(double lambda, const std::vector<double>& thresholds, double tol) {
  for (double t : thresholds)
    if (std::abs(lambda - t) <= tol) return true;
  return false;
}

}  // namespace f3
