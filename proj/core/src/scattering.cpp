#include "f3/scattering.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "f3/numerics/parallel.hpp"

namespace f3 {

namespace {

std::vector<int> open_channels_at(double lambda, const SpectralData& sd,
                                  const ChannelCut& cut) {
  std::vector<int> open;
  for (int k : cut.bound)
    if (lambda > sd.eigenvalues(k)) open.push_back(k);
  return open;
}

struct RowIndex {
  std::vector<int> offset;  // per channel position
  int total = 0;
};

RowIndex row_index(const std::vector<CircleGrid>& circles) {
  RowIndex idx;
  int acc = 0;
  for (const auto& c : circles) {
    idx.offset.push_back(acc);
    acc += c.size();
  }
  idx.total = acc;
  return idx;
}

double spectral_norm_estimate(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double condition_estimate(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace

PairingDataSet generate_pairing_data(double lambda, int incident_channel,
                                     const Eigen::VectorXd& nu_plan, double cut_level,
                                     const std::vector<Eigen::VectorXd>& extra_outgoing,
                                     const RealField& ia, const SpectralData& sd,
                                     const ChannelCut& cut, const GridPair& grid,
                                     const PairingGenOptions& opt,
                                     std::vector<std::vector<Field>>* warm_bank) {
  PairingDataSet data;
  data.lambda = lambda;
  data.open_channels = open_channels_at(lambda, sd, cut);
  if (data.open_channels.empty())
    throw config_error("generate_pairing_data: no open channel at this energy");

  for (int c : data.open_channels)
    data.circles.push_back(
        circle_grid(lambda, sd.eigenvalues(c), opt.n_nodes, nu_plan, cut_level));
  data.extra_outgoing = extra_outgoing;

  const int nch = static_cast<int>(data.open_channels.size());
  data.incoming.resize(nch);
  if (warm_bank && warm_bank->size() != static_cast<std::size_t>(nch)) {
    warm_bank->assign(nch, {});
  }

  struct Item {
    int cpos;
    int node;
  };
  std::vector<Item> items;
  for (int cpos = 0; cpos < nch; ++cpos) {
    data.incoming[cpos].channel = data.open_channels[cpos];
    const int n = data.circles[cpos].size();
    data.incoming[cpos].nu.resize(n);
    data.incoming[cpos].g.assign(
        n, std::vector<std::vector<cplx>>(nch, std::vector<cplx>()));
    if (warm_bank && (*warm_bank)[cpos].size() != static_cast<std::size_t>(n))
      (*warm_bank)[cpos].assign(n, Field());
    for (int j = 0; j < n; ++j) items.push_back({cpos, j});
  }

  std::vector<double> residuals(items.size(), 0.0), contractions(items.size(), 0.0);
  std::vector<int> iters(items.size(), 0);

  parallel_for(items.size(), opt.threads, [&](std::size_t it) {
    const int cpos = items[it].cpos;
    const int j = items[it].node;
    const int chan = data.open_channels[cpos];
    const CircleGrid& circ = data.circles[cpos];
    const Eigen::VectorXd rho_node = circ.nodes[j];

    NodeDecomposition dec = decompose_on_circle(rho_node, opt.rho_perp_mag);
    ComplexMomentum mom = momentum(cplx(dec.z, 0.0), dec.nu, dec.rho_perp, sd, cut, chan);
    data.incoming[cpos].nu[j] = dec.nu;

    const Field* warm = nullptr;
    if (warm_bank && (*warm_bank)[cpos][j].size() == grid.total_size())
      warm = &(*warm_bank)[cpos][j];
    RemainderSolution sol = solve_remainder(mom, ia, sd, cut, grid, opt.solve, warm);
    if (warm_bank) {
      // the remainder itself is a serviceable warm start for nearby energies
      Field w(grid.total_size(), Gauge::plane_wave_removed);
      for (std::size_t t = 0; t < w.size(); ++t) w.values[t] = -sol.v.values[t];
      (*warm_bank)[cpos][j] = std::move(w);
    }
    residuals[it] = sol.residual;
    contractions[it] = sol.contraction_estimate;
    iters[it] = sol.iterations;

    const Eigen::VectorXd re_rho = rho_node;
    for (int opos = 0; opos < nch; ++opos) {
      const int ochan = data.open_channels[opos];
      std::vector<cplx> profile = pairing_profile(sol, ia, sd, ochan, grid);
      std::vector<cplx>& row = data.incoming[cpos].g[j][opos];
      const CircleGrid& out = data.circles[opos];
      row.reserve(out.size() + static_cast<int>(data.extra_outgoing.size()));
      for (int q = 0; q < out.size(); ++q) {
        Eigen::VectorXd zeta = out.nodes[q] - re_rho;
        row.push_back(pairing_from_profile(profile, zeta, grid));
      }
      for (const auto& pt : data.extra_outgoing) {
        Eigen::VectorXd zeta = pt - re_rho;
        row.push_back(pairing_from_profile(profile, zeta, grid));
      }
    }
  });

  for (std::size_t it = 0; it < items.size(); ++it) {
    data.max_residual = std::max(data.max_residual, residuals[it]);
    data.max_contraction = std::max(data.max_contraction, contractions[it]);
    data.total_iterations += iters[it];
  }
  return data;
}

ForwardResult forward_smatrix(const PairingDataSet& data) {
  const int nch = static_cast<int>(data.open_channels.size());
  const RowIndex idx = row_index(data.circles);
  const int n = idx.total;
  const int nextra = static_cast<int>(data.extra_outgoing.size());

  // K_{(c,i),(c',j)} = i/(2 sqrt(lambda - eps_{c'})) w_j H(nu_i . (rho'_j - rho_i))
  //                    G_{c c'}(rho_i, rho'_j)
  Eigen::MatrixXcd K(n, n);
  for (int c = 0; c < nch; ++c) {
    const CircleGrid& in = data.circles[c];
    for (int i = 0; i < in.size(); ++i) {
      const int row = idx.offset[c] + i;
      const Eigen::VectorXd& nu_i = data.incoming[c].nu[i];
      const Eigen::VectorXd& rho_i = in.nodes[i];
      const double cut_i = nu_i.dot(rho_i);
      for (int cp = 0; cp < nch; ++cp) {
        const CircleGrid& out = data.circles[cp];
        const cplx factor =
            cplx(0.0, 1.0) / (2.0 * std::sqrt(data.lambda - out.channel_energy));
        for (int j = 0; j < out.size(); ++j) {
          const double t = nu_i.dot(out.nodes[j]) - cut_i;
          const double mask = std::abs(t) <= 1e-12 * std::max(1.0, out.radius)
                                  ? 0.5
                                  : (t > 0.0 ? 1.0 : 0.0);
          cplx val(0.0, 0.0);
          if (mask != 0.0)
            val = factor * out.weights[j] * mask * data.incoming[c].g[i][cp][j];
          K(row, idx.offset[cp] + j) = val;
        }
      }
    }
  }

  ForwardResult res;
  res.kernel_norm = spectral_norm_estimate(K);
  if (res.kernel_norm >= 0.9) {
    std::ostringstream os;
    os << "forward_smatrix: kernel too large (norm " << res.kernel_norm
       << "); outside the small-interaction regime";
    throw solver_error(os.str());
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) + K;
  res.condition_number = condition_estimate(A);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);  // shared by every outgoing point

  std::vector<SMatrixKernel> kernels;
  for (int cin = 0; cin < nch; ++cin)
    for (int cout = 0; cout < nch; ++cout) {
      SMatrixKernel k;
      k.lambda = data.lambda;
      k.channel_in = data.open_channels[cin];
      k.channel_out = data.open_channels[cout];
      k.node_values.resize(data.circles[cin].size(), data.circles[cout].size());
      k.extra_values.resize(data.circles[cin].size(), nextra);
      kernels.push_back(std::move(k));
    }
  auto kernel_at = [&](int cin, int cout) -> SMatrixKernel& {
    return kernels[cin * nch + cout];
  };

  for (int cout = 0; cout < nch; ++cout) {
    const int nout = data.circles[cout].size();
    for (int jo = 0; jo < nout + nextra; ++jo) {
      Eigen::VectorXcd gvec(n);
      for (int c = 0; c < nch; ++c)
        for (int i = 0; i < data.circles[c].size(); ++i)
          gvec(idx.offset[c] + i) = data.incoming[c].g[i][cout][jo];
      Eigen::VectorXcd s = lu.solve(gvec);
      for (int cp = 0; cp < nch; ++cp)
        for (int j = 0; j < data.circles[cp].size(); ++j) {
          if (jo < nout)
            kernel_at(cp, cout).node_values(j, jo) = s(idx.offset[cp] + j);
          else
            kernel_at(cp, cout).extra_values(j, jo - nout) = s(idx.offset[cp] + j);
        }
    }
  }
  return res;
}

namespace {

InvertResult invert_impl(const std::vector<SMatrixKernel>& kernels,
                         const std::vector<CircleGrid>& circles,
                         const std::vector<Eigen::VectorXd>& extra_outgoing,
                         const ComplexMomentum& mom, double lambda, double cond_limit,
                         bool near_forward) {
  const int nch = static_cast<int>(circles.size());
  const RowIndex idx = row_index(circles);
  const int n = idx.total;
  const int nextra = static_cast<int>(extra_outgoing.size());

  if (kernels.size() != static_cast<std::size_t>(nch) * nch)
    throw config_error("invert_smatrix: kernel count does not match the channel circles");
  auto kernel_at = [&](int cin, int cout) -> const SMatrixKernel& {
    return kernels[cin * nch + cout];
  };

  const Eigen::VectorXd re_rho = mom.re_rho();
  const Eigen::VectorXd& nu = mom.nu;
  const double cut_level = nu.dot(re_rho);

  // Incident circle: channel of mom; locate Re rho among its nodes.
  int cpos_alpha = -1;
  for (int c = 0; c < nch; ++c)
    if (kernels[c * nch].channel_in == mom.incident_channel) cpos_alpha = c;
  if (cpos_alpha < 0) throw config_error("invert_smatrix: incident channel has no kernel");
  const int i_alpha = circles[cpos_alpha].find_node(re_rho, 1e-9 * (1.0 + re_rho.norm()));
  if (i_alpha < 0)
    throw config_error("invert_smatrix: Re rho is not a node of the incident circle");

  // Column mask H(nu . (rho'_j - Re rho)) and near-forward arc selection.
  std::vector<double> mask(n, 0.0);
  std::vector<char> arc(n, 1);
  for (int c = 0; c < nch; ++c)
    for (int j = 0; j < circles[c].size(); ++j) {
      const double t = nu.dot(circles[c].nodes[j]) - cut_level;
      const int col = idx.offset[c] + j;
      mask[col] = std::abs(t) <= 1e-12 * std::max(1.0, circles[c].radius)
                      ? 0.5
                      : (t > 0.0 ? 1.0 : 0.0);
      arc[col] = mask[col] > 0.0 ? 1 : 0;
    }

  bool siblings_excluded = true;
  for (int c = 0; c < nch; ++c) {
    if (c == cpos_alpha) continue;
    for (int j = 0; j < circles[c].size(); ++j)
      if (mask[idx.offset[c] + j] > 0.0) siblings_excluded = false;
  }

  // T_{(c'',j''),(c',j')} = i/(2 sqrt(lambda-eps_{c'})) w_{j'} H(...)
  //                         S#_{c' c''}(rho'_{j'}, omega''_{j''})
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  for (int cpp = 0; cpp < nch; ++cpp)
    for (int jpp = 0; jpp < circles[cpp].size(); ++jpp) {
      const int row = idx.offset[cpp] + jpp;
      for (int cp = 0; cp < nch; ++cp) {
        const cplx factor =
            cplx(0.0, 1.0) / (2.0 * std::sqrt(lambda - circles[cp].channel_energy));
        const auto& ker = kernel_at(cp, cpp);
        for (int jp = 0; jp < circles[cp].size(); ++jp) {
          const int col = idx.offset[cp] + jp;
          if (mask[col] == 0.0) continue;
          T(row, col) = factor * circles[cp].weights[jp] * mask[col] *
                        ker.node_values(jp, jpp);
        }
      }
    }

  // f_{c''}(j'') = S#_{alpha c''}(Re rho, omega'')
  Eigen::VectorXcd f(n);
  for (int cpp = 0; cpp < nch; ++cpp) {
    const auto& ker = kernel_at(cpos_alpha, cpp);
    for (int jpp = 0; jpp < circles[cpp].size(); ++jpp)
      f(idx.offset[cpp] + jpp) = ker.node_values(i_alpha, jpp);
  }

  Eigen::VectorXcd phi(n);
  double cond = 0.0;
  if (!near_forward) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - T;
    cond = condition_estimate(A);
    if (cond > cond_limit) {
      std::ostringstream os;
      os << "invert_smatrix: ill-conditioned system (cond " << cond << ")";
      throw solver_error(os.str());
    }
    phi = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(f);
  } else {
    std::vector<int> sel;
    for (int col = 0; col < n; ++col)
      if (arc[col]) sel.push_back(col);
    const int m = static_cast<int>(sel.size());
    Eigen::MatrixXcd T1(m, m);
    Eigen::VectorXcd f1(m);
    for (int a = 0; a < m; ++a) {
      f1(a) = f(sel[a]);
      for (int b = 0; b < m; ++b) T1(a, b) = T(sel[a], sel[b]);
    }
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m) - T1;
    cond = condition_estimate(A);
    if (cond > cond_limit) {
      std::ostringstream os;
      os << "invert_smatrix_near_forward: ill-conditioned system (cond " << cond << ")";
      throw solver_error(os.str());
    }
    Eigen::VectorXcd phi1 = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(f1);
    // Off-arc entries via the Nystrom identity Phi = f + T Phi = f + T pi1 Phi.
    Eigen::VectorXcd phi_full = Eigen::VectorXcd::Zero(n);
    for (int a = 0; a < m; ++a) phi_full(sel[a]) = phi1(a);
    phi = f + T * phi_full;
    for (int a = 0; a < m; ++a) phi(sel[a]) = phi1(a);
  }

  InvertResult res;
  res.condition_number = cond;
  res.siblings_excluded = siblings_excluded;
  for (int c = 0; c < nch; ++c) {
    res.channels.push_back(kernels[c * nch].channel_in);
    std::vector<cplx> vals;
    for (int j = 0; j < circles[c].size(); ++j) vals.push_back(phi(idx.offset[c] + j));
    res.node_values.push_back(std::move(vals));
  }

  // Nystrom evaluation at the extra outgoing points.
  res.extra_values.assign(nch, std::vector<cplx>(nextra, cplx(0.0, 0.0)));
  for (int cout = 0; cout < nch; ++cout)
    for (int e = 0; e < nextra; ++e) {
      cplx val = kernel_at(cpos_alpha, cout).extra_values(i_alpha, e);
      for (int cp = 0; cp < nch; ++cp) {
        const cplx factor =
            cplx(0.0, 1.0) / (2.0 * std::sqrt(lambda - circles[cp].channel_energy));
        const auto& ker = kernel_at(cp, cout);
        for (int jp = 0; jp < circles[cp].size(); ++jp) {
          const int col = idx.offset[cp] + jp;
          if (mask[col] == 0.0) continue;
          val += factor * circles[cp].weights[jp] * mask[col] * ker.extra_values(jp, e) *
                 phi(col);
        }
      }
      res.extra_values[cout][e] = val;
    }
  return res;
}

}  // namespace

InvertResult invert_smatrix(const std::vector<SMatrixKernel>& kernels,
                            const std::vector<CircleGrid>& circles,
                            const std::vector<Eigen::VectorXd>& extra_outgoing,
                            const ComplexMomentum& mom, double lambda, double cond_limit) {
  return invert_impl(kernels, circles, extra_outgoing, mom, lambda, cond_limit, false);
}

InvertResult invert_smatrix_near_forward(const std::vector<SMatrixKernel>& kernels,
                                         const std::vector<CircleGrid>& circles,
                                         const std::vector<Eigen::VectorXd>& extra_outgoing,
                                         const ComplexMomentum& mom, double lambda,
                                         double cond_limit) {
  return invert_impl(kernels, circles, extra_outgoing, mom, lambda, cond_limit, true);
}

}  // namespace f3
