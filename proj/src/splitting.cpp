#include "isodiff/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "isodiff/angles.hpp"
#include "isodiff/errors.hpp"

namespace isodiff {

namespace {

using std::numbers::pi;

void validate_window(const SplittingWindow& w, int dim) {
  if (static_cast<int>(w.A0.size()) != dim)
    throw ConfigError("splitting window: A0 dimension mismatch");
  if (!(w.alpha > 0 && w.alpha < w.rho && w.rho <= pi))
    throw ConfigError("splitting window: need 0 < alpha < rho <= pi");
  if (!(w.delta > 0)) throw ConfigError("splitting window: delta must be > 0");
}

double max_spacing(const HomoclinicGrid& g) {
  double h = 0;
  for (int s : g.shape) h = std::max(h, two_pi / s);
  return h;
}

// Sample the faces of the sup-ball sphere of radius r around A0 at spacing
// step, apply fn to each interpolated value.
void for_sphere(const HomoclinicGrid& g, const std::vector<double>& A0,
                double r, double step,
                const std::function<void(double)>& fn) {
  const int n = g.dim();
  const int m = std::max(1, static_cast<int>(std::ceil(2.0 * r / step)));
  std::vector<double> A(n);
  std::vector<int> idx(n - 1 >= 0 ? n - 1 : 0, 0);
  for (int face_dim = 0; face_dim < n; ++face_dim) {
    for (int side = -1; side <= 1; side += 2) {
      // iterate the (n-1)-dimensional face
      std::fill(idx.begin(), idx.end(), 0);
      for (;;) {
        A[face_dim] = A0[face_dim] + side * r;
        int d = 0;
        for (int j = 0; j < n; ++j) {
          if (j == face_dim) continue;
          A[j] = A0[j] - r + 2.0 * r * idx[d] / m;
          ++d;
        }
        fn(g.interp(A));
        int c = 0;
        while (c < n - 1 && ++idx[c] > m) idx[c++] = 0;
        if (c == n - 1 || n == 1) break;
      }
      if (n == 1) {
        // faces are single points
      }
    }
  }
}

}  // namespace

SplittingReport check_splitting_condition(const HomoclinicGrid& grid,
                                          const SplittingWindow& window,
                                          const SplittingOptions& opts) {
  const int n = grid.dim();
  validate_window(window, n);
  const double h = max_spacing(grid);
  if (h > window.alpha / 4.0 && !opts.allow_coarse)
    throw ResolutionError(
        "check_splitting_condition: grid spacing exceeds alpha/4");

  SplittingReport rep;
  rep.window = window;

  // fine virtual grid over the closed ball B_rho (interpolated)
  const int refine = std::max(1, opts.refine);
  std::vector<int> fine_m(n);
  std::vector<double> fine_h(n);
  std::size_t fine_total = 1;
  for (int d = 0; d < n; ++d) {
    fine_m[d] = static_cast<int>(
                    std::ceil(2.0 * window.rho / (two_pi / grid.shape[d]))) *
                    refine +
                1;
    fine_h[d] = 2.0 * window.rho / (fine_m[d] - 1);
    fine_total *= static_cast<std::size_t>(fine_m[d]);
  }
  double hf = 0;
  for (int d = 0; d < n; ++d) hf = std::max(hf, fine_h[d]);

  std::vector<double> vals(fine_total);
  {
    std::vector<int> idx(n, 0);
    std::vector<double> A(n);
    for (std::size_t flat = 0; flat < fine_total; ++flat) {
      for (int d = 0; d < n; ++d)
        A[d] = window.A0[d] - window.rho + fine_h[d] * idx[d];
      vals[flat] = grid.interp(A);
      for (int d = n - 1; d >= 0; --d) {
        if (++idx[d] < fine_m[d]) break;
        idx[d] = 0;
      }
    }
  }

  rep.inf_ball = vals[0];
  for (double v : vals) rep.inf_ball = std::min(rep.inf_ball, v);

  rep.inf_boundary = std::numeric_limits<double>::infinity();
  for_sphere(grid, window.A0, window.rho, hf,
             [&](double v) { rep.inf_boundary = std::min(rep.inf_boundary, v); });

  // (ii) sup over the alpha-ball; sample at fine resolution (or the cube
  // corners and center when alpha is below the fine spacing)
  rep.sup_inner = -std::numeric_limits<double>::infinity();
  {
    const double step = std::min(hf, window.alpha);
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 * window.alpha / step)));
    std::vector<int> idx(n, 0);
    std::vector<double> A(n);
    for (;;) {
      for (int d = 0; d < n; ++d)
        A[d] = window.A0[d] - window.alpha + 2.0 * window.alpha * idx[d] / m;
      rep.sup_inner = std::max(rep.sup_inner, grid.interp(A));
      int d = 0;
      while (d < n && ++idx[d] > m) idx[d++] = 0;
      if (d == n) break;
    }
  }

  // (iii) certified Euclidean distance between the sublevel and superlevel
  // sets: min pairwise distance of their boundary cells on the fine grid,
  // less a one-cell guard band
  {
    const double lo = rep.inf_ball + window.delta;
    const double hi = rep.inf_ball + 1.5 * window.delta;
    std::vector<char> sub(fine_total), super(fine_total);
    bool any_super = false, any_sub = false;
    for (std::size_t i = 0; i < fine_total; ++i) {
      sub[i] = vals[i] < lo;
      super[i] = vals[i] >= hi;
      any_super = any_super || super[i];
      any_sub = any_sub || sub[i];
    }
    if (!any_super || !any_sub) {
      rep.sublevel_gap = 2.0 * window.rho;  // one of the sets is empty
    } else {
      std::vector<long> stride(n, 1);
      for (int d = n - 2; d >= 0; --d)
        stride[d] = stride[d + 1] * fine_m[d + 1];
      auto boundary_of = [&](const std::vector<char>& mask) {
        std::vector<std::vector<int>> cells;
        std::vector<int> idx(n, 0);
        for (std::size_t i = 0; i < fine_total; ++i) {
          if (mask[i]) {
            bool edge = false;
            for (int d = 0; d < n && !edge; ++d) {
              if (idx[d] == 0 || idx[d] == fine_m[d] - 1)
                edge = true;
              else
                edge = !mask[i - stride[d]] || !mask[i + stride[d]];
            }
            if (edge) cells.push_back(idx);
          }
          for (int d = n - 1; d >= 0; --d) {
            if (++idx[d] < fine_m[d]) break;
            idx[d] = 0;
          }
        }
        return cells;
      };
      const auto bs = boundary_of(sub);
      const auto bp = boundary_of(super);
      double best2 = std::numeric_limits<double>::infinity();
      double diag2 = 0;
      for (int d = 0; d < n; ++d) diag2 += fine_h[d] * fine_h[d];
      for (const auto& a : bs)
        for (const auto& b : bp) {
          double d2 = 0;
          for (int d = 0; d < n; ++d) {
            const double dd = (a[d] - b[d]) * fine_h[d];
            d2 += dd * dd;
          }
          best2 = std::min(best2, d2);
        }
      // one-cell guard band on the certified distance
      rep.sublevel_gap = std::max(0.0, std::sqrt(best2) - std::sqrt(diag2));
    }
  }

  rep.margin_i = rep.inf_boundary - rep.inf_ball - window.delta;
  rep.margin_ii = window.delta / 4.0 + rep.inf_ball - rep.sup_inner;
  rep.margin_iii = rep.sublevel_gap - 2.0 * window.alpha;
  rep.cond_i = rep.margin_i > 0;
  rep.cond_ii = rep.margin_ii > 0;
  rep.cond_iii = rep.margin_iii > 0;
  return rep;
}

namespace {

// eigenvalues of a symmetric matrix by cyclic Jacobi (small n)
std::vector<double> sym_eigenvalues(std::vector<std::vector<double>> H) {
  const int n = static_cast<int>(H.size());
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += H[p][q] * H[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(H[p][q]) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * H[p][q], H[q][q] - H[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          const double hpk = H[p][k], hqk = H[q][k];
          H[p][k] = c * hpk - s * hqk;
          H[q][k] = s * hpk + c * hqk;
        }
        for (int k = 0; k < n; ++k) {
          const double hkp = H[k][p], hkq = H[k][q];
          H[k][p] = c * hkp - s * hkq;
          H[k][q] = s * hkp + c * hkq;
        }
      }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = H[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

MinimumResult find_minimum(const HomoclinicGrid& grid, double eig_threshold) {
  const int n = grid.dim();
  MinimumResult res;

  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.values.size(); ++i)
    if (grid.values[i] < grid.values[best]) best = i;

  std::vector<int> idx(n);
  {
    std::size_t rem = best;
    for (int d = n - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rem % grid.shape[d]);
      rem /= grid.shape[d];
    }
  }

  // gradient and Hessian by central differences at the argmin node
  std::vector<double> g(n);
  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
  std::vector<double> hd(n);
  for (int d = 0; d < n; ++d) hd[d] = two_pi / grid.shape[d];
  auto value = [&](std::vector<int> off) {
    for (int d = 0; d < n; ++d) off[d] += idx[d];
    return grid.at(off);
  };
  const double v0 = grid.values[best];
  for (int d = 0; d < n; ++d) {
    std::vector<int> ep(n, 0), em(n, 0);
    ep[d] = 1;
    em[d] = -1;
    g[d] = (value(ep) - value(em)) / (2.0 * hd[d]);
    H[d][d] = (value(ep) - 2.0 * v0 + value(em)) / (hd[d] * hd[d]);
  }
  for (int d = 0; d < n; ++d)
    for (int e = d + 1; e < n; ++e) {
      std::vector<int> pp(n, 0), pm(n, 0), mp(n, 0), mm(n, 0);
      pp[d] = pp[e] = 1;
      pm[d] = 1; pm[e] = -1;
      mp[d] = -1; mp[e] = 1;
      mm[d] = mm[e] = -1;
      H[d][e] = H[e][d] =
          (value(pp) - value(pm) - value(mp) + value(mm)) /
          (4.0 * hd[d] * hd[e]);
    }

  res.hessian_eigenvalues = sym_eigenvalues(H);
  res.nondegenerate = res.hessian_eigenvalues.front() > eig_threshold;

  res.A0 = grid.angle(idx);
  res.value = v0;
  if (res.nondegenerate) {
    // one Newton step of the local quadratic model, clipped to one cell
    Eigen::MatrixXd Hm(n, n);
    Eigen::VectorXd gv(n);
    for (int d = 0; d < n; ++d) {
      gv[d] = g[d];
      for (int e = 0; e < n; ++e) Hm(d, e) = H[d][e];
    }
    Eigen::VectorXd step = Hm.ldlt().solve(gv);
    for (int d = 0; d < n; ++d) {
      double s = -step[d];
      s = std::clamp(s, -hd[d], hd[d]);
      res.A0[d] = wrap_angle(res.A0[d] + s);
      res.value = std::min(res.value, grid.interp(res.A0));
    }
  }
  return res;
}

WindowSearch suggest_window_from_minimum(const HomoclinicGrid& grid,
                                         const std::vector<double>& A0,
                                         double mu,
                                         const SplittingOptions& opts) {
  (void)mu;  // reported by callers; the search itself is scale-free
  WindowSearch out;
  const double h = max_spacing(grid);

  const double rho_candidates[] = {pi / 2, pi / 3, pi / 4, pi / 6, pi / 8};
  const double delta_fracs[] = {0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  double best_delta = 0;
  for (double rho : rho_candidates) {
    // alpha candidates; keep the grid fine enough unless allowed coarse
    std::vector<double> alphas;
    for (double a = rho / 4.0; a >= (opts.allow_coarse ? rho / 256.0 : 4.0 * h);
         a /= 2.0)
      alphas.push_back(a);
    if (alphas.empty()) continue;
    // cap on delta from condition (i)
    SplittingWindow probe{A0, rho, alphas.front(), 1e-300};
    double cap;
    try {
      probe.delta = 1e-12;
      auto r = check_splitting_condition(grid, probe, opts);
      cap = r.inf_boundary - r.inf_ball;
    } catch (const ResolutionError&) {
      continue;
    }
    if (!(cap > 0)) continue;
    for (double frac : delta_fracs) {
      const double delta = cap * frac;
      if (delta <= best_delta) break;
      bool found = false;
      for (double alpha : alphas) {
        SplittingWindow w{A0, rho, alpha, delta};
        SplittingReport rep;
        try {
          rep = check_splitting_condition(grid, w, opts);
        } catch (const ResolutionError&) {
          continue;
        }
        if (rep.all_pass()) {
          out.feasible = true;
          out.window = w;
          out.report = rep;
          best_delta = delta;
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  if (!out.feasible) out.note = "no feasible window found";
  return out;
}

DiffusionBound diffusion_time_bound(double dI, const SplittingWindow& window,
                                    double tau, double eta, double C) {
  if (!(dI > 0 && window.delta > 0 && window.alpha > 0 && window.rho > 0 &&
        eta > 0 && C > 0))
    throw ConfigError("diffusion_time_bound: all arguments must be positive");
  DiffusionBound b;
  b.transitions = dI / window.delta;
  b.per_transition =
      window.rho * std::max(std::fabs(std::log(window.delta)),
                            1.0 / std::pow(window.alpha, tau));
  b.eta_term = C * std::fabs(std::log(eta));
  b.total = C * b.transitions * b.per_transition + b.eta_term;
  return b;
}

}  // namespace isodiff
