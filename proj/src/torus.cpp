#include "isodiff/torus.hpp"

#include <cmath>
#include <numbers>

#include "isodiff/errors.hpp"
#include "isodiff/fourier.hpp"

namespace isodiff {

namespace {

// iterate over all nodes of an N^n grid, psi_j = 2*pi*j/N
template <typename F>
void for_grid(int n, int N, F&& fn) {
  std::vector<int> idx(n, 0);
  std::vector<double> psi(n, 0.0);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (int d = 0; d < n; ++d)
      psi[d] = 2.0 * std::numbers::pi * idx[d] / N;
    fn(flat, psi);
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < N) break;
      idx[d] = 0;
    }
  }
}

}  // namespace

double InvariantTorus::Q_at(std::span<const double> psi) const {
  return fourier_synth(Qhat, psi);
}

double InvariantTorus::P_at(std::span<const double> psi) const {
  return fourier_synth(Phat, psi);
}

std::vector<double> InvariantTorus::a_at(std::span<const double> psi) const {
  std::vector<double> out(n, 0.0);
  for (const auto& [k, c] : ahat) {
    double ph = 0;
    for (int i = 0; i < n; ++i) ph += k[i] * psi[i];
    const double cs = std::cos(ph), sn = std::sin(ph);
    for (int j = 0; j < n; ++j)
      out[j] += c[j].real() * cs - c[j].imag() * sn;
  }
  return out;
}

double InvariantTorus::sup_Q() const {
  double s = 0;
  for (const auto& [k, c] : Qhat) s += std::abs(c);
  return s;
}

double InvariantTorus::sup_P() const {
  double s = 0;
  for (const auto& [k, c] : Phat) s += std::abs(c);
  return s;
}

double InvariantTorus::sup_a() const {
  double s = 0;
  for (const auto& [k, c] : ahat) {
    double m = 0;
    for (const auto& cj : c) m = std::max(m, std::abs(cj));
    s += m;
  }
  return s;
}

InvariantTorus InvariantTorus::make_trivial(int n, double mu) {
  InvariantTorus t;
  t.n = n;
  t.mu = mu;
  return t;
}

InvariantTorus solve_invariant_torus(double mu, const FrequencyVector& omega,
                                     const PerturbationSeries& f, int K_modes,
                                     const TorusOptions& opts) {
  const int n = omega.n();
  if (f.n != n) throw ConfigError("solve_invariant_torus: dimension mismatch");
  if (f.q_mode == PerturbationSeries::QMode::FactorOneMinusCosQ || mu == 0.0) {
    // perturbation and its q-derivative vanish on q = 0: torus untouched
    return InvariantTorus::make_trivial(n, mu);
  }
  const auto dio = diophantine_margin(omega, K_modes);
  if (!(dio.margin > 0))
    throw SmallDivisorError("solve_invariant_torus: resonant frequency vector",
                            dio.worst_k);

  const int N = opts.grid_per_dim > 0
                    ? opts.grid_per_dim
                    : std::max(16, 4 * K_modes + 4);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
  std::vector<int> shape(n, N);

  auto keep = [&](const ModeKey& k) {
    for (int ki : k)
      if (std::abs(ki) > K_modes) return false;
    return true;
  };

  // Fourier-Newton for Q: (omega.D)^2 Q = sin Q - mu df/dq(psi, Q),
  // preconditioned by the constant-coefficient linearization
  // (omega.D)^2 - 1 (diagonal in Fourier, no small divisors).
  std::map<ModeKey, Complex> Qhat;
  std::vector<double> Qgrid(total, 0.0), D2grid(total, 0.0), rho(total, 0.0);
  double sup_rho = 0;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    std::map<ModeKey, Complex> D2hat;
    for (const auto& [k, c] : Qhat) {
      const double wk = omega.dot(k);
      D2hat[k] = -(wk * wk) * c;
    }
    sup_rho = 0;
    for_grid(n, N, [&](std::size_t flat, const std::vector<double>& psi) {
      Qgrid[flat] = fourier_synth(Qhat, psi);
      D2grid[flat] = fourier_synth(D2hat, psi);
      rho[flat] = D2grid[flat] - std::sin(Qgrid[flat]) +
                  mu * f.dq(psi, Qgrid[flat]);
      sup_rho = std::max(sup_rho, std::fabs(rho[flat]));
    });
    if (sup_rho < opts.tol) break;
    auto rho_hat = dft_grid(rho, shape);
    for (const auto& [k, c] : rho_hat) {
      if (!keep(k) || std::abs(c) < opts.drop_tol) continue;
      const double wk = omega.dot(k);
      Qhat[k] += c / (wk * wk + 1.0);
    }
  }
  if (sup_rho >= opts.tol)
    throw SolverError("solve_invariant_torus: Fourier-Newton did not converge",
                      sup_rho);

  InvariantTorus torus;
  torus.n = n;
  torus.mu = mu;
  for (const auto& [k, c] : Qhat)
    if (std::abs(c) >= opts.drop_tol) torus.Qhat[k] = c;
  for (const auto& [k, c] : torus.Qhat) {
    const double wk = omega.dot(k);
    torus.Phat[k] = Complex{0, 1} * wk * c;
  }

  // action correction a: (omega.D) a_j = -mu df/dphi_j(psi, Q(psi));
  // the small divisors omega.k appear here, guarded by (H1).
  std::vector<std::map<ModeKey, Complex>> ahat_j(n);
  double a_res = 0;
  std::vector<double> rj(total);
  for (int j = 0; j < n; ++j) {
    for_grid(n, N, [&](std::size_t flat, const std::vector<double>& psi) {
      rj[flat] = -mu * f.dphi(j, psi, Qgrid[flat]);
    });
    auto rhat = dft_grid(rj, shape);
    for (const auto& [k, c] : rhat) {
      if (!keep(k) || std::abs(c) < opts.drop_tol) continue;
      bool zero = true;
      for (int ki : k) zero = zero && ki == 0;
      if (zero) {
        // solvability defect of the averaged equation
        a_res = std::max(a_res, std::abs(c));
        continue;
      }
      const double wk = omega.dot(k);
      int sup = 0;
      for (int ki : k) sup = std::max(sup, std::abs(ki));
      if (omega.gamma > 0 &&
          std::fabs(wk) < omega.gamma / std::pow(sup, omega.tau))
        throw SmallDivisorError(
            "solve_invariant_torus: divisor below Diophantine bound", k);
      if (1.0 / std::fabs(wk) > opts.cond_bound)
        throw SmallDivisorError(
            "solve_invariant_torus: small-divisor amplification beyond "
            "conditioning bound", k);
      ahat_j[j][k] = c / (Complex{0, 1} * wk);
    }
  }
  for (int j = 0; j < n; ++j)
    for (const auto& [k, c] : ahat_j[j]) {
      auto& slot = torus.ahat[k];
      if (slot.empty()) slot.assign(n, Complex{});
      slot[j] = c;
    }

  // energy on the torus and invariance residual
  double e_sum = 0, e_min = 0, e_max = 0;
  bool first = true;
  for_grid(n, N, [&](std::size_t flat, const std::vector<double>& psi) {
    const double Q = Qgrid[flat];
    const double P = torus.P_at(psi);
    const auto a = torus.a_at(psi);
    double wa = 0;
    for (int j = 0; j < n; ++j) wa += omega.omega[j] * a[j];
    const double e = wa + 0.5 * P * P + std::cos(Q) - 1.0 + mu * f.eval(psi, Q);
    e_sum += e;
    if (first) {
      e_min = e_max = e;
      first = false;
    } else {
      e_min = std::min(e_min, e);
      e_max = std::max(e_max, e);
    }
  });
  torus.energy = e_sum / static_cast<double>(total);
  torus.invariance_residual = std::max({sup_rho, a_res, e_max - e_min});
  return torus;
}

}  // namespace isodiff
