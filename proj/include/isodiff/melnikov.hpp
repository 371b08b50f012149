#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "isodiff/frequency.hpp"
#include "isodiff/orbits.hpp"
#include "isodiff/series.hpp"
#include "isodiff/torus.hpp"

namespace isodiff {

enum class GridKind { Glued, Reduced, General, MelnikovGamma, MelnikovM };

std::string to_string(GridKind k);
GridKind grid_kind_from_string(const std::string& s);

// Sampled homoclinic function on a uniform torus grid of phases A.
struct HomoclinicGrid {
  GridKind kind = GridKind::Glued;
  double mu = 0;
  std::vector<int> shape;      // samples per dimension
  std::vector<double> values;  // row-major, last index fastest
  std::string meta;            // solver settings hash
  bool uniform = true;

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<double> angle(const std::vector<int>& idx) const;
  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;
  // multilinear interpolation with periodic wrap
  double interp(std::span<const double> A) const;
  double min_value() const;
  double max_value() const;

  void save(std::ostream& os) const;
  static HomoclinicGrid load(std::istream& is);
};

// F_mu(A, theta): two half-line action integrals of the pendulum Lagrangian
// along the glued pseudo-heteroclinic orbit, with exponential tail
// corrections.
double action_glued(double mu, const std::vector<double>& A, double theta,
                    const FrequencyVector& omega, const PerturbationSeries& f,
                    const OrbitOptions& opts = {});
double action_of_orbit(const PseudoOrbit& orbit, const FrequencyVector& omega,
                       const PerturbationSeries& f);

// F~_mu(A, theta): full-line action along the constrained orbit.
double action_reduced(double mu, const std::vector<double>& A, double theta,
                      const FrequencyVector& omega,
                      const PerturbationSeries& f,
                      const OrbitOptions& opts = {});

// F_mu(A, theta) in the translated coordinates, with the P0/P1 split and the
// 2*pi*qdot correction accounting for non-exactness of the manifolds.
double action_general(double mu, const std::vector<double>& A, double theta,
                      const FrequencyVector& omega, const InvariantTorus& torus,
                      const PerturbationSeries& f,
                      const OrbitOptions& opts = {});

// Gamma(A) = integral (1 - cos q_0(t)) f(omega t + A) dt, adaptive quadrature.
double melnikov_primitive(const std::vector<double>& A,
                          const FrequencyVector& omega,
                          const PerturbationSeries& f, double tol = 1e-11);

// Gamma_k = f_k * 2*pi*(k.omega) / sinh(k.omega * pi/2); limit 4 f_k at
// k.omega = 0, log-space evaluation for large |k.omega|.
Complex melnikov_coefficient(const ModeKey& k, const FrequencyVector& omega,
                             Complex f_k);

// All Gamma_k for the stored modes of f (FactorOneMinusCosQ).
std::map<ModeKey, Complex> melnikov_coefficients(const FrequencyVector& omega,
                                                 const PerturbationSeries& f);

// gradient of Gamma at A, from the closed-form coefficients
std::vector<double> melnikov_gradient(const std::vector<double>& A,
                                      const FrequencyVector& omega,
                                      const PerturbationSeries& f);

// M(A) = integral [ f(omega t + A, q_0(t)) - f(omega t + A, 0) ] dt.
double melnikov_general(const std::vector<double>& A,
                        const FrequencyVector& omega,
                        const PerturbationSeries& f, double tol = 1e-11);

struct GridFourier {
  std::map<ModeKey, Complex> coeffs;
  double aliasing_bound = 0;  // max |c_k| on the outermost retained shell
};
GridFourier fourier_of_grid(const HomoclinicGrid& grid);

// Evaluate a homoclinic function on a uniform phase grid (parallel over
// cells, deterministic assembly).
HomoclinicGrid compute_homoclinic_grid(GridKind kind, double mu,
                                       const FrequencyVector& omega,
                                       const PerturbationSeries& f,
                                       const std::vector<int>& shape,
                                       const OrbitOptions& opts = {},
                                       int workers = 1);

}  // namespace isodiff
