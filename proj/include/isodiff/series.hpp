#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace isodiff {

using ModeKey = std::vector<int>;
using Complex = std::complex<double>;

// Coupling f as a truncated multi-dimensional Fourier series.
//
// FactorOneMinusCosQ:  f(phi, q) = (1 - cos q) * sum_k f_k e^{i k.phi},
//                      keys have length n.
// GeneralInQ:          f(phi, q) = sum_{k,m} f_{k,m} e^{i(k.phi + m q)},
//                      keys have length n+1 with the q-index last.
struct PerturbationSeries {
  enum class QMode { FactorOneMinusCosQ, GeneralInQ };

  int n = 0;
  QMode q_mode = QMode::FactorOneMinusCosQ;
  std::map<ModeKey, Complex> coeffs;
  std::vector<double> widths;   // analyticity strip half-widths a_i
  int decay_order = 0;          // s
  double decay_constant = 0.0;  // C_s

  int key_len() const {
    return q_mode == QMode::GeneralInQ ? n + 1 : n;
  }

  // Add amp*cos(k.phi [+ m q]) as a reality-symmetric pair of modes.
  void add_cos(const ModeKey& k, double amp);
  void add_sin(const ModeKey& k, double amp);
  void set(const ModeKey& k, Complex c);
  Complex get(const ModeKey& k) const;

  double eval(std::span<const double> phi, double q) const;
  double dphi(int j, std::span<const double> phi, double q) const;
  double dq(std::span<const double> phi, double q) const;
  double dqq(std::span<const double> phi, double q) const;

  // sum_k f_k e^{i k.phi} (the angular factor; FactorOneMinusCosQ only).
  double phi_sum(std::span<const double> phi) const;
  double phi_sum_dphi(int j, std::span<const double> phi) const;

  // sup_A |f| bound: sum of |f_k| (times 2 for the (1-cos q) factor range).
  double sup_norm() const;

  // max |f_k - conj(f_{-k})| over stored modes.
  double reality_defect() const;
  // max over modes of |f_k| / (C_s/|k|^s exp(-sum a_i |k_i|)); <= 1 when the
  // stored decay certificate holds.
  double decay_ratio() const;

  bool q_independent() const;  // GeneralInQ with all q-indices zero

  void save(std::ostream& os) const;
  static PerturbationSeries load(std::istream& is);
  static PerturbationSeries load_file(const std::string& path);
};

}  // namespace isodiff
