#include "isodiff/series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "isodiff/errors.hpp"

namespace isodiff {

namespace {

ModeKey negate(const ModeKey& k) {
  ModeKey m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) m[i] = -k[i];
  return m;
}

}  // namespace

void PerturbationSeries::set(const ModeKey& k, Complex c) {
  if (static_cast<int>(k.size()) != key_len())
    throw ConfigError("PerturbationSeries: mode key length mismatch");
  coeffs[k] = c;
}

Complex PerturbationSeries::get(const ModeKey& k) const {
  auto it = coeffs.find(k);
  return it == coeffs.end() ? Complex{0, 0} : it->second;
}

void PerturbationSeries::add_cos(const ModeKey& k, double amp) {
  set(k, get(k) + Complex{0.5 * amp, 0});
  set(negate(k), get(negate(k)) + Complex{0.5 * amp, 0});
}

void PerturbationSeries::add_sin(const ModeKey& k, double amp) {
  set(k, get(k) + Complex{0, -0.5 * amp});
  set(negate(k), get(negate(k)) + Complex{0, 0.5 * amp});
}

double PerturbationSeries::phi_sum(std::span<const double> phi) const {
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = 0;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
  }
  return s;
}

double PerturbationSeries::phi_sum_dphi(int j, std::span<const double> phi) const {
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = 0;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    // Re(i k_j f_k e^{i ph})
    s += k[j] * (-c.real() * std::sin(ph) - c.imag() * std::cos(ph));
  }
  return s;
}

double PerturbationSeries::eval(std::span<const double> phi, double q) const {
  if (q_mode == QMode::FactorOneMinusCosQ)
    return (1.0 - std::cos(q)) * phi_sum(phi);
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = k[n] * q;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
  }
  return s;
}

double PerturbationSeries::dphi(int j, std::span<const double> phi,
                                double q) const {
  if (q_mode == QMode::FactorOneMinusCosQ)
    return (1.0 - std::cos(q)) * phi_sum_dphi(j, phi);
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = k[n] * q;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    s += k[j] * (-c.real() * std::sin(ph) - c.imag() * std::cos(ph));
  }
  return s;
}

double PerturbationSeries::dq(std::span<const double> phi, double q) const {
  if (q_mode == QMode::FactorOneMinusCosQ)
    return std::sin(q) * phi_sum(phi);
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = k[n] * q;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    s += k[n] * (-c.real() * std::sin(ph) - c.imag() * std::cos(ph));
  }
  return s;
}

double PerturbationSeries::dqq(std::span<const double> phi, double q) const {
  if (q_mode == QMode::FactorOneMinusCosQ)
    return std::cos(q) * phi_sum(phi);
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = k[n] * q;
    for (int i = 0; i < n; ++i) ph += k[i] * phi[i];
    s -= k[n] * k[n] * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
  }
  return s;
}

double PerturbationSeries::sup_norm() const {
  double s = 0;
  for (const auto& [k, c] : coeffs) s += std::abs(c);
  if (q_mode == QMode::FactorOneMinusCosQ) s *= 2.0;  // sup |1 - cos q| = 2
  return s;
}

double PerturbationSeries::reality_defect() const {
  double d = 0;
  for (const auto& [k, c] : coeffs)
    d = std::max(d, std::abs(c - std::conj(get(negate(k)))));
  return d;
}

double PerturbationSeries::decay_ratio() const {
  if (decay_constant <= 0) return 0.0;
  double worst = 0;
  for (const auto& [k, c] : coeffs) {
    int sup = 0;
    double widths_sum = 0;
    for (int i = 0; i < n; ++i) {
      sup = std::max(sup, std::abs(k[i]));
      if (!widths.empty()) widths_sum += widths[i] * std::abs(k[i]);
    }
    const double denom = sup == 0 ? 1.0 : std::pow(sup, decay_order);
    const double bound = decay_constant / denom * std::exp(-widths_sum);
    worst = std::max(worst, std::abs(c) / bound);
  }
  return worst;
}

bool PerturbationSeries::q_independent() const {
  if (q_mode == QMode::FactorOneMinusCosQ) return false;
  for (const auto& [k, c] : coeffs)
    if (k[n] != 0 && std::abs(c) != 0) return false;
  return true;
}

void PerturbationSeries::save(std::ostream& os) const {
  os << "# n " << n << " qmode "
     << (q_mode == QMode::FactorOneMinusCosQ ? "factor" : "general")
     << " s " << decay_order << " Cs " << decay_constant << " widths";
  for (double a : widths) os << ' ' << a;
  os << '\n';
  os.precision(17);
  for (const auto& [k, c] : coeffs) {
    for (int ki : k) os << ki << ' ';
    os << std::scientific << c.real() << ' ' << c.imag() << '\n';
  }
}

PerturbationSeries PerturbationSeries::load(std::istream& is) {
  PerturbationSeries f;
  std::string line;
  if (!std::getline(is, line))
    throw ConfigError("PerturbationSeries: empty input");
  {
    std::istringstream h(line);
    std::string hash, tag, qm;
    h >> hash >> tag >> f.n;
    if (hash != "#" || tag != "n" || f.n <= 0)
      throw ConfigError("PerturbationSeries: bad header: " + line);
    h >> tag >> qm;
    f.q_mode = qm == "general" ? QMode::GeneralInQ : QMode::FactorOneMinusCosQ;
    h >> tag >> f.decay_order >> tag >> f.decay_constant >> tag;
    double a;
    while (h >> a) f.widths.push_back(a);
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ModeKey k(f.key_len());
    double re, im;
    for (int& ki : k)
      if (!(ls >> ki)) throw ConfigError("PerturbationSeries: bad mode line: " + line);
    if (!(ls >> re >> im))
      throw ConfigError("PerturbationSeries: bad mode line: " + line);
    f.coeffs[k] = Complex{re, im};
  }
  return f;
}

PerturbationSeries PerturbationSeries::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("PerturbationSeries: cannot open " + path);
  return load(is);
}

}  // namespace isodiff
