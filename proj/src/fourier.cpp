#include "isodiff/fourier.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "isodiff/errors.hpp"

namespace isodiff {

std::map<ModeKey, Complex> dft_grid(std::span<const double> values,
                                    std::span<const int> shape) {
  const int n = static_cast<int>(shape.size());
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 1) throw ConfigError("dft_grid: bad shape");
    total *= static_cast<std::size_t>(s);
  }
  if (values.size() != total) throw ConfigError("dft_grid: size mismatch");

  std::vector<Complex> buf(values.begin(), values.end());
  std::vector<Complex> tmp;

  // Separable transform, one dimension at a time (dimension d varies with
  // stride prod(shape[d+1..])).
  std::size_t stride = total;
  for (int d = 0; d < n; ++d) {
    const int N = shape[d];
    stride /= N;
    const std::size_t blocks = total / (static_cast<std::size_t>(N) * stride);
    std::vector<Complex> tw(static_cast<std::size_t>(N) * N);
    for (int f = 0; f < N; ++f)
      for (int j = 0; j < N; ++j) {
        const double ph = -2.0 * std::numbers::pi * f * j / N;
        tw[static_cast<std::size_t>(f) * N + j] = {std::cos(ph), std::sin(ph)};
      }
    tmp.assign(total, Complex{});
    for (std::size_t b = 0; b < blocks; ++b)
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = b * N * stride + s;
        for (int f = 0; f < N; ++f) {
          Complex acc{};
          for (int j = 0; j < N; ++j)
            acc += tw[static_cast<std::size_t>(f) * N + j] * buf[base + j * stride];
          tmp[base + f * stride] = acc / static_cast<double>(N);
        }
      }
    buf.swap(tmp);
  }

  std::map<ModeKey, Complex> out;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    ModeKey k(n);
    for (int d = 0; d < n; ++d) {
      int f = idx[d];
      k[d] = f <= shape[d] / 2 ? f : f - shape[d];
    }
    out[k] = buf[flat];
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  return out;
}

double fourier_synth(const std::map<ModeKey, Complex>& coeffs,
                     std::span<const double> A) {
  double s = 0;
  for (const auto& [k, c] : coeffs) {
    double ph = 0;
    for (std::size_t i = 0; i < A.size(); ++i) ph += k[i] * A[i];
    s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
  }
  return s;
}

void save_modes(std::ostream& os, const std::map<ModeKey, Complex>& coeffs) {
  os.precision(17);
  for (const auto& [k, c] : coeffs) {
    for (int ki : k) os << ki << ' ';
    os << std::scientific << c.real() << ' ' << c.imag() << '\n';
  }
}

std::map<ModeKey, Complex> load_modes(std::istream& is, int key_len) {
  std::map<ModeKey, Complex> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ModeKey k(key_len);
    double re, im;
    for (int& ki : k)
      if (!(ls >> ki)) throw ConfigError("load_modes: bad line: " + line);
    if (!(ls >> re >> im)) throw ConfigError("load_modes: bad line: " + line);
    out[k] = Complex{re, im};
  }
  return out;
}

}  // namespace isodiff
