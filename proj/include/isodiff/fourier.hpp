#pragma once

#include <map>
#include <span>

#include "isodiff/series.hpp"

namespace isodiff {

// Discrete Fourier coefficients of real samples on a uniform periodic grid.
// Row-major values, last index fastest; node j maps to angle 2*pi*j/N_i.
// Returned modes k_i range over [-(N_i-1)/2, N_i/2].
std::map<ModeKey, Complex> dft_grid(std::span<const double> values,
                                    std::span<const int> shape);

// sum_k c_k e^{i k.A} evaluated at an angle tuple (real part).
double fourier_synth(const std::map<ModeKey, Complex>& coeffs,
                     std::span<const double> A);

// Mode table serialization: one line `k_1 ... k_n re im`.
void save_modes(std::ostream& os, const std::map<ModeKey, Complex>& coeffs);
std::map<ModeKey, Complex> load_modes(std::istream& is, int key_len);

}  // namespace isodiff
