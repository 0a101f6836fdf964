#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace lhv::detail {

// Self-contained DFT used by the angular-circle spectral transform and the
// deconvolution solver.  Radix-2 Cooley-Tukey for power-of-two lengths,
// direct O(n^2) evaluation otherwise (grids are power-of-two in practice).
// Stateless and reentrant.

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

inline std::vector<std::complex<double>> dft_direct(std::span<const std::complex<double>> a,
                                                    bool inverse) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * std::numbers::pi * static_cast<double>(j * k % n) /
                         static_cast<double>(n);
      acc += a[j] * std::polar(1.0, ang);
    }
    out[k] = acc;
  }
  return out;
}

/// Unnormalized forward DFT: X_k = sum_j x_j e^{-2*pi*i*j*k/n}.
inline std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a) {
  if (is_power_of_two(a.size())) {
    fft_radix2(a, false);
    return a;
  }
  return dft_direct(a, false);
}

/// Inverse DFT including the 1/n factor: x_j = (1/n) sum_k X_k e^{+2*pi*i*j*k/n}.
inline std::vector<std::complex<double>> idft(std::vector<std::complex<double>> a) {
  const double inv_n = 1.0 / static_cast<double>(a.size());
  if (is_power_of_two(a.size())) {
    fft_radix2(a, true);
  } else {
    a = dft_direct(a, true);
  }
  for (auto& x : a) x *= inv_n;
  return a;
}

inline std::vector<std::complex<double>> dft_real(std::span<const double> x) {
  std::vector<std::complex<double>> a(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) a[j] = {x[j], 0.0};
  return dft(std::move(a));
}

}  // namespace lhv::detail
