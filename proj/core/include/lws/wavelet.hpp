#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lws/trace.hpp"

namespace lws {

/// Orthonormal wavelet families available for denoising. Haar has trivially
/// checkable coefficients; db4 (8-tap) is the default.
enum class Wavelet { Haar, Db2, Db4 };

Wavelet wavelet_from_name(const std::string& name);
std::string wavelet_name(Wavelet w);
/// Filter tap count: 2 (haar), 4 (db2), 8 (db4).
int wavelet_filter_length(Wavelet w);

/// Largest decomposition depth for a signal of length n:
/// floor(log2(n / (filter_len - 1))), 0 when the signal is shorter than the
/// filter support.
int max_decomposition_levels(std::size_t n, Wavelet w);

/// Cascade DWT coefficients. `details` runs finest (level 1) to coarsest.
/// Band lengths follow symmetric-extension convolution: each level maps a
/// length-n band to floor((n + filter_len - 1) / 2) coefficients, so the
/// cascade of band lengths encodes everything the inverse needs.
struct WaveletDecomposition {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
  int levels = 0;
  std::size_t original_len = 0;
  Wavelet wavelet_id = Wavelet::Db4;
};

struct ThresholdRule {
  enum class Kind { Universal, Fixed };
  Kind kind = Kind::Universal;
  double value = 0.0;  // used by Fixed only

  static ThresholdRule universal() { return {Kind::Universal, 0.0}; }
  static ThresholdRule fixed(double tau) { return {Kind::Fixed, tau}; }
};

enum class ThresholdMode { Soft, Hard };

struct DenoiseConfig {
  Wavelet wavelet = Wavelet::Db4;
  int levels = 4;
  ThresholdRule rule = ThresholdRule::universal();
  ThresholdMode mode = ThresholdMode::Soft;
};

/// Forward DWT with half-sample symmetric boundary extension.
/// Perfect reconstruction holds for every length >= 2 and every level count
/// within max_decomposition_levels.
WaveletDecomposition dwt_forward(std::span<const double> signal, Wavelet w,
                                 int levels);

/// Exact inverse of dwt_forward; output length equals original_len.
/// Throws on band lengths inconsistent with the cascade.
std::vector<double> dwt_inverse(const WaveletDecomposition& decomp);

/// Robust noise estimate: median(|finest detail band|) / 0.6745.
double estimate_noise_sigma(const WaveletDecomposition& decomp);

/// Applies the configured threshold to every detail band; the approximation
/// band is never touched. Universal rule: tau = sigma_hat *
/// sqrt(2 ln original_len). Hard mode zeroes |c| < tau; soft mode maps c to
/// sign(c) * max(|c| - tau, 0).
WaveletDecomposition threshold_coefficients(const WaveletDecomposition& decomp,
                                            const DenoiseConfig& config);

/// dwt_inverse(threshold_coefficients(dwt_forward(x))); metadata and label
/// pass through unchanged.
Trace denoise(const Trace& trace, const DenoiseConfig& config);

}  // namespace lws
