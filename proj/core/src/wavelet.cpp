#include "lws/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace lws {
namespace {

// Orthonormal scaling (lowpass synthesis) filters, sum = sqrt(2).
// Haar and db2 follow from closed forms; db4 taps are the standard
// published constants.
const std::vector<double>& scaling_filter(Wavelet w) {
  static const std::vector<double> haar = {0.7071067811865476,
                                           0.7071067811865476};
  static const std::vector<double> db2 = [] {
    const double s3 = std::sqrt(3.0);
    const double q = 4.0 * std::sqrt(2.0);
    return std::vector<double>{(1.0 + s3) / q, (3.0 + s3) / q, (3.0 - s3) / q,
                               (1.0 - s3) / q};
  }();
  static const std::vector<double> db4 = {
      0.23037781330885523,   0.7148465705525415,  0.6308807679295904,
      -0.027983769416983849, -0.18703481171888114, 0.030841381835986965,
      0.032883011666982945,  -0.010597401784997278};
  switch (w) {
    case Wavelet::Haar: return haar;
    case Wavelet::Db2: return db2;
    case Wavelet::Db4: return db4;
  }
  throw Error("unknown wavelet id");
}

struct FilterBank {
  std::vector<double> dec_lo, dec_hi, rec_lo, rec_hi;
  int len = 0;
};

FilterBank filter_bank(Wavelet w) {
  const std::vector<double>& h = scaling_filter(w);
  FilterBank fb;
  fb.len = static_cast<int>(h.size());
  fb.rec_lo = h;
  fb.rec_hi.resize(h.size());
  fb.dec_lo.resize(h.size());
  fb.dec_hi.resize(h.size());
  for (int m = 0; m < fb.len; ++m) {
    // conjugate quadrature pair: g[m] = (-1)^m h[L-1-m]
    fb.rec_hi[m] = ((m % 2) ? -1.0 : 1.0) * h[fb.len - 1 - m];
    fb.dec_lo[m] = h[fb.len - 1 - m];
    fb.dec_hi[m] = fb.rec_hi[fb.len - 1 - m];
  }
  return fb;
}

// Half-sample symmetric extension, iterated so any index is valid:
// ... x1 x0 | x0 x1 ... x{n-1} | x{n-1} x{n-2} ...
double sym_ext(std::span<const double> x, long long t) {
  const long long n = static_cast<long long>(x.size());
  if (n == 1) return x[0];
  const long long period = 2 * n;
  t %= period;
  if (t < 0) t += period;
  if (t >= n) t = period - 1 - t;
  return x[static_cast<std::size_t>(t)];
}

std::size_t band_length(std::size_t n, int filter_len) {
  return (n + static_cast<std::size_t>(filter_len) - 1) / 2;
}

// One analysis level: decimated convolution of the extended signal with the
// analysis pair, output phase chosen so that the coefficient with shift 2k
// reads samples 2k+1-m.
void analyze_level(std::span<const double> x, const FilterBank& fb,
                   std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t nc = band_length(x.size(), fb.len);
  approx.assign(nc, 0.0);
  detail.assign(nc, 0.0);
  for (std::size_t k = 0; k < nc; ++k) {
    double a = 0.0, d = 0.0;
    for (int m = 0; m < fb.len; ++m) {
      const double v = sym_ext(x, 2 * static_cast<long long>(k) + 1 - m);
      a += fb.dec_lo[m] * v;
      d += fb.dec_hi[m] * v;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

// One synthesis level. The analysis keeps every coefficient whose atom
// overlaps [0, n), so summing atom contributions reconstructs the original
// samples exactly (the filter pair is para-unitary).
std::vector<double> synthesize_level(std::span<const double> approx,
                                     std::span<const double> detail,
                                     const FilterBank& fb, std::size_t n_out) {
  if (approx.size() != detail.size()) {
    throw Error("inconsistent band lengths: approx " +
                std::to_string(approx.size()) + " vs detail " +
                std::to_string(detail.size()));
  }
  if (band_length(n_out, fb.len) != approx.size()) {
    throw Error("band length " + std::to_string(approx.size()) +
                " inconsistent with target length " + std::to_string(n_out));
  }
  std::vector<double> out(n_out, 0.0);
  const long long nc = static_cast<long long>(approx.size());
  for (long long t = 0; t < static_cast<long long>(n_out); ++t) {
    const long long k_lo = std::max<long long>(0, t / 2);
    const long long k_hi =
        std::min<long long>(nc - 1, (t + fb.len - 2) / 2);
    double acc = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k) {
      const long long m = t - 2 * k + fb.len - 2;
      acc += approx[static_cast<std::size_t>(k)] *
                 fb.rec_lo[static_cast<std::size_t>(m)] +
             detail[static_cast<std::size_t>(k)] *
                 fb.rec_hi[static_cast<std::size_t>(m)];
    }
    out[static_cast<std::size_t>(t)] = acc;
  }
  return out;
}

double median_abs(std::span<const double> v) {
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::fabs(v[i]);
  const std::size_t mid = mag.size() / 2;
  std::nth_element(mag.begin(), mag.begin() + mid, mag.end());
  double med = mag[mid];
  if (mag.size() % 2 == 0) {
    const double lower = *std::max_element(mag.begin(), mag.begin() + mid);
    med = 0.5 * (med + lower);
  }
  return med;
}

}  // namespace

Wavelet wavelet_from_name(const std::string& name) {
  if (name == "haar") return Wavelet::Haar;
  if (name == "db2") return Wavelet::Db2;
  if (name == "db4") return Wavelet::Db4;
  throw Error("unknown wavelet '" + name + "' (expected haar, db2 or db4)");
}

std::string wavelet_name(Wavelet w) {
  switch (w) {
    case Wavelet::Haar: return "haar";
    case Wavelet::Db2: return "db2";
    case Wavelet::Db4: return "db4";
  }
  throw Error("unknown wavelet id");
}

int wavelet_filter_length(Wavelet w) {
  return static_cast<int>(scaling_filter(w).size());
}

int max_decomposition_levels(std::size_t n, Wavelet w) {
  const std::size_t support =
      static_cast<std::size_t>(wavelet_filter_length(w)) - 1;
  int levels = 0;
  while (n >= support * (std::size_t{2} << levels)) ++levels;
  return levels;
}

WaveletDecomposition dwt_forward(std::span<const double> signal, Wavelet w,
                                 int levels) {
  if (signal.size() < 2) {
    throw Error("signal too short for DWT: length " +
                std::to_string(signal.size()));
  }
  const int bound = max_decomposition_levels(signal.size(), w);
  if (levels < 1 || levels > bound) {
    throw Error("requested " + std::to_string(levels) + " levels but length " +
                std::to_string(signal.size()) + " with " + wavelet_name(w) +
                " supports at most " + std::to_string(bound));
  }
  const FilterBank fb = filter_bank(w);
  WaveletDecomposition decomp;
  decomp.levels = levels;
  decomp.original_len = signal.size();
  decomp.wavelet_id = w;
  decomp.details.resize(static_cast<std::size_t>(levels));

  std::vector<double> current(signal.begin(), signal.end());
  for (int j = 0; j < levels; ++j) {
    std::vector<double> approx, detail;
    analyze_level(current, fb, approx, detail);
    decomp.details[static_cast<std::size_t>(j)] = std::move(detail);
    current = std::move(approx);
  }
  decomp.approx = std::move(current);
  return decomp;
}

std::vector<double> dwt_inverse(const WaveletDecomposition& decomp) {
  if (decomp.levels <= 0 ||
      decomp.details.size() != static_cast<std::size_t>(decomp.levels)) {
    throw Error("decomposition levels field disagrees with detail band count");
  }
  const FilterBank fb = filter_bank(decomp.wavelet_id);
  std::vector<double> current = decomp.approx;
  for (int j = decomp.levels - 1; j >= 0; --j) {
    const std::size_t n_out =
        j == 0 ? decomp.original_len
               : decomp.details[static_cast<std::size_t>(j - 1)].size();
    current = synthesize_level(current,
                               decomp.details[static_cast<std::size_t>(j)], fb,
                               n_out);
  }
  return current;
}

double estimate_noise_sigma(const WaveletDecomposition& decomp) {
  if (decomp.details.empty() || decomp.details.front().empty()) {
    throw Error("decomposition has no finest detail band");
  }
  return median_abs(decomp.details.front()) / 0.6745;
}

WaveletDecomposition threshold_coefficients(const WaveletDecomposition& decomp,
                                            const DenoiseConfig& config) {
  double tau = 0.0;
  if (config.rule.kind == ThresholdRule::Kind::Universal) {
    tau = estimate_noise_sigma(decomp) *
          std::sqrt(2.0 * std::log(static_cast<double>(decomp.original_len)));
  } else {
    tau = config.rule.value;
    if (tau < 0.0) {
      throw Error("fixed threshold must be nonnegative, got " +
                  std::to_string(tau));
    }
  }
  WaveletDecomposition out = decomp;
  for (auto& band : out.details) {
    for (double& c : band) {
      if (config.mode == ThresholdMode::Hard) {
        if (std::fabs(c) < tau) c = 0.0;
      } else {
        const double shrunk = std::fabs(c) - tau;
        c = shrunk > 0.0 ? std::copysign(shrunk, c) : 0.0;
      }
    }
  }
  return out;
}

Trace denoise(const Trace& trace, const DenoiseConfig& config) {
  WaveletDecomposition decomp =
      dwt_forward(trace.samples, config.wavelet, config.levels);
  Trace out = trace;
  out.samples = dwt_inverse(threshold_coefficients(decomp, config));
  return out;
}

}  // namespace lws
