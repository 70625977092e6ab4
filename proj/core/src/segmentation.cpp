#include "lws/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lws {
namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double med = v[mid];
  if (v.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + mid));
  }
  return med;
}

}  // namespace

void SegmentConfig::validate() const {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw Error("rel_threshold must lie strictly between 0 and 1, got " +
                std::to_string(rel_threshold));
  }
  if (!(envelope_window_s > 0.0)) {
    throw Error("envelope_window_s must be positive");
  }
  if (margin_s < 0.0) throw Error("margin_s must be nonnegative");
  if (fixed_len == 0) throw Error("fixed_len must be positive");
}

Segment detect_segment(const Trace& trace, const SegmentConfig& config) {
  config.validate();
  const std::size_t n = trace.samples.size();
  const double rate = trace.meta.sample_rate_hz;
  const std::size_t window = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(config.envelope_window_s * rate)));
  if (n < window) {
    throw Error("trace of " + std::to_string(n) +
                " samples is shorter than the envelope window of " +
                std::to_string(window));
  }

  const double med = median(trace.samples);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) {
    dev[i] = std::fabs(trace.samples[i] - med);
  }

  // centered moving average; edge windows shrink to the valid range
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + dev[i];
  const std::size_t half_lo = (window - 1) / 2;
  const std::size_t half_hi = window / 2;
  std::vector<double> envelope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half_lo ? i - half_lo : 0;
    const std::size_t hi = std::min(n - 1, i + half_hi);
    envelope[i] = (prefix[hi + 1] - prefix[lo]) /
                  static_cast<double>(hi - lo + 1);
  }

  const double peak = *std::max_element(envelope.begin(), envelope.end());
  if (peak <= 0.0) {
    return Segment{0, n - 1};  // flat trace: no burst to isolate
  }
  const double tau = config.rel_threshold * peak;
  std::size_t first = 0;
  while (envelope[first] < tau) ++first;
  std::size_t last = n - 1;
  while (envelope[last] < tau) --last;

  const std::size_t margin =
      static_cast<std::size_t>(std::llround(config.margin_s * rate));
  Segment seg;
  seg.start_idx = first >= margin ? first - margin : 0;
  seg.end_idx = std::min(n - 1, last + margin);
  return seg;
}

std::vector<double> extract_and_pad(const Trace& trace, const Segment& seg,
                                    std::size_t fixed_len) {
  if (fixed_len == 0) throw Error("fixed_len must be positive");
  const std::size_t n = trace.samples.size();
  if (seg.start_idx > seg.end_idx || seg.end_idx >= n) {
    throw Error("segment [" + std::to_string(seg.start_idx) + ", " +
                std::to_string(seg.end_idx) +
                "] out of bounds for trace of length " + std::to_string(n));
  }
  std::vector<double> out(fixed_len, 0.0);
  const std::size_t count = std::min(fixed_len, seg.length());
  std::copy_n(trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.start_idx),
              count, out.begin());
  return out;
}

std::vector<double> standardize(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error("standardize needs at least 2 values, got " +
                std::to_string(n));
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double std_pop = std::sqrt(var / static_cast<double>(n));
  if (std_pop < 1e-12) throw Error("constant vector");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (values[i] - mean) / std_pop;
  return out;
}

FeatureVector preprocess(const Trace& trace, const DenoiseConfig& denoise_cfg,
                         const SegmentConfig& seg_cfg) {
  const Trace denoised = denoise(trace, denoise_cfg);
  const Segment seg = detect_segment(denoised, seg_cfg);
  FeatureVector fv;
  fv.values = standardize(extract_and_pad(denoised, seg, seg_cfg.fixed_len));
  fv.label = trace.label;
  return fv;
}

}  // namespace lws
