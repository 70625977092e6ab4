#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lws/trace.hpp"
#include "lws/wavelet.hpp"

namespace lws {

/// Inclusive sample range of the detected gesture burst.
struct Segment {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;

  std::size_t length() const { return end_idx - start_idx + 1; }
};

struct SegmentConfig {
  double envelope_window_s = 0.25;
  double rel_threshold = 0.2;   // fraction of the envelope peak, in (0,1)
  double margin_s = 0.1;
  std::size_t fixed_len = 600;

  void validate() const;
};

/// Fixed-length classifier input: zero mean, unit population std after
/// standardize().
struct FeatureVector {
  std::vector<double> values;
  std::optional<GestureLabel> label;
};

/// Activity-envelope burst detection. The envelope is a centered moving
/// average of |x - median(x)|; the segment spans the first to last sample
/// where the envelope reaches rel_threshold * max(envelope), widened by
/// margin_s and clamped to the trace. A flat trace (zero envelope) yields
/// the full trace.
Segment detect_segment(const Trace& trace, const SegmentConfig& config);

/// samples[start..end] followed by trailing zeros up to fixed_len; segments
/// longer than fixed_len are truncated to their first fixed_len samples.
std::vector<double> extract_and_pad(const Trace& trace, const Segment& seg,
                                    std::size_t fixed_len);

/// (x - mean) / population_std. Throws Error("constant vector") when the
/// population std falls below 1e-12, which marks a trace with no usable
/// gesture content.
std::vector<double> standardize(std::span<const double> values);

/// denoise -> detect_segment -> extract_and_pad -> standardize, label
/// carried through.
FeatureVector preprocess(const Trace& trace, const DenoiseConfig& denoise_cfg,
                         const SegmentConfig& seg_cfg);

}  // namespace lws
