#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lws {

/// Error type thrown by every operation in the library. Messages name the
/// offending record/file where that is meaningful.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The eight gesture classes, serialized as the letters 'a'..'h'.
/// Ordinals 0..7 are fixed; confusion matrices and vote counts index by them.
enum class GestureLabel : int { A = 0, B, C, D, E, F, G, H };

inline constexpr int kNumGestures = 8;

char label_to_char(GestureLabel label);
GestureLabel label_from_char(char c);
GestureLabel label_from_ordinal(int ordinal);

/// Acquisition conditions of one recording.
struct AcquisitionMeta {
  double distance_cm = 20.0;
  bool ambient_on = true;
  double sample_rate_hz = 100.0;
  double duration_s = 6.0;

  /// Sample count implied by rate and duration; a trace must match it.
  std::size_t expected_samples() const;
  /// Throws Error if any field is out of range.
  void validate() const;
};

/// One fixed-duration light-intensity recording. Intensity units are
/// arbitrary-linear; the pipeline is affine-invariant so calibration does
/// not matter. Immutable by convention after construction.
struct Trace {
  std::vector<double> samples;
  AcquisitionMeta meta;
  std::optional<GestureLabel> label;

  /// Throws Error naming the problem: length/metadata mismatch or
  /// non-finite sample.
  void validate() const;
};

/// A labeled collection of traces sharing one sample rate.
struct Dataset {
  std::vector<Trace> traces;

  std::size_t size() const { return traces.size(); }
  /// Throws Error naming the first offending trace index.
  void validate() const;
};

}  // namespace lws
