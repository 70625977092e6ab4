#include "lws/trace.hpp"

#include <cmath>

namespace lws {

char label_to_char(GestureLabel label) {
  return static_cast<char>('a' + static_cast<int>(label));
}

GestureLabel label_from_char(char c) {
  if (c < 'a' || c > 'h') {
    throw Error(std::string("unknown gesture label '") + c +
                "' (expected 'a'..'h')");
  }
  return static_cast<GestureLabel>(c - 'a');
}

GestureLabel label_from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal >= kNumGestures) {
    throw Error("gesture ordinal " + std::to_string(ordinal) +
                " out of range 0..7");
  }
  return static_cast<GestureLabel>(ordinal);
}

std::size_t AcquisitionMeta::expected_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * duration_s));
}

void AcquisitionMeta::validate() const {
  if (!(distance_cm > 0.0)) {
    throw Error("distance_cm must be positive, got " +
                std::to_string(distance_cm));
  }
  if (!(sample_rate_hz > 0.0)) {
    throw Error("sample_rate_hz must be positive, got " +
                std::to_string(sample_rate_hz));
  }
  if (!(duration_s > 0.0)) {
    throw Error("duration_s must be positive, got " +
                std::to_string(duration_s));
  }
}

void Trace::validate() const {
  meta.validate();
  const std::size_t expected = meta.expected_samples();
  if (samples.size() != expected) {
    throw Error("trace has " + std::to_string(samples.size()) +
                " samples but metadata implies " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw Error("non-finite sample at index " + std::to_string(i));
    }
  }
}

void Dataset::validate() const {
  if (traces.empty()) throw Error("empty dataset");
  const double rate = traces.front().meta.sample_rate_hz;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const Trace& t = traces[i];
    try {
      t.validate();
    } catch (const Error& e) {
      throw Error("trace " + std::to_string(i) + ": " + e.what());
    }
    if (!t.label.has_value()) {
      throw Error("trace " + std::to_string(i) + ": missing label");
    }
    if (t.meta.sample_rate_hz != rate) {
      throw Error("trace " + std::to_string(i) +
                  ": sample rate differs from the rest of the dataset");
    }
  }
}

}  // namespace lws
