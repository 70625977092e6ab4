#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "lws/rng.hpp"
#include "lws/trace.hpp"

namespace lws {

/// Distance at which snr_ref_db is defined and at which attenuation is 1.
inline constexpr double kRefDistanceCm = 20.0;

/// Flicker interference tones as they appear in a 100 Hz record: mains
/// lighting (120 Hz) folds to 20 Hz, monitor refresh (60 Hz) folds to 40 Hz.
inline constexpr double kFlickerToneHz[2] = {20.0, 40.0};

struct GenConfig {
  std::uint64_t seed = 42;
  int reps_per_class = 120;
  double distance_cm = 20.0;
  bool ambient_on = true;
  double baseline = 1.0;
  /// SNR of the gesture signal against the white-noise floor when recorded
  /// at kRefDistanceCm. The noise floor itself does not change with
  /// distance; only the signal attenuates.
  double snr_ref_db = 25.0;
  double time_jitter = 0.15;  // pulse centers move by up to +-jitter/2 of the template span
  double amp_jitter = 0.2;    // pulse amplitudes scale by 1 +- amp_jitter
  double onset_min_s = 0.5;
  double onset_max_s = 2.5;
  double sample_rate_hz = 100.0;
  double duration_s = 6.0;

  void validate() const;
};

/// Pulse composition standing in for one gesture waveform: a sum of
/// Gaussian bumps placed along the template span.
struct ClassTemplate {
  struct Pulse {
    double center_frac = 0.5;  // position within the template span, 0..1
    double width_s = 0.2;      // Gaussian sigma in seconds
    double amplitude = 1.0;    // signed scale relative to the class peak
  };

  GestureLabel label = GestureLabel::A;
  double duration_s = 2.5;  // template span, 2..3 s
  std::vector<Pulse> pulses;

  void validate() const;
};

/// The eight built-in gesture morphologies. The checked-in
/// configs/gesture_templates.json mirrors these values.
const std::array<ClassTemplate, kNumGestures>& default_templates();

/// Loads templates from a JSON file: {"templates": [{label, duration_s,
/// pulses: [{center_frac, width_s, amplitude}]}]}. Exactly one template per
/// class is required.
std::array<ClassTemplate, kNumGestures> load_templates(
    const std::filesystem::path& path);

/// One synthetic trace:
///   samples = baseline + (kRef/d)^2 * g(t) + noise(t)
/// where g is the template's pulse sum with jittered centers/amplitudes and
/// a random onset, and noise is white Gaussian at the level implied by
/// snr_ref_db plus, under ambient light, the two flicker tones at 10% of
/// baseline. The rng draw order is fixed (onset, per-pulse jitters, tone
/// phases, per-sample noise) and every draw happens regardless of
/// configuration, so matched seeds stay matched across distance and
/// ambient settings.
Trace generate_trace(const ClassTemplate& tmpl, const GenConfig& cfg, Rng& rng);

/// reps_per_class traces per class, order shuffled by seed. Trace content
/// is a pure function of (seed, class, repetition): per-trace rng streams
/// are derived with derive_stream_seed, so generation order cannot matter.
Dataset generate_dataset(const GenConfig& cfg);
Dataset generate_dataset(const GenConfig& cfg,
                         const std::array<ClassTemplate, kNumGestures>& templates);

}  // namespace lws
