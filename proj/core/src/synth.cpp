#include "lws/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

namespace lws {
namespace {

constexpr std::uint64_t kShuffleStream = 0x8000000000000000ULL;

std::array<ClassTemplate, kNumGestures> build_defaults() {
  using P = ClassTemplate::Pulse;
  std::array<ClassTemplate, kNumGestures> t{};
  // a: single swipe, one broad bump
  t[0] = {GestureLabel::A, 2.4, {P{0.50, 0.30, 1.0}}};
  // b: push-pull, biphasic
  t[1] = {GestureLabel::B, 2.4, {P{0.32, 0.18, 1.0}, P{0.68, 0.18, -0.9}}};
  // c: double tap
  t[2] = {GestureLabel::C, 2.0, {P{0.30, 0.09, 1.0}, P{0.70, 0.09, 1.0}}};
  // d: triple tap
  t[3] = {GestureLabel::D, 2.4,
          {P{0.20, 0.09, 1.0}, P{0.50, 0.09, 1.0}, P{0.80, 0.09, 1.0}}};
  // e: slow hover, one long low bump
  t[4] = {GestureLabel::E, 3.0, {P{0.50, 0.55, 0.8}}};
  // f: block, single dip
  t[5] = {GestureLabel::F, 2.2, {P{0.50, 0.25, -1.0}}};
  // g: wave, alternating thirds
  t[6] = {GestureLabel::G, 2.6,
          {P{0.25, 0.12, 0.9}, P{0.50, 0.12, -0.9}, P{0.75, 0.12, 0.9}}};
  // h: flutter, four quick alternations
  t[7] = {GestureLabel::H, 2.8,
          {P{0.15, 0.08, 0.8}, P{0.38, 0.08, -0.8}, P{0.62, 0.08, 0.8},
           P{0.85, 0.08, -0.8}}};
  for (const auto& tmpl : t) tmpl.validate();
  return t;
}

}  // namespace

void GenConfig::validate() const {
  if (reps_per_class < 1) {
    throw Error("reps_per_class must be at least 1, got " +
                std::to_string(reps_per_class));
  }
  if (!(distance_cm > 0.0)) throw Error("distance_cm must be positive");
  if (!(time_jitter >= 0.0 && time_jitter < 1.0)) {
    throw Error("time_jitter must lie in [0, 1)");
  }
  if (!(amp_jitter >= 0.0 && amp_jitter < 1.0)) {
    throw Error("amp_jitter must lie in [0, 1)");
  }
  if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0)) {
    throw Error("sample_rate_hz and duration_s must be positive");
  }
  const double onset_limit = duration_s - 3.0;
  if (!(onset_min_s >= 0.0 && onset_min_s <= onset_max_s &&
        onset_max_s <= onset_limit)) {
    throw Error("onset range [" + std::to_string(onset_min_s) + ", " +
                std::to_string(onset_max_s) + "] must lie within [0, " +
                std::to_string(onset_limit) + "]");
  }
}

void ClassTemplate::validate() const {
  if (pulses.empty() || pulses.size() > 4) {
    throw Error("template needs 1..4 pulses, got " +
                std::to_string(pulses.size()));
  }
  if (!(duration_s >= 2.0 && duration_s <= 3.0)) {
    throw Error("template duration must lie in [2, 3] s, got " +
                std::to_string(duration_s));
  }
  double prev = -1.0;
  for (const Pulse& p : pulses) {
    if (!(p.center_frac >= 0.0 && p.center_frac <= 1.0)) {
      throw Error("pulse center_frac must lie in [0, 1]");
    }
    if (p.center_frac <= prev) {
      throw Error("pulse centers must be strictly increasing");
    }
    prev = p.center_frac;
    if (!(p.width_s > 0.0)) throw Error("pulse width must be positive");
    if (p.amplitude == 0.0) throw Error("pulse amplitude must be nonzero");
  }
}

const std::array<ClassTemplate, kNumGestures>& default_templates() {
  static const auto templates = build_defaults();
  return templates;
}

std::array<ClassTemplate, kNumGestures> load_templates(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::array<ClassTemplate, kNumGestures> out{};
  std::array<bool, kNumGestures> seen{};
  try {
    nlohmann::json doc;
    in >> doc;
    for (const auto& entry : doc.at("templates")) {
      ClassTemplate tmpl;
      const std::string label = entry.at("label").get<std::string>();
      if (label.size() != 1) throw Error("bad label '" + label + "'");
      tmpl.label = label_from_char(label[0]);
      tmpl.duration_s = entry.at("duration_s").get<double>();
      for (const auto& pj : entry.at("pulses")) {
        tmpl.pulses.push_back({pj.at("center_frac").get<double>(),
                               pj.at("width_s").get<double>(),
                               pj.at("amplitude").get<double>()});
      }
      tmpl.validate();
      const auto ordinal = static_cast<std::size_t>(tmpl.label);
      if (seen[ordinal]) {
        throw Error(std::string("duplicate template for class '") +
                    label_to_char(tmpl.label) + "'");
      }
      seen[ordinal] = true;
      out[ordinal] = std::move(tmpl);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  for (int c = 0; c < kNumGestures; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw Error(std::string("missing template for class '") +
                  label_to_char(label_from_ordinal(c)) + "'");
    }
  }
  return out;
}

Trace generate_trace(const ClassTemplate& tmpl, const GenConfig& cfg,
                     Rng& rng) {
  cfg.validate();
  tmpl.validate();

  const std::size_t n =
      static_cast<std::size_t>(std::llround(cfg.sample_rate_hz * cfg.duration_s));
  const double dt = 1.0 / cfg.sample_rate_hz;
  const double span = tmpl.duration_s;

  // Fixed draw order; see header.
  const double onset = rng.uniform(cfg.onset_min_s, cfg.onset_max_s);
  struct Placed {
    double center_s, width_s, amplitude;
  };
  std::vector<Placed> placed;
  placed.reserve(tmpl.pulses.size());
  for (const ClassTemplate::Pulse& p : tmpl.pulses) {
    const double shift = cfg.time_jitter * span * rng.uniform(-0.5, 0.5);
    const double scale = 1.0 + cfg.amp_jitter * rng.uniform(-1.0, 1.0);
    placed.push_back(
        {onset + p.center_frac * span + shift, p.width_s, p.amplitude * scale});
  }
  const double phase_20 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double phase_40 = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<double> gesture(n, 0.0);
  double power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double g = 0.0;
    for (const Placed& p : placed) {
      const double z = (t - p.center_s) / p.width_s;
      g += p.amplitude * std::exp(-0.5 * z * z);
    }
    gesture[i] = g;
    power += g * g;
  }
  power /= static_cast<double>(n);

  // Noise floor fixed by the reference condition; attenuation only weakens
  // the signal, which is what degrades SNR with distance.
  const double sigma = std::isinf(cfg.snr_ref_db)
                           ? 0.0
                           : std::sqrt(power / std::pow(10.0, cfg.snr_ref_db / 10.0));
  const double atten = (kRefDistanceCm / cfg.distance_cm) *
                       (kRefDistanceCm / cfg.distance_cm);
  const double tone_amp = 0.1 * cfg.baseline;

  Trace trace;
  trace.meta = {cfg.distance_cm, cfg.ambient_on, cfg.sample_rate_hz,
                cfg.duration_s};
  trace.label = tmpl.label;
  trace.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double white = rng.next_gaussian() * sigma;
    double flicker = 0.0;
    if (cfg.ambient_on) {
      flicker =
          tone_amp * std::sin(2.0 * std::numbers::pi * kFlickerToneHz[0] * t +
                              phase_20) +
          tone_amp * std::sin(2.0 * std::numbers::pi * kFlickerToneHz[1] * t +
                              phase_40);
    }
    trace.samples[i] = cfg.baseline + atten * gesture[i] + white + flicker;
  }
  return trace;
}

Dataset generate_dataset(const GenConfig& cfg) {
  return generate_dataset(cfg, default_templates());
}

Dataset generate_dataset(
    const GenConfig& cfg,
    const std::array<ClassTemplate, kNumGestures>& templates) {
  cfg.validate();
  for (int c = 0; c < kNumGestures; ++c) {
    const auto& tmpl = templates[static_cast<std::size_t>(c)];
    tmpl.validate();
    if (static_cast<int>(tmpl.label) != c) {
      throw Error("templates must be ordered a..h by class");
    }
  }

  Dataset ds;
  const auto reps = static_cast<std::uint64_t>(cfg.reps_per_class);
  ds.traces.reserve(static_cast<std::size_t>(reps) * kNumGestures);
  for (std::uint64_t c = 0; c < kNumGestures; ++c) {
    for (std::uint64_t r = 0; r < reps; ++r) {
      Rng rng(derive_stream_seed(cfg.seed, c * reps + r));
      ds.traces.push_back(
          generate_trace(templates[static_cast<std::size_t>(c)], cfg, rng));
    }
  }
  Rng shuffle_rng(derive_stream_seed(cfg.seed, kShuffleStream));
  shuffle(ds.traces, shuffle_rng);
  return ds;
}

}  // namespace lws
