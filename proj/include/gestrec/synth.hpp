#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gestrec/rng.hpp"
#include "gestrec/sequence.hpp"

namespace gestrec {

constexpr std::size_t kNumGestureClasses = 6;

enum class SensorMask {
    both,
    accel_only,  // gyroscope channels zeroed
    gyro_only,   // accelerometer channels zeroed
};

const char* mask_name(SensorMask mask);
SensorMask mask_from_name(const std::string& name);

enum class WaveKind { sine, gauss };

// One waveform primitive on the unit time axis u in [0,1]:
//   sine:  amplitude * sin(2*pi*shape*u + position)      (shape = cycles, position = phase)
//   gauss: amplitude * exp(-(u-position)^2 / (2*shape^2)) (shape = width,  position = center)
struct Wave {
    WaveKind kind = WaveKind::sine;
    double amplitude = 0.0;
    double shape = 1.0;
    double position = 0.0;
};

// Parametric description of one gesture class: up to a few primitives per
// channel, summed, rendered over a nominal duration.
struct GestureTemplate {
    int cls = 0;
    std::size_t nominal_duration = 60;
    std::array<std::vector<Wave>, kNumChannels> channels;
};

struct GenConfig {
    std::uint64_t seed = 1;
    double duration_jitter = 0.2;   // fraction of nominal duration, in [0,1)
    double amplitude_jitter = 0.2;  // fraction of primitive amplitude, in [0,1)
    double noise_sigma = 0.25;      // additive gaussian noise
    std::size_t gap_min = 5;        // inter-gesture gap length range (timesteps)
    std::size_t gap_max = 15;
    SensorMask mask = SensorMask::both;
};

// The fixed six-class template table shipped with this project. Classes
// differ in their dominant channel and pulse count; classes 1-3 lead on the
// accelerometer, 4-6 on the gyroscope.
const std::array<GestureTemplate, kNumGestureClasses>& default_templates();

// Noise-free rendering at the nominal duration; used by the separability
// check and by tests.
std::vector<SensorSample> render_nominal(const GestureTemplate& tpl);

// One jittered, noisy gesture instance, fully labeled, single segment.
SensorSequence gen_gesture(const GestureTemplate& tpl, const GenConfig& cfg, Rng& rng);

// Back-to-back session: the given classes in order, short noise-only gaps in
// between. Gap timesteps are labeled with the preceding gesture's class;
// segments record the gesture spans proper.
SensorSequence gen_session(const std::vector<int>& classes, const GenConfig& cfg, Rng& rng);

struct Dataset {
    std::vector<SensorSequence> train;          // single gestures, class-balanced
    std::vector<SensorSequence> test_singles;   // held-out single gestures
    std::vector<SensorSequence> test_sessions;  // multi-gesture sequences
    std::vector<std::vector<int>> session_truths;
};

// Seeded train/test generation on disjoint derived RNG streams.
Dataset gen_dataset(const GenConfig& cfg, std::size_t n_train_per_class,
                    std::size_t n_test_per_class, const std::vector<std::vector<int>>& session_specs);

// Random session specs: each picks a length in [min_len, max_len] and that
// many distinct classes.
std::vector<std::vector<int>> random_session_specs(std::size_t count, std::size_t min_len,
                                                   std::size_t max_len, Rng& rng);

// Zeroes the channels excluded by the mask, in place.
void apply_mask(SensorSequence& seq, SensorMask mask);

// CSV exchange format: header "ax,ay,az,gx,gy,gz[,label]", one row per
// timestep, values printed with 9 significant digits, label a 1-based
// integer. Segments are not stored.
void save_csv(const SensorSequence& seq, const std::string& path);
SensorSequence load_csv(const std::string& path);

// Dataset manifest: file role (train/test) and per-session ground truth R.
struct ManifestEntry {
    std::string path;  // relative to the manifest's directory
    std::string role;  // "train" or "test"
    std::vector<int> truth;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

void save_manifest(const Manifest& manifest, const std::string& path);
Manifest load_manifest(const std::string& path);

}  // namespace gestrec
