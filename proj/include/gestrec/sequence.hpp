#pragma once

#include <cstddef>
#include <vector>

#include "gestrec/numerics.hpp"

namespace gestrec {

constexpr std::size_t kNumChannels = 6;  // ax ay az gx gy gz

// One 6-axis IMU sample: 3-axis acceleration plus 3-axis angular rate,
// arbitrary units.
struct SensorSample {
    double ax = 0.0, ay = 0.0, az = 0.0;
    double gx = 0.0, gy = 0.0, gz = 0.0;

    double channel(std::size_t i) const {
        switch (i) {
            case 0: return ax;
            case 1: return ay;
            case 2: return az;
            case 3: return gx;
            case 4: return gy;
            default: return gz;
        }
    }

    void set_channel(std::size_t i, double v) {
        switch (i) {
            case 0: ax = v; break;
            case 1: ay = v; break;
            case 2: az = v; break;
            case 3: gx = v; break;
            case 4: gy = v; break;
            default: gz = v; break;
        }
    }

    Vec to_vec() const { return Vec{ax, ay, az, gx, gy, gz}; }
};

// A gesture span inside a sequence: timesteps [begin, end), 0-based.
// Inter-gesture gap timesteps are not covered by any segment; by the
// labeling rule they carry the preceding segment's class.
struct Segment {
    int cls = 0;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
};

// Time-ordered 6-channel sequence, optionally with per-timestep ground-truth
// labels (1-based class indices; empty vector means unlabeled) and the
// gesture segments it was generated from.
struct SensorSequence {
    std::vector<SensorSample> samples;
    std::vector<int> labels;
    std::vector<Segment> segments;

    std::size_t size() const { return samples.size(); }
    bool labeled() const { return !labels.empty(); }

    std::vector<Vec> to_inputs() const {
        std::vector<Vec> xs;
        xs.reserve(samples.size());
        for (const auto& s : samples) xs.push_back(s.to_vec());
        return xs;
    }
};

// Expands a segment list back into per-timestep labels for a sequence of
// total_len timesteps. Timesteps between two segments (gaps) inherit the
// preceding segment's class.
std::vector<int> expand_segments(const std::vector<Segment>& segments, std::size_t total_len);

}  // namespace gestrec
