#include "gestrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace gestrec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double render_wave(const Wave& w, double u, double amp_scale) {
    const double a = w.amplitude * amp_scale;
    if (w.kind == WaveKind::sine) {
        return a * std::sin(2.0 * kPi * w.shape * u + w.position);
    }
    const double d = (u - w.position) / w.shape;
    return a * std::exp(-0.5 * d * d);
}

void check_config(const GenConfig& cfg) {
    if (cfg.duration_jitter < 0.0 || cfg.duration_jitter >= 1.0 ||
        cfg.amplitude_jitter < 0.0 || cfg.amplitude_jitter >= 1.0) {
        throw std::invalid_argument("gen: jitter fractions must be in [0,1)");
    }
    if (cfg.noise_sigma < 0.0) throw std::invalid_argument("gen: noise sigma must be >= 0");
    if (cfg.gap_min > cfg.gap_max) throw std::invalid_argument("gen: gap_min exceeds gap_max");
}

}  // namespace

const char* mask_name(SensorMask mask) {
    switch (mask) {
        case SensorMask::accel_only: return "accel";
        case SensorMask::gyro_only: return "gyro";
        default: return "both";
    }
}

SensorMask mask_from_name(const std::string& name) {
    if (name == "accel") return SensorMask::accel_only;
    if (name == "gyro") return SensorMask::gyro_only;
    if (name == "both") return SensorMask::both;
    throw std::invalid_argument("unknown sensor mask '" + name + "' (expected accel, gyro, or both)");
}

const std::array<GestureTemplate, kNumGestureClasses>& default_templates() {
    static const std::array<GestureTemplate, kNumGestureClasses> table = [] {
        std::array<GestureTemplate, kNumGestureClasses> t{};
        // Channel indices: 0 ax, 1 ay, 2 az, 3 gx, 4 gy, 5 gz.
        t[0].cls = 1;
        t[0].channels[0] = {{WaveKind::gauss, 1.6, 0.12, 0.5}};
        t[0].channels[3] = {{WaveKind::sine, 0.5, 1.0, 0.0}};

        t[1].cls = 2;
        t[1].channels[1] = {{WaveKind::gauss, 1.5, 0.09, 0.32}, {WaveKind::gauss, -1.5, 0.09, 0.68}};
        t[1].channels[4] = {{WaveKind::sine, 0.5, 1.0, kPi / 2.0}};

        t[2].cls = 3;
        t[2].channels[2] = {{WaveKind::sine, 1.5, 1.0, 0.0}};
        t[2].channels[5] = {{WaveKind::gauss, 0.6, 0.15, 0.5}};

        t[3].cls = 4;
        t[3].channels[3] = {{WaveKind::sine, 1.6, 2.0, 0.0}};
        t[3].channels[0] = {{WaveKind::gauss, 0.5, 0.2, 0.5}};

        t[4].cls = 5;
        t[4].channels[4] = {{WaveKind::gauss, 1.7, 0.2, 0.5}};
        t[4].channels[1] = {{WaveKind::sine, 0.6, 1.5, 0.0}};

        t[5].cls = 6;
        t[5].channels[5] = {{WaveKind::gauss, 1.4, 0.07, 0.2},
                            {WaveKind::gauss, -1.4, 0.07, 0.5},
                            {WaveKind::gauss, 1.4, 0.07, 0.8}};
        t[5].channels[2] = {{WaveKind::sine, 0.5, 0.5, 0.0}};

        for (auto& tpl : t) tpl.nominal_duration = 60;
        return t;
    }();
    return table;
}

std::vector<SensorSample> render_nominal(const GestureTemplate& tpl) {
    const std::size_t d = tpl.nominal_duration;
    std::vector<SensorSample> samples(d);
    for (std::size_t t = 0; t < d; ++t) {
        const double u = (d > 1) ? static_cast<double>(t) / static_cast<double>(d - 1) : 0.0;
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            double v = 0.0;
            for (const Wave& w : tpl.channels[ch]) v += render_wave(w, u, 1.0);
            samples[t].set_channel(ch, v);
        }
    }
    return samples;
}

void apply_mask(SensorSequence& seq, SensorMask mask) {
    if (mask == SensorMask::both) return;
    const std::size_t first = (mask == SensorMask::accel_only) ? 3 : 0;
    for (auto& s : seq.samples) {
        for (std::size_t ch = first; ch < first + 3; ++ch) s.set_channel(ch, 0.0);
    }
}

SensorSequence gen_gesture(const GestureTemplate& tpl, const GenConfig& cfg, Rng& rng) {
    check_config(cfg);
    const double nominal = static_cast<double>(tpl.nominal_duration);

    std::size_t duration = tpl.nominal_duration;
    if (cfg.duration_jitter > 0.0) {
        const double lo = nominal * (1.0 - cfg.duration_jitter);
        const double hi = nominal * (1.0 + cfg.duration_jitter);
        const double drawn = std::llround(rng.uniform(lo, hi));
        duration = static_cast<std::size_t>(std::clamp(drawn, std::ceil(lo), std::floor(hi)));
    }
    duration = std::max<std::size_t>(duration, 2);

    // One amplitude scale per primitive, in a fixed channel-major order.
    std::array<std::vector<double>, kNumChannels> amp_scales;
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
        amp_scales[ch].resize(tpl.channels[ch].size(), 1.0);
        if (cfg.amplitude_jitter > 0.0) {
            for (double& s : amp_scales[ch]) {
                s = 1.0 + rng.uniform(-cfg.amplitude_jitter, cfg.amplitude_jitter);
            }
        }
    }

    SensorSequence seq;
    seq.samples.resize(duration);
    for (std::size_t t = 0; t < duration; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(duration - 1);
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            double v = 0.0;
            for (std::size_t wi = 0; wi < tpl.channels[ch].size(); ++wi) {
                v += render_wave(tpl.channels[ch][wi], u, amp_scales[ch][wi]);
            }
            if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * rng.gaussian();
            seq.samples[t].set_channel(ch, v);
        }
    }
    seq.labels.assign(duration, tpl.cls);
    seq.segments = {{tpl.cls, 0, duration}};
    apply_mask(seq, cfg.mask);
    return seq;
}

SensorSequence gen_session(const std::vector<int>& classes, const GenConfig& cfg, Rng& rng) {
    check_config(cfg);
    if (classes.empty()) throw std::invalid_argument("gen_session: empty class list");
    if (classes.size() > 8) throw std::invalid_argument("gen_session: at most 8 gestures per session");
    const auto& templates = default_templates();
    for (int cls : classes) {
        if (cls < 1 || static_cast<std::size_t>(cls) > kNumGestureClasses) {
            throw std::invalid_argument("gen_session: class index out of range 1..6");
        }
    }

    SensorSequence session;
    for (std::size_t gi = 0; gi < classes.size(); ++gi) {
        const SensorSequence gesture = gen_gesture(templates[classes[gi] - 1], cfg, rng);
        const std::size_t begin = session.size();
        session.samples.insert(session.samples.end(), gesture.samples.begin(), gesture.samples.end());
        session.labels.insert(session.labels.end(), gesture.labels.begin(), gesture.labels.end());
        session.segments.push_back({classes[gi], begin, begin + gesture.size()});

        if (gi + 1 < classes.size() && cfg.gap_max > 0) {
            const std::size_t gap =
                cfg.gap_min + static_cast<std::size_t>(rng.uniform_index(cfg.gap_max - cfg.gap_min + 1));
            for (std::size_t t = 0; t < gap; ++t) {
                SensorSample s;
                for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
                    s.set_channel(ch, cfg.noise_sigma > 0.0 ? cfg.noise_sigma * rng.gaussian() : 0.0);
                }
                session.samples.push_back(s);
                session.labels.push_back(classes[gi]);  // gaps inherit the preceding class
            }
        }
    }
    apply_mask(session, cfg.mask);
    return session;
}

Dataset gen_dataset(const GenConfig& cfg, std::size_t n_train_per_class,
                    std::size_t n_test_per_class, const std::vector<std::vector<int>>& session_specs) {
    check_config(cfg);
    if (n_train_per_class < 1) throw std::invalid_argument("gen_dataset: n_train_per_class must be >= 1");
    const auto& templates = default_templates();

    Dataset ds;
    Rng train_rng(derive_seed(cfg.seed, 1));
    for (std::size_t cls = 0; cls < kNumGestureClasses; ++cls) {
        for (std::size_t i = 0; i < n_train_per_class; ++i) {
            ds.train.push_back(gen_gesture(templates[cls], cfg, train_rng));
        }
    }

    Rng test_rng(derive_seed(cfg.seed, 2));
    for (std::size_t cls = 0; cls < kNumGestureClasses; ++cls) {
        for (std::size_t i = 0; i < n_test_per_class; ++i) {
            ds.test_singles.push_back(gen_gesture(templates[cls], cfg, test_rng));
        }
    }

    Rng session_rng(derive_seed(cfg.seed, 3));
    for (const auto& spec : session_specs) {
        ds.test_sessions.push_back(gen_session(spec, cfg, session_rng));
        ds.session_truths.push_back(spec);
    }
    return ds;
}

std::vector<std::vector<int>> random_session_specs(std::size_t count, std::size_t min_len,
                                                   std::size_t max_len, Rng& rng) {
    if (min_len < 1 || max_len > kNumGestureClasses || min_len > max_len) {
        throw std::invalid_argument("random_session_specs: lengths must satisfy 1 <= min <= max <= 6");
    }
    std::vector<std::vector<int>> specs;
    specs.reserve(count);
    std::vector<int> pool(kNumGestureClasses);
    std::iota(pool.begin(), pool.end(), 1);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t len = min_len + static_cast<std::size_t>(rng.uniform_index(max_len - min_len + 1));
        rng.shuffle(pool);
        specs.emplace_back(pool.begin(), pool.begin() + len);
    }
    return specs;
}

std::vector<int> expand_segments(const std::vector<Segment>& segments, std::size_t total_len) {
    std::vector<int> labels(total_len, 0);
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const Segment& seg = segments[si];
        const std::size_t fill_end = (si + 1 < segments.size()) ? segments[si + 1].begin : total_len;
        for (std::size_t t = seg.begin; t < fill_end && t < total_len; ++t) labels[t] = seg.cls;
    }
    return labels;
}

void save_csv(const SensorSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
    const bool with_labels = seq.labeled();
    out << "ax,ay,az,gx,gy,gz" << (with_labels ? ",label" : "") << "\n";
    char buf[32];
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            std::snprintf(buf, sizeof(buf), "%.9g", seq.samples[t].channel(ch));
            out << (ch ? "," : "") << buf;
        }
        if (with_labels) out << "," << seq.labels[t];
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_csv: write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

[[noreturn]] void csv_error(const std::string& path, std::size_t line_no, const std::string& what) {
    char msg[256];
    std::snprintf(msg, sizeof(msg), "load_csv: %s:%zu: %s", path.c_str(), line_no, what.c_str());
    throw std::runtime_error(msg);
}

}  // namespace

SensorSequence load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    bool with_labels;
    if (line == "ax,ay,az,gx,gy,gz,label") {
        with_labels = true;
    } else if (line == "ax,ay,az,gx,gy,gz") {
        with_labels = false;
    } else {
        throw std::runtime_error("load_csv: '" + path + "' has an unrecognized header: " + line);
    }
    const std::size_t expected_fields = kNumChannels + (with_labels ? 1 : 0);

    SensorSequence seq;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected_fields) {
            char what[96];
            std::snprintf(what, sizeof(what), "expected %zu columns, got %zu", expected_fields,
                          fields.size());
            csv_error(path, line_no, what);
        }
        SensorSample sample;
        for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
            char* end = nullptr;
            const double v = std::strtod(fields[ch].c_str(), &end);
            if (end == fields[ch].c_str() || *end != '\0' || !std::isfinite(v)) {
                csv_error(path, line_no, "malformed value '" + fields[ch] + "'");
            }
            sample.set_channel(ch, v);
        }
        seq.samples.push_back(sample);
        if (with_labels) {
            char* end = nullptr;
            const long label = std::strtol(fields[kNumChannels].c_str(), &end, 10);
            if (end == fields[kNumChannels].c_str() || *end != '\0' || label < 1) {
                csv_error(path, line_no, "malformed label '" + fields[kNumChannels] + "'");
            }
            seq.labels.push_back(static_cast<int>(label));
        }
    }
    if (seq.samples.empty()) throw std::runtime_error("load_csv: '" + path + "' has no samples");
    return seq;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& e : manifest.entries) {
        nlohmann::ordered_json entry;
        entry["path"] = e.path;
        entry["role"] = e.role;
        entry["truth"] = e.truth;
        entry["k"] = e.truth.size();
        j["files"].push_back(entry);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_manifest: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("save_manifest: write to '" + path + "' failed");
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_manifest: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_manifest: '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("version") || j["version"].get<int>() != 1) {
        throw std::runtime_error("load_manifest: '" + path + "' has an unsupported version");
    }
    Manifest manifest;
    for (const auto& entry : j.at("files")) {
        ManifestEntry e;
        e.path = entry.at("path").get<std::string>();
        e.role = entry.at("role").get<std::string>();
        if (e.role != "train" && e.role != "test") {
            throw std::runtime_error("load_manifest: entry '" + e.path + "' has unknown role '" + e.role + "'");
        }
        e.truth = entry.at("truth").get<std::vector<int>>();
        if (entry.contains("k") && entry["k"].get<std::size_t>() != e.truth.size()) {
            throw std::runtime_error("load_manifest: entry '" + e.path + "' has k inconsistent with its truth list");
        }
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

}  // namespace gestrec
