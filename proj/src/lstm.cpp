#include "gestrec/lstm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "gestrec/rng.hpp"

namespace gestrec {

namespace {

// Flat view over the five parameter tensors; keeps Adam, clipping, and the
// gradient checker free of per-tensor boilerplate.
struct TensorRef {
    const char* name;
    double* data;
    std::size_t size;
    std::size_t cols;  // 0 for vectors
};

std::array<TensorRef, 5> tensor_refs(LstmParams& p, OutputParams& o) {
    return {{{"w_x", p.w_x.data.data(), p.w_x.size(), p.w_x.cols},
             {"w_h", p.w_h.data.data(), p.w_h.size(), p.w_h.cols},
             {"b", p.b.data(), p.b.size(), 0},
             {"w_y", o.w_y.data.data(), o.w_y.size(), o.w_y.cols},
             {"b_y", o.b_y.data(), o.b_y.size(), 0}}};
}

std::array<TensorRef, 5> tensor_refs(Gradients& g) {
    return {{{"w_x", g.w_x.data.data(), g.w_x.size(), g.w_x.cols},
             {"w_h", g.w_h.data.data(), g.w_h.size(), g.w_h.cols},
             {"b", g.b.data(), g.b.size(), 0},
             {"w_y", g.w_y.data.data(), g.w_y.size(), g.w_y.cols},
             {"b_y", g.b_y.data(), g.b_y.size(), 0}}};
}

std::string coordinate_name(const TensorRef& t, std::size_t flat) {
    char buf[64];
    if (t.cols > 0) {
        std::snprintf(buf, sizeof(buf), "%s[%zu,%zu]", t.name, flat / t.cols, flat % t.cols);
    } else {
        std::snprintf(buf, sizeof(buf), "%s[%zu]", t.name, flat);
    }
    return buf;
}

void check_consistent(const LstmParams& p, const OutputParams& o) {
    const std::size_t h = p.hidden_dim();
    if (p.w_x.rows != 4 * h || p.w_h.rows != 4 * h || p.w_h.cols != h || p.b.size() != 4 * h ||
        o.w_y.cols != h || o.b_y.size() != o.w_y.rows) {
        throw std::invalid_argument("lstm: inconsistent parameter shapes");
    }
}

}  // namespace

Gradients make_zero_gradients(const LstmParams& p, const OutputParams& o) {
    Gradients g;
    g.w_x = Mat(p.w_x.rows, p.w_x.cols);
    g.w_h = Mat(p.w_h.rows, p.w_h.cols);
    g.b = Vec(p.b.size(), 0.0);
    g.w_y = Mat(o.w_y.rows, o.w_y.cols);
    g.b_y = Vec(o.b_y.size(), 0.0);
    return g;
}

void accumulate(Gradients& into, const Gradients& g) {
    auto dst = tensor_refs(into);
    auto src = tensor_refs(const_cast<Gradients&>(g));
    for (std::size_t t = 0; t < dst.size(); ++t) {
        for (std::size_t i = 0; i < dst[t].size; ++i) dst[t].data[i] += src[t].data[i];
    }
}

void scale_gradients(Gradients& g, double factor) {
    for (auto& t : tensor_refs(g)) {
        for (std::size_t i = 0; i < t.size; ++i) t.data[i] *= factor;
    }
}

void init_params(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes,
                 std::uint64_t seed, LstmParams& params, OutputParams& output) {
    if (input_dim < 1 || hidden_dim < 1 || num_classes < 1) {
        throw std::invalid_argument("init_params: dimensions must be >= 1");
    }
    Rng rng(seed);
    auto fill_uniform = [&rng](Mat& m, std::size_t fan_in) {
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& x : m.data) x = rng.uniform(-s, s);
    };
    params.w_x = Mat(4 * hidden_dim, input_dim);
    params.w_h = Mat(4 * hidden_dim, hidden_dim);
    params.b = Vec(4 * hidden_dim, 0.0);
    fill_uniform(params.w_x, input_dim);
    fill_uniform(params.w_h, hidden_dim);
    // Forget-gate bias starts at 1.0 so early training does not forget
    // everything; the other gate biases start at zero.
    std::fill(params.b.begin() + hidden_dim, params.b.begin() + 2 * hidden_dim, 1.0);

    output.w_y = Mat(num_classes, hidden_dim);
    output.b_y = Vec(num_classes, 0.0);
    fill_uniform(output.w_y, hidden_dim);
}

LstmState lstm_step(const LstmParams& params, const Vec& x, const LstmState& prev) {
    const std::size_t h = params.hidden_dim();
    if (x.size() != params.input_dim()) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "lstm_step: input has length %zu, expected %zu",
                      x.size(), params.input_dim());
        throw std::invalid_argument(msg);
    }
    if (prev.h.size() != h || prev.c.size() != h) {
        throw std::invalid_argument("lstm_step: state size does not match hidden dimension");
    }

    Vec gates = params.b;
    matvec_acc(params.w_x, x, gates);
    matvec_acc(params.w_h, prev.h, gates);

    LstmState next;
    next.h.resize(h);
    next.c.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
        const double i_gate = sigmoid_scalar(gates[j]);
        const double f_gate = sigmoid_scalar(gates[h + j]);
        const double g_gate = std::tanh(gates[2 * h + j]);
        const double o_gate = sigmoid_scalar(gates[3 * h + j]);
        next.c[j] = f_gate * prev.c[j] + i_gate * g_gate;
        next.h[j] = o_gate * std::tanh(next.c[j]);
    }
    return next;
}

ForwardTrace forward_sequence(const LstmParams& params, const OutputParams& output,
                              const std::vector<Vec>& inputs) {
    check_consistent(params, output);
    if (inputs.empty()) throw std::invalid_argument("forward_sequence: empty input sequence");

    const std::size_t h = params.hidden_dim();
    ForwardTrace trace;
    trace.steps.resize(inputs.size());

    Vec prev_h(h, 0.0), prev_c(h, 0.0);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        const Vec& x = inputs[t];
        if (x.size() != params.input_dim()) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "forward_sequence: sample %zu has %zu channels, expected %zu",
                          t, x.size(), params.input_dim());
            throw std::invalid_argument(msg);
        }
        StepTrace& s = trace.steps[t];
        s.input = x;

        Vec gates = params.b;
        matvec_acc(params.w_x, x, gates);
        matvec_acc(params.w_h, prev_h, gates);

        s.gate_i.resize(h);
        s.gate_f.resize(h);
        s.gate_g.resize(h);
        s.gate_o.resize(h);
        s.c.resize(h);
        s.tanh_c.resize(h);
        s.h.resize(h);
        for (std::size_t j = 0; j < h; ++j) {
            s.gate_i[j] = sigmoid_scalar(gates[j]);
            s.gate_f[j] = sigmoid_scalar(gates[h + j]);
            s.gate_g[j] = std::tanh(gates[2 * h + j]);
            s.gate_o[j] = sigmoid_scalar(gates[3 * h + j]);
            s.c[j] = s.gate_f[j] * prev_c[j] + s.gate_i[j] * s.gate_g[j];
            s.tanh_c[j] = std::tanh(s.c[j]);
            s.h[j] = s.gate_o[j] * s.tanh_c[j];
        }
        s.logits = output.b_y;
        matvec_acc(output.w_y, s.h, s.logits);
        s.y = softmax(s.logits);

        prev_h = s.h;
        prev_c = s.c;
    }
    return trace;
}

ForwardTrace forward_sequence(const LstmParams& params, const OutputParams& output,
                              const SensorSequence& seq) {
    return forward_sequence(params, output, seq.to_inputs());
}

double sequence_loss(const ForwardTrace& trace, const std::vector<int>& labels) {
    const std::size_t t_len = trace.size();
    if (labels.size() != t_len) {
        throw std::invalid_argument("sequence_loss: labels length does not match trace length");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        const int label = labels[t];
        const std::size_t q = trace.steps[t].y.size();
        if (label < 1 || static_cast<std::size_t>(label) > q) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "sequence_loss: label %d at timestep %zu out of range 1..%zu",
                          label, t, q);
            throw std::invalid_argument(msg);
        }
        sum -= std::log(std::max(trace.steps[t].y[label - 1], 1e-12));
    }
    return sum / static_cast<double>(t_len);
}

Gradients backward_bptt(const LstmParams& params, const OutputParams& output,
                        const ForwardTrace& trace, const std::vector<int>& labels) {
    check_consistent(params, output);
    const std::size_t t_len = trace.size();
    if (labels.size() != t_len) {
        throw std::invalid_argument("backward_bptt: labels length does not match trace length");
    }
    const std::size_t h = params.hidden_dim();
    const std::size_t q = output.num_classes();
    const double inv_t = 1.0 / static_cast<double>(t_len);

    Gradients g = make_zero_gradients(params, output);
    const Vec zeros(h, 0.0);
    Vec dh(h, 0.0), dc(h, 0.0);
    Vec dgates(4 * h);

    for (std::size_t ti = t_len; ti-- > 0;) {
        const StepTrace& s = trace.steps[ti];
        const int label = labels[ti];
        if (label < 1 || static_cast<std::size_t>(label) > q) {
            throw std::invalid_argument("backward_bptt: label out of range");
        }

        // Softmax + cross-entropy head: dL/dlogits = (y - onehot) / T.
        Vec dz = s.y;
        dz[label - 1] -= 1.0;
        for (double& x : dz) x *= inv_t;

        add_outer(g.w_y, dz, s.h);
        for (std::size_t j = 0; j < q; ++j) g.b_y[j] += dz[j];
        {
            const Vec dh_head = matvec_transposed(output.w_y, dz);
            for (std::size_t j = 0; j < h; ++j) dh[j] += dh_head[j];
        }

        const Vec& c_prev = (ti > 0) ? trace.steps[ti - 1].c : zeros;
        const Vec& h_prev = (ti > 0) ? trace.steps[ti - 1].h : zeros;

        for (std::size_t j = 0; j < h; ++j) {
            const double i_g = s.gate_i[j], f_g = s.gate_f[j];
            const double g_g = s.gate_g[j], o_g = s.gate_o[j];
            const double tc = s.tanh_c[j];
            const double dcj = dc[j] + dh[j] * o_g * (1.0 - tc * tc);
            dgates[j] = dcj * g_g * i_g * (1.0 - i_g);                  // input gate
            dgates[h + j] = dcj * c_prev[j] * f_g * (1.0 - f_g);        // forget gate
            dgates[2 * h + j] = dcj * i_g * (1.0 - g_g * g_g);          // cell candidate
            dgates[3 * h + j] = dh[j] * tc * o_g * (1.0 - o_g);         // output gate
            dc[j] = dcj * f_g;                                          // flows to t-1
        }

        add_outer(g.w_x, dgates, s.input);
        add_outer(g.w_h, dgates, h_prev);
        for (std::size_t j = 0; j < 4 * h; ++j) g.b[j] += dgates[j];

        dh = matvec_transposed(params.w_h, dgates);
    }
    return g;
}

void adam_update(LstmParams& params, OutputParams& output, const Gradients& grads,
                 AdamState& state, const TrainConfig& cfg, std::size_t step) {
    if (step < 1) throw std::invalid_argument("adam_update: step must be >= 1");
    auto p_refs = tensor_refs(params, output);
    auto g_refs = tensor_refs(const_cast<Gradients&>(grads));
    auto m_refs = tensor_refs(state.m);
    auto v_refs = tensor_refs(state.v);

    double sq_norm = 0.0;
    for (const auto& t : g_refs) {
        for (std::size_t i = 0; i < t.size; ++i) sq_norm += t.data[i] * t.data[i];
    }
    const double norm = std::sqrt(sq_norm);
    const double clip_scale = (cfg.clip_norm > 0.0 && norm > cfg.clip_norm) ? cfg.clip_norm / norm : 1.0;

    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));

    for (std::size_t t = 0; t < p_refs.size(); ++t) {
        if (p_refs[t].size != g_refs[t].size || p_refs[t].size != m_refs[t].size) {
            throw std::invalid_argument("adam_update: shape mismatch between parameters and moments");
        }
        for (std::size_t i = 0; i < p_refs[t].size; ++i) {
            const double gi = g_refs[t].data[i] * clip_scale;
            double& m = m_refs[t].data[i];
            double& v = v_refs[t].data[i];
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * gi;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * gi * gi;
            p_refs[t].data[i] -= cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.epsilon);
        }
    }
}

TrainResult train(const std::vector<SensorSequence>& dataset, const TrainConfig& cfg) {
    return train(dataset, cfg, {});
}

TrainResult train(const std::vector<SensorSequence>& dataset, const TrainConfig& cfg,
                  const std::function<void(std::size_t, double)>& on_epoch) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    if (cfg.hidden_dim < 1 || cfg.epochs < 1 || cfg.batch_size < 1 || cfg.learning_rate <= 0.0) {
        throw std::invalid_argument("train: config values must be positive");
    }

    int max_label = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const SensorSequence& seq = dataset[i];
        char msg[128];
        if (seq.size() == 0) {
            std::snprintf(msg, sizeof(msg), "train: sequence %zu is empty", i);
            throw std::invalid_argument(msg);
        }
        if (!seq.labeled() || seq.labels.size() != seq.size()) {
            std::snprintf(msg, sizeof(msg), "train: sequence %zu has %zu labels for %zu samples",
                          i, seq.labels.size(), seq.size());
            throw std::invalid_argument(msg);
        }
        for (int label : seq.labels) {
            if (label < 1) {
                std::snprintf(msg, sizeof(msg), "train: sequence %zu has label %d (labels are 1-based)",
                              i, label);
                throw std::invalid_argument(msg);
            }
            max_label = std::max(max_label, label);
        }
    }
    const std::size_t num_classes = std::max<std::size_t>(2, static_cast<std::size_t>(max_label));

    TrainResult result;
    init_params(kNumChannels, cfg.hidden_dim, num_classes, cfg.seed, result.params, result.output);

    AdamState adam{make_zero_gradients(result.params, result.output),
                   make_zero_gradients(result.params, result.output)};
    Gradients batch = make_zero_gradients(result.params, result.output);

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, 0x5f5));

    std::size_t step = 0;
    std::size_t in_batch = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t idx : order) {
            const SensorSequence& seq = dataset[idx];
            const ForwardTrace trace = forward_sequence(result.params, result.output, seq);
            loss_sum += sequence_loss(trace, seq.labels);
            accumulate(batch, backward_bptt(result.params, result.output, trace, seq.labels));
            if (++in_batch == cfg.batch_size) {
                scale_gradients(batch, 1.0 / static_cast<double>(in_batch));
                adam_update(result.params, result.output, batch, adam, cfg, ++step);
                batch = make_zero_gradients(result.params, result.output);
                in_batch = 0;
            }
        }
        if (in_batch > 0) {
            scale_gradients(batch, 1.0 / static_cast<double>(in_batch));
            adam_update(result.params, result.output, batch, adam, cfg, ++step);
            batch = make_zero_gradients(result.params, result.output);
            in_batch = 0;
        }
        const double mean_loss = loss_sum / static_cast<double>(dataset.size());
        result.epoch_loss.push_back(mean_loss);
        if (on_epoch) on_epoch(epoch, mean_loss);
    }
    return result;
}

Gradients numeric_gradients(const LstmParams& params, const OutputParams& output,
                            const std::vector<Vec>& inputs, const std::vector<int>& labels,
                            double step) {
    LstmParams p = params;
    OutputParams o = output;
    Gradients g = make_zero_gradients(p, o);
    auto p_refs = tensor_refs(p, o);
    auto g_refs = tensor_refs(g);

    for (std::size_t t = 0; t < p_refs.size(); ++t) {
        for (std::size_t i = 0; i < p_refs[t].size; ++i) {
            double& coord = p_refs[t].data[i];
            const double saved = coord;
            coord = saved + step;
            const double loss_plus = sequence_loss(forward_sequence(p, o, inputs), labels);
            coord = saved - step;
            const double loss_minus = sequence_loss(forward_sequence(p, o, inputs), labels);
            coord = saved;
            g_refs[t].data[i] = (loss_plus - loss_minus) / (2.0 * step);
        }
    }
    return g;
}

GradCheckReport compare_gradients(const Gradients& analytic, const Gradients& numeric,
                                  double tolerance) {
    auto a_refs = tensor_refs(const_cast<Gradients&>(analytic));
    auto n_refs = tensor_refs(const_cast<Gradients&>(numeric));
    GradCheckReport report;
    for (std::size_t t = 0; t < a_refs.size(); ++t) {
        if (a_refs[t].size != n_refs[t].size) {
            throw std::invalid_argument("compare_gradients: shape mismatch");
        }
        for (std::size_t i = 0; i < a_refs[t].size; ++i) {
            const double a = a_refs[t].data[i];
            const double n = n_refs[t].data[i];
            const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_coordinate = coordinate_name(a_refs[t], i);
            }
        }
    }
    report.passed = report.max_rel_error < tolerance;
    return report;
}

GradCheckReport gradient_check(const LstmParams& params, const OutputParams& output,
                               const std::vector<Vec>& inputs, const std::vector<int>& labels,
                               double step, double tolerance) {
    const ForwardTrace trace = forward_sequence(params, output, inputs);
    const Gradients analytic = backward_bptt(params, output, trace, labels);
    const Gradients numeric = numeric_gradients(params, output, inputs, labels, step);
    return compare_gradients(analytic, numeric, tolerance);
}

}  // namespace gestrec
