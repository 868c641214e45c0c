#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gestrec/numerics.hpp"
#include "gestrec/sequence.hpp"

namespace gestrec {

// Learnable parameters of a single LSTM layer. The four gate blocks are
// stacked along the rows of w_x / w_h and in b, in the fixed order
// input, forget, cell-candidate, output ("ifgo"). This ordering is part of
// the exported model file contract.
struct LstmParams {
    Mat w_x;  // [4H x N]
    Mat w_h;  // [4H x H]
    Vec b;    // [4H]

    std::size_t hidden_dim() const { return w_x.rows / 4; }
    std::size_t input_dim() const { return w_x.cols; }
};

// Linear projection from the hidden state to class logits, fed to softmax.
struct OutputParams {
    Mat w_y;  // [Q x H]
    Vec b_y;  // [Q]

    std::size_t num_classes() const { return w_y.rows; }
    std::size_t hidden_dim() const { return w_y.cols; }
};

struct LstmState {
    Vec h;
    Vec c;
};

// Per-timestep cache of everything the backward pass needs. Gate vectors are
// post-activation.
struct StepTrace {
    Vec input;
    Vec gate_i, gate_f, gate_g, gate_o;
    Vec c, tanh_c, h;
    Vec logits;
    Vec y;  // softmax output, a probability vector over the Q classes
};

struct ForwardTrace {
    std::vector<StepTrace> steps;

    std::size_t size() const { return steps.size(); }
};

struct TrainConfig {
    std::size_t hidden_dim = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t epochs = 30;
    std::size_t batch_size = 8;
    std::uint64_t seed = 1;
    double clip_norm = 5.0;  // global gradient-norm clip
};

// Gradient (or Adam moment) storage mirroring LstmParams + OutputParams.
struct Gradients {
    Mat w_x, w_h;
    Vec b;
    Mat w_y;
    Vec b_y;
};

struct AdamState {
    Gradients m;
    Gradients v;
};

Gradients make_zero_gradients(const LstmParams& p, const OutputParams& o);
void accumulate(Gradients& into, const Gradients& g);
void scale_gradients(Gradients& g, double factor);

// Draws weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], zero biases
// except the forget-gate bias block which starts at 1.0. Deterministic per
// seed.
void init_params(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes,
                 std::uint64_t seed, LstmParams& params, OutputParams& output);

// One LSTM cell step:
//   (i,f,g,o) = w_x*x + w_h*h_prev + b
//   c = sigmoid(f) .* c_prev + sigmoid(i) .* tanh(g)
//   h = sigmoid(o) .* tanh(c)
LstmState lstm_step(const LstmParams& params, const Vec& x, const LstmState& prev);

// Runs the recurrence from the all-zero initial state and applies the
// softmax head at every timestep. Throws on an empty sequence.
ForwardTrace forward_sequence(const LstmParams& params, const OutputParams& output,
                              const std::vector<Vec>& inputs);
ForwardTrace forward_sequence(const LstmParams& params, const OutputParams& output,
                              const SensorSequence& seq);

// Mean per-timestep cross-entropy: mean_t of -ln y[t][label_t], with the
// probability floored at 1e-12 inside the log. Labels are 1-based.
double sequence_loss(const ForwardTrace& trace, const std::vector<int>& labels);

// Exact gradients of sequence_loss with respect to every parameter entry,
// by backpropagation through time over the cached trace.
Gradients backward_bptt(const LstmParams& params, const OutputParams& output,
                        const ForwardTrace& trace, const std::vector<int>& labels);

// Adam with bias correction; gradients are globally norm-clipped to
// cfg.clip_norm before the update. step counts updates starting at 1.
void adam_update(LstmParams& params, OutputParams& output, const Gradients& grads,
                 AdamState& state, const TrainConfig& cfg, std::size_t step);

struct TrainResult {
    LstmParams params;
    OutputParams output;
    std::vector<double> epoch_loss;  // mean loss per epoch
};

// Trains on labeled sequences: seeded per-epoch shuffle, per-sequence BPTT
// gradients accumulated into batches, one Adam step per batch. The number of
// classes is taken as the largest label present (at least 2). Deterministic
// for a fixed seed, dataset, and config.
TrainResult train(const std::vector<SensorSequence>& dataset, const TrainConfig& cfg);

// Optional progress callback variant; cb(epoch_index, mean_loss) runs after
// every epoch.
TrainResult train(const std::vector<SensorSequence>& dataset, const TrainConfig& cfg,
                  const std::function<void(std::size_t, double)>& on_epoch);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_coordinate;
    bool passed = false;
};

// Central finite differences of sequence_loss over every parameter
// coordinate. Test oracle; independent of backward_bptt.
Gradients numeric_gradients(const LstmParams& params, const OutputParams& output,
                            const std::vector<Vec>& inputs, const std::vector<int>& labels,
                            double step);

// Coordinate-by-coordinate comparison with relative error
// |a-n| / max(|a|,|n|,1e-8).
GradCheckReport compare_gradients(const Gradients& analytic, const Gradients& numeric,
                                  double tolerance);

GradCheckReport gradient_check(const LstmParams& params, const OutputParams& output,
                               const std::vector<Vec>& inputs, const std::vector<int>& labels,
                               double step, double tolerance);

}  // namespace gestrec
