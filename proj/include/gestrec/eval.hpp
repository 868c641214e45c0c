#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gestrec/decoder.hpp"

namespace gestrec {

// Q x Q count matrix, row = true class, column = predicted class.
// Percentages are row-normalized.
struct ConfusionMatrix {
    std::size_t num_classes = 0;
    std::vector<long long> counts;  // row-major

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t q) : num_classes(q), counts(q * q, 0) {}

    void add(int true_cls, int predicted_cls);
    long long count(std::size_t row, std::size_t col) const { return counts[row * num_classes + col]; }
    long long row_total(std::size_t row) const;
    long long total() const;
    long long diagonal_total() const;
    // Row percentage; 0 for an empty row.
    double percentage(std::size_t row, std::size_t col) const;
};

struct EvalReport {
    ConfusionMatrix confusion;
    std::vector<double> hit_rates;      // H_i = diagonal percentage of row i
    double accuracy = 0.0;              // correct slots / total slots
    double session_exact_match = 0.0;   // sessions with R_hat == R elementwise
    std::size_t num_sessions = 0;
    std::size_t num_slots = 0;
};

// Position-aligned slot scoring: each (truth r_j, predicted r_j) pair
// contributes one confusion count. Truth and prediction lengths must match
// within every pair.
EvalReport score_sessions(const std::vector<Recognition>& predictions,
                          const std::vector<std::vector<int>>& truths, std::size_t num_classes);

// Deterministic fixed-format text rendering, percentages to 2 decimals.
std::string render_text_report(const EvalReport& report);

// Machine-readable JSON with keys confusion_pct, hit_rate, accuracy,
// session_exact_match.
std::string report_json(const EvalReport& report);

// Sensor-ablation table: one row per sensor configuration, columns H_1..H_Q.
struct AblationRow {
    std::string sensor_label;
    std::vector<double> hit_rates;
};

std::string render_ablation_table(const std::vector<AblationRow>& rows);

// Hidden-size sweep table: accuracy per hidden dimension.
std::string render_sweep_table(const std::vector<std::pair<std::size_t, double>>& hidden_accuracy);

}  // namespace gestrec
