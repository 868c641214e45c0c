#include "gestrec/eval.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace gestrec {

void ConfusionMatrix::add(int true_cls, int predicted_cls) {
    if (true_cls < 1 || static_cast<std::size_t>(true_cls) > num_classes || predicted_cls < 1 ||
        static_cast<std::size_t>(predicted_cls) > num_classes) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "confusion matrix: class pair (%d,%d) out of range 1..%zu",
                      true_cls, predicted_cls, num_classes);
        throw std::invalid_argument(msg);
    }
    ++counts[(static_cast<std::size_t>(true_cls) - 1) * num_classes +
             (static_cast<std::size_t>(predicted_cls) - 1)];
}

long long ConfusionMatrix::row_total(std::size_t row) const {
    long long sum = 0;
    for (std::size_t c = 0; c < num_classes; ++c) sum += count(row, c);
    return sum;
}

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (long long c : counts) sum += c;
    return sum;
}

long long ConfusionMatrix::diagonal_total() const {
    long long sum = 0;
    for (std::size_t i = 0; i < num_classes; ++i) sum += count(i, i);
    return sum;
}

double ConfusionMatrix::percentage(std::size_t row, std::size_t col) const {
    const long long rt = row_total(row);
    if (rt == 0) return 0.0;
    return 100.0 * static_cast<double>(count(row, col)) / static_cast<double>(rt);
}

EvalReport score_sessions(const std::vector<Recognition>& predictions,
                          const std::vector<std::vector<int>>& truths, std::size_t num_classes) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("score_sessions: prediction and truth lists differ in length");
    }
    EvalReport report;
    report.confusion = ConfusionMatrix(num_classes);
    report.num_sessions = predictions.size();

    std::size_t exact = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& predicted = predictions[i].outcome;
        const auto& truth = truths[i];
        if (predicted.size() != truth.size()) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "score_sessions: session %zu predicts %zu gestures but truth has %zu", i,
                          predicted.size(), truth.size());
            throw std::invalid_argument(msg);
        }
        for (std::size_t j = 0; j < truth.size(); ++j) {
            report.confusion.add(truth[j], predicted[j]);
        }
        if (predicted == truth) ++exact;
        report.num_slots += truth.size();
    }

    report.hit_rates.resize(num_classes);
    for (std::size_t i = 0; i < num_classes; ++i) report.hit_rates[i] = report.confusion.percentage(i, i);
    const long long total = report.confusion.total();
    report.accuracy =
        total > 0 ? static_cast<double>(report.confusion.diagonal_total()) / static_cast<double>(total)
                  : 0.0;
    report.session_exact_match =
        predictions.empty() ? 0.0 : static_cast<double>(exact) / static_cast<double>(predictions.size());
    return report;
}

namespace {

void append_line(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out += buf;
    out += '\n';
}

}  // namespace

std::string render_text_report(const EvalReport& report) {
    const std::size_t q = report.confusion.num_classes;
    std::string out;
    append_line(out, "Confusion matrix (%%), rows = true class, cols = predicted class");
    std::string header = "        ";
    char cell[32];
    for (std::size_t c = 0; c < q; ++c) {
        std::snprintf(cell, sizeof(cell), "  Gest.%zu", c + 1);
        header += cell;
    }
    out += header;
    out += '\n';
    for (std::size_t r = 0; r < q; ++r) {
        std::snprintf(cell, sizeof(cell), "Gest.%zu  ", r + 1);
        out += cell;
        for (std::size_t c = 0; c < q; ++c) {
            std::snprintf(cell, sizeof(cell), "%8.2f", report.confusion.percentage(r, c));
            out += cell;
        }
        out += '\n';
    }
    std::string hitrow = "Hit rates:";
    for (std::size_t i = 0; i < q; ++i) {
        std::snprintf(cell, sizeof(cell), " H_%zu=%.2f", i + 1, report.hit_rates[i]);
        hitrow += cell;
    }
    out += hitrow;
    out += '\n';
    append_line(out, "Accuracy: %.4f (%lld/%lld)", report.accuracy, report.confusion.diagonal_total(),
                report.confusion.total());
    append_line(out, "Session exact match: %.4f (%zu sessions)", report.session_exact_match,
                report.num_sessions);
    return out;
}

std::string report_json(const EvalReport& report) {
    const std::size_t q = report.confusion.num_classes;
    nlohmann::ordered_json j;
    auto pct = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < q; ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < q; ++c) row.push_back(report.confusion.percentage(r, c));
        pct.push_back(row);
    }
    j["confusion_pct"] = pct;
    j["hit_rate"] = report.hit_rates;
    j["accuracy"] = report.accuracy;
    j["session_exact_match"] = report.session_exact_match;
    j["num_sessions"] = report.num_sessions;
    j["num_slots"] = report.num_slots;
    return j.dump(2);
}

std::string render_ablation_table(const std::vector<AblationRow>& rows) {
    std::string out = "Hit rate (%) by sensor configuration\n";
    std::size_t q = 0;
    for (const auto& r : rows) q = std::max(q, r.hit_rates.size());
    std::string header = "          ";
    char cell[32];
    for (std::size_t i = 0; i < q; ++i) {
        std::snprintf(cell, sizeof(cell), "     H_%zu", i + 1);
        header += cell;
    }
    out += header;
    out += '\n';
    for (const auto& row : rows) {
        std::snprintf(cell, sizeof(cell), "%-10s", row.sensor_label.c_str());
        out += cell;
        for (double h : row.hit_rates) {
            std::snprintf(cell, sizeof(cell), "%8.2f", h);
            out += cell;
        }
        out += '\n';
    }
    return out;
}

std::string render_sweep_table(const std::vector<std::pair<std::size_t, double>>& hidden_accuracy) {
    std::string out = "Accuracy by hidden dimension\n";
    out += "hidden  accuracy(%)\n";
    char cell[64];
    for (const auto& [hidden, accuracy] : hidden_accuracy) {
        std::snprintf(cell, sizeof(cell), "%-7zu %.2f\n", hidden, 100.0 * accuracy);
        out += cell;
    }
    return out;
}

}  // namespace gestrec
