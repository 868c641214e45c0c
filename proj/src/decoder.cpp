#include "gestrec/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gestrec {

namespace {

void check_labels(const LabelPath& path, std::size_t num_classes, const char* op) {
    if (path.empty()) {
        char msg[64];
        std::snprintf(msg, sizeof(msg), "%s: empty path", op);
        throw std::invalid_argument(msg);
    }
    for (int label : path) {
        if (label < 1 || static_cast<std::size_t>(label) > num_classes) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "%s: label %d out of range 1..%zu", op, label, num_classes);
            throw std::invalid_argument(msg);
        }
    }
}

std::size_t resolve_num_classes(const LabelPath& path, std::size_t num_classes) {
    if (num_classes > 0) return num_classes;
    int max_label = 0;
    for (int label : path) max_label = std::max(max_label, label);
    return static_cast<std::size_t>(std::max(max_label, 1));
}

std::size_t count_distinct(const SpottingTable& table) {
    std::size_t distinct = 0;
    for (const auto& s : table.classes) {
        if (s.cardinality > 0) ++distinct;
    }
    return distinct;
}

void check_k(std::size_t k, std::size_t distinct, const char* op) {
    if (k < 1 || k > distinct) {
        char msg[128];
        std::snprintf(msg, sizeof(msg),
                      "%s: cannot pick k=%zu distinct gestures, the path contains only %zu distinct labels",
                      op, k, distinct);
        throw std::invalid_argument(msg);
    }
}

}  // namespace

LabelPath argmax_path(const std::vector<Vec>& y_sequence) {
    if (y_sequence.empty()) throw std::invalid_argument("argmax_path: empty output sequence");
    LabelPath path;
    path.reserve(y_sequence.size());
    for (const Vec& y : y_sequence) {
        if (y.empty()) throw std::invalid_argument("argmax_path: empty probability vector");
        std::size_t best = 0;
        for (std::size_t j = 1; j < y.size(); ++j) {
            if (y[j] > y[best]) best = j;  // strict: ties keep the smaller index
        }
        path.push_back(static_cast<int>(best) + 1);
    }
    return path;
}

SpottingTable spot(const LabelPath& path, std::size_t num_classes) {
    check_labels(path, num_classes, "spot");
    SpottingTable table;
    table.classes.resize(num_classes);
    table.path_length = path.size();
    for (std::size_t t = 0; t < path.size(); ++t) {
        ClassSpot& s = table.classes[static_cast<std::size_t>(path[t]) - 1];
        if (s.cardinality == 0) s.first_occurrence = t + 1;
        ++s.cardinality;
    }
    return table;
}

double posterior(const std::vector<int>& outcome, const SpottingTable& table) {
    double p = 1.0;
    for (int cls : outcome) {
        if (cls < 1 || static_cast<std::size_t>(cls) > table.num_classes()) {
            throw std::invalid_argument("posterior: class index out of range");
        }
        p *= static_cast<double>(table.spot_for(cls).cardinality) /
             static_cast<double>(table.path_length);
    }
    return p;
}

unsigned long long cardinality_product(const std::vector<int>& outcome, const SpottingTable& table) {
    unsigned long long prod = 1;
    for (int cls : outcome) prod *= table.spot_for(cls).cardinality;
    return prod;
}

Recognition map_decode(const LabelPath& path, std::size_t k, std::size_t num_classes) {
    const std::size_t q = resolve_num_classes(path, num_classes);
    SpottingTable table = spot(path, q);
    check_k(k, count_distinct(table), "map_decode");

    // Rank classes by cardinality (desc), then first occurrence (asc), then
    // class index (asc); the top k form the member set.
    std::vector<int> ranked(q);
    for (std::size_t i = 0; i < q; ++i) ranked[i] = static_cast<int>(i) + 1;
    std::sort(ranked.begin(), ranked.end(), [&table](int a, int b) {
        const ClassSpot& sa = table.spot_for(a);
        const ClassSpot& sb = table.spot_for(b);
        if (sa.cardinality != sb.cardinality) return sa.cardinality > sb.cardinality;
        if (sa.first_occurrence != sb.first_occurrence) return sa.first_occurrence < sb.first_occurrence;
        return a < b;
    });
    ranked.resize(k);

    Recognition rec;
    rec.topk = ranked;
    std::sort(rec.topk.begin(), rec.topk.end());

    // R orders the member set by first occurrence in the path.
    rec.outcome = ranked;
    std::sort(rec.outcome.begin(), rec.outcome.end(), [&table](int a, int b) {
        return table.spot_for(a).first_occurrence < table.spot_for(b).first_occurrence;
    });

    rec.posterior = posterior(rec.outcome, table);
    rec.spotting = std::move(table);
    return rec;
}

Recognition brute_force_decode(const LabelPath& path, std::size_t k, std::size_t num_classes) {
    const std::size_t q = resolve_num_classes(path, num_classes);
    SpottingTable table = spot(path, q);
    check_k(k, count_distinct(table), "brute_force_decode");

    std::vector<int> current;
    std::vector<bool> used(q + 1, false);
    std::vector<int> best;
    unsigned long long best_product = 0;
    bool have_best = false;

    // Lexicographic enumeration of all ordered k-tuples of distinct classes;
    // the first maximizer of the cardinality product wins.
    auto enumerate = [&](auto&& self) -> void {
        if (current.size() == k) {
            const unsigned long long prod = cardinality_product(current, table);
            if (!have_best || prod > best_product) {
                best = current;
                best_product = prod;
                have_best = true;
            }
            return;
        }
        for (std::size_t cls = 1; cls <= q; ++cls) {
            if (used[cls]) continue;
            used[cls] = true;
            current.push_back(static_cast<int>(cls));
            self(self);
            current.pop_back();
            used[cls] = false;
        }
    };
    enumerate(enumerate);

    Recognition rec;
    rec.outcome = best;
    rec.topk = best;
    std::sort(rec.topk.begin(), rec.topk.end());
    rec.posterior = posterior(rec.outcome, table);
    rec.spotting = std::move(table);
    return rec;
}

}  // namespace gestrec
