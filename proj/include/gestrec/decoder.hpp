#pragma once

#include <cstddef>
#include <vector>

#include "gestrec/numerics.hpp"

namespace gestrec {

// Per-timestep class labels a_1..a_T, 1-based.
using LabelPath = std::vector<int>;

// Spotting record for one class: the cardinality of its timestep set and the
// first timestep (1-based) at which it occurs; first_occurrence is 0 when the
// class never appears.
struct ClassSpot {
    std::size_t cardinality = 0;
    std::size_t first_occurrence = 0;
};

// Partition of the timesteps {1..T} by path label.
struct SpottingTable {
    std::vector<ClassSpot> classes;  // index 0 holds class 1
    std::size_t path_length = 0;

    std::size_t num_classes() const { return classes.size(); }
    const ClassSpot& spot_for(int cls) const { return classes[static_cast<std::size_t>(cls) - 1]; }
};

// Ordered recognition outcome R = (r_1..r_k) with its posterior
// prod_j |I_{r_j}| / T and the spotting data it was derived from.
struct Recognition {
    std::vector<int> outcome;  // distinct 1-based classes, ordered
    double posterior = 0.0;
    SpottingTable spotting;
    std::vector<int> topk;     // the member set of outcome, ascending
};

// Per-timestep argmax over class probabilities; ties break toward the
// smallest class index. Throws on an empty input.
LabelPath argmax_path(const std::vector<Vec>& y_sequence);

// Counts timesteps per class and records first occurrences.
SpottingTable spot(const LabelPath& path, std::size_t num_classes);

// prod over entries of |I_r| / T. Classes absent from the path contribute a
// factor of zero.
double posterior(const std::vector<int>& outcome, const SpottingTable& table);

// MAP decode: picks the k classes with the largest cardinalities (ties favor
// the earlier first occurrence, then the smaller class index) and orders them
// by first occurrence in the path. num_classes 0 means "use the largest label
// present". Throws when k exceeds the number of distinct labels in the path.
Recognition map_decode(const LabelPath& path, std::size_t k, std::size_t num_classes = 0);

// Exhaustive oracle for map_decode: enumerates every ordered k-tuple of
// distinct classes and returns a posterior maximizer (the lexicographically
// first one). Intended for tests; cost grows as Q!/(Q-k)!.
Recognition brute_force_decode(const LabelPath& path, std::size_t k, std::size_t num_classes = 0);

// Integer-exact posterior numerator prod_j |I_{r_j}|; tests compare these
// products instead of floating-point posteriors.
unsigned long long cardinality_product(const std::vector<int>& outcome, const SpottingTable& table);

}  // namespace gestrec
