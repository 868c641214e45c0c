#pragma once

#include <cstdint>
#include <string>

#include "gestrec/lstm.hpp"

namespace gestrec {

// Exported model: everything inference needs on another platform. The gate
// block ordering tag ("ifgo") is part of the contract so foreign loaders can
// split the stacked weight rows correctly.
struct ModelFile {
    int format_version = 1;
    std::string gate_order = "ifgo";
    std::uint64_t seed = 0;
    TrainConfig train_config;  // echo of the training hyperparameters
    LstmParams params;
    OutputParams output;
};

// Human-readable JSON with a canonical field order and shortest-round-trip
// decimal numbers; save(load(f)) is byte-identical to f.
void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace gestrec
