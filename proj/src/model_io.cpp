#include "gestrec/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gestrec {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw std::runtime_error(std::string("malformed model file: ") + name +
                                 " is not a nested array");
    }
    Mat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < m.rows; ++r) {
        if (!j[r].is_array() || j[r].size() != m.cols) {
            throw std::runtime_error(std::string("malformed model file: ragged rows in ") + name);
        }
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

[[noreturn]] void shape_error(const char* what, std::size_t declared, const char* tensor,
                              std::size_t actual) {
    char msg[160];
    std::snprintf(msg, sizeof(msg), "model file shape mismatch: %s is %zu but %s implies %zu", what,
                  declared, tensor, actual);
    throw std::runtime_error(msg);
}

}  // namespace

void save_model(const ModelFile& model, const std::string& path) {
    ordered_json j;
    j["format_version"] = model.format_version;
    j["gate_order"] = model.gate_order;
    j["input_dim"] = model.params.input_dim();
    j["hidden_dim"] = model.params.hidden_dim();
    j["num_classes"] = model.output.num_classes();
    j["seed"] = model.seed;
    ordered_json tc;
    tc["learning_rate"] = model.train_config.learning_rate;
    tc["beta1"] = model.train_config.beta1;
    tc["beta2"] = model.train_config.beta2;
    tc["epsilon"] = model.train_config.epsilon;
    tc["epochs"] = model.train_config.epochs;
    tc["batch_size"] = model.train_config.batch_size;
    tc["clip_norm"] = model.train_config.clip_norm;
    j["train_config"] = tc;
    j["w_x"] = matrix_to_json(model.params.w_x);
    j["w_h"] = matrix_to_json(model.params.w_h);
    j["b"] = model.params.b;
    j["w_y"] = matrix_to_json(model.output.w_y);
    j["b_y"] = model.output.b_y;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open '" + path + "' for writing");
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("save_model: write to '" + path + "' failed");
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed model file: ") + e.what());
    }

    ModelFile model;
    try {
        model.format_version = j.at("format_version").get<int>();
        if (model.format_version != 1) {
            char msg[64];
            std::snprintf(msg, sizeof(msg), "unsupported model file version %d", model.format_version);
            throw std::runtime_error(msg);
        }
        model.gate_order = j.at("gate_order").get<std::string>();
        if (model.gate_order != "ifgo") {
            throw std::runtime_error("unsupported gate order '" + model.gate_order + "' (expected ifgo)");
        }
        const auto input_dim = j.at("input_dim").get<std::size_t>();
        const auto hidden_dim = j.at("hidden_dim").get<std::size_t>();
        const auto num_classes = j.at("num_classes").get<std::size_t>();
        model.seed = j.at("seed").get<std::uint64_t>();
        const auto& tc = j.at("train_config");
        model.train_config.hidden_dim = hidden_dim;
        model.train_config.seed = model.seed;
        model.train_config.learning_rate = tc.at("learning_rate").get<double>();
        model.train_config.beta1 = tc.at("beta1").get<double>();
        model.train_config.beta2 = tc.at("beta2").get<double>();
        model.train_config.epsilon = tc.at("epsilon").get<double>();
        model.train_config.epochs = tc.at("epochs").get<std::size_t>();
        model.train_config.batch_size = tc.at("batch_size").get<std::size_t>();
        model.train_config.clip_norm = tc.at("clip_norm").get<double>();

        model.params.w_x = matrix_from_json(j.at("w_x"), "w_x");
        model.params.w_h = matrix_from_json(j.at("w_h"), "w_h");
        model.params.b = j.at("b").get<Vec>();
        model.output.w_y = matrix_from_json(j.at("w_y"), "w_y");
        model.output.b_y = j.at("b_y").get<Vec>();

        if (model.params.w_x.rows != 4 * hidden_dim) shape_error("hidden_dim", hidden_dim, "w_x rows / 4", model.params.w_x.rows / 4);
        if (model.params.w_x.cols != input_dim) shape_error("input_dim", input_dim, "w_x cols", model.params.w_x.cols);
        if (model.params.w_h.rows != 4 * hidden_dim) shape_error("hidden_dim", hidden_dim, "w_h rows / 4", model.params.w_h.rows / 4);
        if (model.params.w_h.cols != hidden_dim) shape_error("hidden_dim", hidden_dim, "w_h cols", model.params.w_h.cols);
        if (model.params.b.size() != 4 * hidden_dim) shape_error("hidden_dim", hidden_dim, "b length / 4", model.params.b.size() / 4);
        if (model.output.w_y.rows != num_classes) shape_error("num_classes", num_classes, "w_y rows", model.output.w_y.rows);
        if (model.output.w_y.cols != hidden_dim) shape_error("hidden_dim", hidden_dim, "w_y cols", model.output.w_y.cols);
        if (model.output.b_y.size() != num_classes) shape_error("num_classes", num_classes, "b_y length", model.output.b_y.size());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed model file: ") + e.what());
    }
    return model;
}

}  // namespace gestrec
