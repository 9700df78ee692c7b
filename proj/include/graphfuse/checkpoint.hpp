#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/io.hpp"
#include "graphfuse/model.hpp"

// Checkpoint layout: an ASCII header of "key<TAB>value" lines describing the
// architecture, then each tensor as "tensor<TAB><name>" followed by an FMAT
// block, in for_each_tensor order. Task-B checkpoints append the fixed graph
// inputs (node features, adjacency) after the trainable tensors.

namespace graphfuse {

struct Checkpoint {
    std::string task = "A";  // "A" or "B"
    ModelParams params;
    std::optional<Matrix> node_features;
    std::optional<Matrix> adjacency;
};

namespace detail {

inline std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string join_dims(const std::vector<std::size_t>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(dims[i]);
    }
    return out;
}

inline std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            dims.push_back(static_cast<std::size_t>(std::stoull(part)));
        } catch (const std::exception&) {
            throw FormatError("checkpoint: bad dims entry \"" + part + "\"");
        }
    }
    if (dims.empty()) {
        throw FormatError("checkpoint: empty graph_dims");
    }
    return dims;
}

}  // namespace detail

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    if (ckpt.task != "A" && ckpt.task != "B") {
        throw ParamError("save_checkpoint: task must be A or B, got \"" + ckpt.task + "\"");
    }
    std::ofstream out = detail::open_output(path, /*binary=*/true);
    const ModelHyper& h = ckpt.params.hyper;
    out << "GFCKPT1\n";
    out << "task\t" << ckpt.task << "\n";
    out << "lambda\t" << detail::format_real(h.lambda) << "\n";
    out << "threshold\t" << detail::format_real(h.threshold) << "\n";
    out << "slope\t" << detail::format_real(h.slope) << "\n";
    out << "seed\t" << h.seed << "\n";
    out << "d_v\t" << h.d_v << "\n";
    out << "e\t" << h.e << "\n";
    out << "e_emb\t" << h.e_emb << "\n";
    out << "graph_dims\t" << detail::join_dims(h.graph_dims) << "\n";

    std::vector<std::pair<std::string, const Matrix*>> tensors;
    for_each_tensor(ckpt.params, [&](const std::string& name, const auto& m) {
        tensors.emplace_back(name, &m);
    });
    if (ckpt.node_features.has_value() != ckpt.adjacency.has_value()) {
        throw ParamError("save_checkpoint: node features and adjacency must come together");
    }
    if (ckpt.node_features) {
        tensors.emplace_back("graph.node_features", &*ckpt.node_features);
        tensors.emplace_back("graph.adjacency", &*ckpt.adjacency);
    }
    out << "tensors\t" << tensors.size() << "\n";
    for (const auto& [name, matrix] : tensors) {
        out << "tensor\t" << name << "\n";
        write_fmat(out, *matrix);
    }
    if (!out) {
        throw ParamError("write failed: " + path.string());
    }
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in = detail::open_input(path, /*binary=*/true);
    std::string line;
    if (!std::getline(in, line) || detail::strip_cr(line) != "GFCKPT1") {
        throw FormatError(path.string() + ": not a checkpoint file");
    }

    Checkpoint ckpt;
    ModelHyper hyper;
    std::size_t tensor_count = 0;
    bool saw_tensors = false;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        const std::vector<std::string> fields = detail::split_tabs(line);
        if (fields.size() != 2) {
            throw FormatError(path.string() + ": bad header line \"" + line + "\"");
        }
        const std::string& key = fields[0];
        const std::string& value = fields[1];
        try {
            if (key == "task") {
                ckpt.task = value;
            } else if (key == "lambda") {
                hyper.lambda = std::stod(value);
            } else if (key == "threshold") {
                hyper.threshold = std::stod(value);
            } else if (key == "slope") {
                hyper.slope = std::stod(value);
            } else if (key == "seed") {
                hyper.seed = std::stoull(value);
            } else if (key == "d_v") {
                hyper.d_v = std::stoull(value);
            } else if (key == "e") {
                hyper.e = std::stoull(value);
            } else if (key == "e_emb") {
                hyper.e_emb = std::stoull(value);
            } else if (key == "graph_dims") {
                hyper.graph_dims = detail::parse_dims(value);
            } else if (key == "tensors") {
                tensor_count = std::stoull(value);
                saw_tensors = true;
                break;
            } else {
                throw FormatError(path.string() + ": unknown header key \"" + key + "\"");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw FormatError(path.string() + ": bad value \"" + value + "\" for key \"" +
                              key + "\"");
        }
    }
    if (!saw_tensors) {
        throw FormatError(path.string() + ": missing tensors count");
    }
    if (ckpt.task != "A" && ckpt.task != "B") {
        throw FormatError(path.string() + ": bad task \"" + ckpt.task + "\"");
    }

    ckpt.params = init_params(hyper);  // shapes only; values overwritten below
    std::size_t expected_trainables = 0;
    for_each_tensor(ckpt.params, [&](const std::string&, Matrix&) { ++expected_trainables; });
    if (tensor_count != expected_trainables && tensor_count != expected_trainables + 2) {
        throw FormatError(path.string() + ": tensor count " + std::to_string(tensor_count) +
                          " does not match architecture");
    }

    std::vector<std::pair<std::string, Matrix*>> slots;
    for_each_tensor(ckpt.params, [&](const std::string& name, Matrix& m) {
        slots.emplace_back(name, &m);
    });
    if (tensor_count == expected_trainables + 2) {
        ckpt.node_features.emplace();
        ckpt.adjacency.emplace();
        slots.emplace_back("graph.node_features", &*ckpt.node_features);
        slots.emplace_back("graph.adjacency", &*ckpt.adjacency);
    }

    for (auto& [name, target] : slots) {
        if (!std::getline(in, line) || detail::strip_cr(line) != "tensor\t" + name) {
            throw FormatError(path.string() + ": expected tensor \"" + name + "\", got \"" +
                              line + "\"");
        }
        Matrix loaded = read_fmat(in, path.string() + ":" + name);
        if (!target->empty() && !loaded.same_shape(*target)) {
            throw FormatError(path.string() + ": tensor " + name + " has shape " +
                              loaded.shape_str() + ", expected " + target->shape_str());
        }
        *target = std::move(loaded);
    }
    char c;
    if (in.get(c)) {
        throw FormatError(path.string() + ": trailing bytes after last tensor");
    }
    if (ckpt.task == "B" && !ckpt.node_features) {
        throw FormatError(path.string() + ": task B checkpoint lacks graph inputs");
    }
    return ckpt;
}

}  // namespace graphfuse
