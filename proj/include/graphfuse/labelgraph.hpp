#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/matrix.hpp"

namespace graphfuse {

/// Row-normalized label co-occurrence graph with a zeroed diagonal:
/// a[i][j] = (samples positive for both i and j) / (samples positive for i),
/// a[i][i] = 0. Rows of labels that never occur are all zero.
struct AdjacencyMatrix {
    Matrix a;

    std::size_t u() const { return a.rows(); }
};

/// A_coo = L^T x L for a binary label matrix L (n_s x u): entry (i, j) counts
/// samples where labels i and j are both positive; the diagonal holds
/// per-label positive counts.
inline Matrix build_cooccurrence(const Matrix& labels) {
    for (double v : labels.values()) {
        if (v != 0.0 && v != 1.0) {
            throw DataError("build_cooccurrence: non-binary entry " + std::to_string(v));
        }
    }
    return matmul(transpose(labels), labels);
}

inline AdjacencyMatrix build_adjacency(const Matrix& a_coo) {
    if (a_coo.rows() != a_coo.cols()) {
        throw ShapeError("build_adjacency: co-occurrence matrix must be square, got " +
                         a_coo.shape_str());
    }
    for (std::size_t i = 0; i < a_coo.rows(); ++i) {
        for (std::size_t j = 0; j < a_coo.cols(); ++j) {
            if (a_coo(i, j) < 0.0) {
                throw DataError("build_adjacency: negative count at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
            }
            if (a_coo(i, j) != a_coo(j, i)) {
                throw DataError("build_adjacency: asymmetric counts at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
            }
        }
    }
    AdjacencyMatrix adj;
    adj.a = Matrix(a_coo.rows(), a_coo.cols());
    for (std::size_t i = 0; i < a_coo.rows(); ++i) {
        const double occurrences = a_coo(i, i);
        if (occurrences == 0.0) continue;  // zero row, no division
        for (std::size_t j = 0; j < a_coo.cols(); ++j) {
            if (i == j) continue;
            adj.a(i, j) = a_coo(i, j) / occurrences;
        }
    }
    return adj;
}

inline AdjacencyMatrix adjacency_from_labels(const Matrix& labels) {
    return build_adjacency(build_cooccurrence(labels));
}

/// Stacked message-passing layers turning per-label node features into
/// per-label classifier vectors. Layer n computes
///   H_{n+1} = act((A * H_n + H_n) * W_n)
/// with a leaky-ReLU activation everywhere except after the final layer,
/// whose rows serve directly as linear classifier weights.
struct GcnStack {
    std::vector<Matrix> weights;  // each in_dim x out_dim, dims chained
    double slope = 0.2;

    std::size_t depth() const { return weights.size(); }
    std::size_t out_dim() const { return weights.empty() ? 0 : weights.back().cols(); }
};

inline void validate_stack(const GcnStack& stack, std::size_t node_dim) {
    if (stack.weights.empty()) {
        throw ParamError("GcnStack: at least one layer required");
    }
    if (stack.slope < 0.0) {
        throw ParamError("GcnStack: activation slope must be >= 0");
    }
    std::size_t dim = node_dim;
    for (std::size_t n = 0; n < stack.weights.size(); ++n) {
        if (stack.weights[n].rows() != dim) {
            throw ShapeError("GcnStack: layer " + std::to_string(n) + " expects input dim " +
                             std::to_string(stack.weights[n].rows()) + ", got " +
                             std::to_string(dim));
        }
        dim = stack.weights[n].cols();
    }
}

/// Per-layer intermediates kept for the backward pass.
struct GcnCache {
    std::vector<Matrix> sums;     // S_n = A * H_n + H_n
    std::vector<Matrix> pre_act;  // Z_n = S_n * W_n
    Matrix output;                // H_depth
};

inline GcnCache gcn_forward_cached(const Matrix& node_features, const AdjacencyMatrix& adj,
                                   const GcnStack& stack) {
    validate_stack(stack, node_features.cols());
    if (adj.a.rows() != node_features.rows() || adj.a.cols() != node_features.rows()) {
        throw ShapeError("gcn_forward: adjacency " + adj.a.shape_str() + " vs " +
                         std::to_string(node_features.rows()) + " nodes");
    }
    GcnCache cache;
    Matrix h = node_features;
    for (std::size_t n = 0; n < stack.weights.size(); ++n) {
        Matrix s = add(matmul(adj.a, h), h);
        Matrix z = matmul(s, stack.weights[n]);
        const bool last = n + 1 == stack.weights.size();
        h = last ? z : leaky_relu(z, stack.slope);
        cache.sums.push_back(std::move(s));
        cache.pre_act.push_back(std::move(z));
    }
    cache.output = std::move(h);
    return cache;
}

inline Matrix gcn_forward(const Matrix& node_features, const AdjacencyMatrix& adj,
                          const GcnStack& stack) {
    return gcn_forward_cached(node_features, adj, stack).output;
}

struct GcnGrads {
    std::vector<Matrix> weights;
    Matrix node_features;
};

/// Reverse pass through the stack for an upstream gradient d_output
/// (same shape as the forward output).
inline GcnGrads gcn_backward(const GcnCache& cache, const AdjacencyMatrix& adj,
                             const GcnStack& stack, const Matrix& d_output) {
    require_same_shape(d_output, cache.output, "gcn_backward");
    GcnGrads grads;
    grads.weights.resize(stack.weights.size());
    Matrix upstream = d_output;  // dL/dH_{n+1} while walking layer n
    for (std::size_t idx = stack.weights.size(); idx-- > 0;) {
        Matrix dz = std::move(upstream);
        if (idx + 1 != stack.weights.size()) {
            for (std::size_t k = 0; k < dz.size(); ++k) {
                dz.values()[k] *=
                    leaky_relu_grad_scalar(cache.pre_act[idx].values()[k], stack.slope);
            }
        }
        grads.weights[idx] = matmul(transpose(cache.sums[idx]), dz);
        Matrix ds = matmul(dz, transpose(stack.weights[idx]));
        upstream = add(matmul(transpose(adj.a), ds), ds);
    }
    grads.node_features = std::move(upstream);
    return grads;
}

/// Layer output dimensions per stack depth; the depth-2 schedule is the
/// default configuration.
inline std::vector<std::size_t> graph_dim_schedule(int depth) {
    switch (depth) {
        case 2: return {512, 2048};
        case 3: return {512, 1024, 2048};
        case 4: return {512, 1024, 1024, 2048};
        case 5: return {512, 1024, 1024, 1024, 2048};
        default:
            throw ParamError("graph depth must be in [2,5], got " + std::to_string(depth));
    }
}

}  // namespace graphfuse
