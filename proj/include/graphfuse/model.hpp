#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/fusion.hpp"
#include "graphfuse/labelgraph.hpp"
#include "graphfuse/labels.hpp"
#include "graphfuse/matrix.hpp"
#include "graphfuse/rng.hpp"

namespace graphfuse {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Linear layer on the fused feature vector; the binary head.
struct BinaryHeadParams {
    Matrix weight;  // 1 x N
    Matrix bias;    // 1 x 1
};

struct ModelHyper {
    std::size_t d_v = 0;
    std::size_t e = 0;
    std::size_t e_emb = 0;
    std::vector<std::size_t> graph_dims = {512, 2048};
    double lambda = 0.7;
    double threshold = 0.5;
    double slope = 0.2;
    std::uint64_t seed = 1;

    std::size_t fused_dim() const { return d_v + e; }
    std::size_t classifier_dim() const { return graph_dims.back(); }
};

/// Every trainable tensor of both heads plus the architecture description
/// needed to rebuild them.
struct ModelParams {
    ModelHyper hyper;
    BinaryHeadParams binary;
    ProjectionParams projection;
    GcnStack gcn;
};

inline void validate_hyper(const ModelHyper& hyper) {
    if (hyper.d_v < 1 || hyper.e < 1 || hyper.e_emb < 1) {
        throw ParamError("model: d_v, e and e_emb must all be >= 1");
    }
    if (hyper.graph_dims.empty()) {
        throw ParamError("model: graph_dims must name at least one layer");
    }
    for (std::size_t dim : hyper.graph_dims) {
        if (dim < 1) throw ParamError("model: graph layer dims must be >= 1");
    }
    validate_lambda(hyper.lambda);
    if (!(hyper.threshold > 0.0 && hyper.threshold < 1.0)) {
        throw ParamError("model: threshold must be in (0,1), got " +
                         std::to_string(hyper.threshold));
    }
    if (hyper.slope < 0.0) {
        throw ParamError("model: activation slope must be >= 0");
    }
}

namespace detail {

// Symmetric uniform init scaled by sqrt(6 / (fan_in + fan_out)), row-major
// draw order.
inline void glorot_fill(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.values()) v = rng.uniform(-bound, bound);
}

// Domain-separation tags so that data generation, parameter init and batch
// shuffling never share a random stream even under the same user seed.
inline constexpr std::uint64_t kInitStreamTag = 0x696e697470617273ULL;

}  // namespace detail

/// Fresh parameters for the given architecture: weights ~ U(-a, a) with
/// a = sqrt(6/(fan_in+fan_out)), biases zero. Tensors are drawn in checkpoint
/// order from a stream derived from hyper.seed.
inline ModelParams init_params(const ModelHyper& hyper) {
    validate_hyper(hyper);
    ModelParams params;
    params.hyper = hyper;
    Rng rng(hyper.seed ^ detail::kInitStreamTag);

    const std::size_t n = hyper.fused_dim();
    const std::size_t d_c = hyper.classifier_dim();
    params.binary.weight = Matrix(1, n);
    detail::glorot_fill(params.binary.weight, n, 1, rng);
    params.binary.bias = Matrix(1, 1);

    params.projection.weight = Matrix(d_c, n);
    detail::glorot_fill(params.projection.weight, n, d_c, rng);
    params.projection.bias = Matrix(1, d_c);

    params.gcn.slope = hyper.slope;
    std::size_t in_dim = hyper.e_emb;
    for (std::size_t out_dim : hyper.graph_dims) {
        Matrix w(in_dim, out_dim);
        detail::glorot_fill(w, in_dim, out_dim, rng);
        params.gcn.weights.push_back(std::move(w));
        in_dim = out_dim;
    }
    return params;
}

/// Visits every trainable tensor in the fixed checkpoint order:
/// binary.weight, binary.bias, projection.weight, projection.bias,
/// gcn.layer<k>.weight.
template <typename Params, typename Fn>
void for_each_tensor(Params& params, Fn&& fn) {
    fn("binary.weight", params.binary.weight);
    fn("binary.bias", params.binary.bias);
    fn("projection.weight", params.projection.weight);
    fn("projection.bias", params.projection.bias);
    for (std::size_t k = 0; k < params.gcn.weights.size(); ++k) {
        fn("gcn.layer" + std::to_string(k) + ".weight", params.gcn.weights[k]);
    }
}

// ---------------------------------------------------------------------------
// Forward passes
// ---------------------------------------------------------------------------

inline double binary_forward(const std::vector<double>& f_v, const std::vector<double>& f_t,
                             const ModelParams& params) {
    const FusedFeature fused = fuse(f_v, f_t, params.hyper.lambda);
    if (params.binary.weight.cols() != fused.vector.size()) {
        throw ShapeError("binary_forward: weight " + params.binary.weight.shape_str() +
                         " vs fused vector 1x" + std::to_string(fused.vector.size()));
    }
    double logit = params.binary.bias(0, 0);
    for (std::size_t j = 0; j < fused.vector.size(); ++j) {
        logit += params.binary.weight(0, j) * fused.vector[j];
    }
    return sigmoid_scalar(logit);
}

/// Logits from per-label classifier rows (the graph output) dotted with a
/// projected fused feature.
inline std::array<double, kNumLabels> label_logits(const Matrix& classifier_rows,
                                                   const std::vector<double>& projected) {
    if (classifier_rows.rows() != kNumLabels || classifier_rows.cols() != projected.size()) {
        throw ShapeError("label_logits: classifier rows " + classifier_rows.shape_str() +
                         " vs projected feature 1x" + std::to_string(projected.size()));
    }
    std::array<double, kNumLabels> logits{};
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        const double* row = classifier_rows.row_ptr(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < projected.size(); ++j) sum += row[j] * projected[j];
        logits[i] = sum;
    }
    return logits;
}

inline std::array<double, kNumLabels> multilabel_forward(const std::vector<double>& f_v,
                                                         const std::vector<double>& f_t,
                                                         const Matrix& node_features,
                                                         const AdjacencyMatrix& adj,
                                                         const ModelParams& params) {
    const FusedFeature fused = fuse(f_v, f_t, params.hyper.lambda);
    const std::vector<double> projected = project(fused, params.projection);
    const Matrix classifier_rows = gcn_forward(node_features, adj, params.gcn);
    std::array<double, kNumLabels> probs = label_logits(classifier_rows, projected);
    for (double& p : probs) p = sigmoid_scalar(p);
    return probs;
}

// ---------------------------------------------------------------------------
// Class weights and losses
// ---------------------------------------------------------------------------

/// Per-label positive/negative loss weights countering class imbalance.
struct ClassWeights {
    std::array<double, kNumLabels> w_pos{};
    std::array<double, kNumLabels> w_neg{};

    static ClassWeights ones() {
        ClassWeights w;
        w.w_pos.fill(1.0);
        w.w_neg.fill(1.0);
        return w;
    }
};

enum class WeightFormula {
    kInverse,    // n_s / (2 * N_p), n_s / (2 * N_n): balanced classes weigh 1
    kFrequency,  // N_p / n_s, N_n / n_s
};

inline ClassWeights compute_class_weights(const std::array<std::size_t, kNumLabels>& positive,
                                          std::size_t n_s,
                                          WeightFormula formula = WeightFormula::kInverse) {
    ClassWeights w;
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        if (positive[i] == 0 || positive[i] >= n_s) {
            throw DataError("compute_class_weights: label " + label_names()[i] + " has " +
                            std::to_string(positive[i]) + " positives out of " +
                            std::to_string(n_s) + ", weights are undefined");
        }
        const double n = static_cast<double>(n_s);
        const double pos = static_cast<double>(positive[i]);
        const double neg = n - pos;
        if (formula == WeightFormula::kInverse) {
            w.w_pos[i] = n / (2.0 * pos);
            w.w_neg[i] = n / (2.0 * neg);
        } else {
            w.w_pos[i] = pos / n;
            w.w_neg[i] = neg / n;
        }
    }
    return w;
}

inline double clamp_probability(double p) {
    return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

/// -[w_p y log p + w_n (1-y) log(1-p)] for one label.
inline double weighted_bce_term(double p, int y, double w_pos, double w_neg) {
    const double q = clamp_probability(p);
    return y == 1 ? -w_pos * std::log(q) : -w_neg * std::log1p(-q);
}

/// Class-weighted binary cross-entropy, summed over the five labels.
inline double weighted_bce_loss(const std::array<double, kNumLabels>& p, const LabelVector& y,
                                const ClassWeights& w) {
    double loss = 0.0;
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        loss += weighted_bce_term(p[i], y[i], w.w_pos[i], w.w_neg[i]);
    }
    return loss;
}

/// Multi-label soft-margin loss: unweighted sigmoid cross-entropy averaged
/// over the labels.
inline double softmargin_loss(const std::array<double, kNumLabels>& logits,
                              const LabelVector& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        loss += weighted_bce_term(sigmoid_scalar(logits[i]), y[i], 1.0, 1.0);
    }
    return loss / static_cast<double>(kNumLabels);
}

// ---------------------------------------------------------------------------
// Prediction
// ---------------------------------------------------------------------------

/// flag_i = (p_i >= threshold); with gate_subtypes set, a negative gate label
/// forces the four subtype flags to 0.
inline LabelVector threshold_predict(const std::array<double, kNumLabels>& p, double threshold,
                                     bool gate_subtypes = false) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ParamError("threshold_predict: threshold must be in (0,1), got " +
                         std::to_string(threshold));
    }
    LabelVector flags{};
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        flags[i] = p[i] >= threshold ? 1 : 0;
    }
    if (gate_subtypes && flags[0] == 0) {
        flags.fill(0);
    }
    return flags;
}

}  // namespace graphfuse
