#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/matrix.hpp"

namespace graphfuse {

/// Late-fusion feature: the visual block scaled by (1 - lambda) concatenated
/// with the textual block scaled by lambda. lambda = 0 keeps only the visual
/// stream, lambda = 1 only the textual stream; length is always d_v + e.
struct FusedFeature {
    std::vector<double> vector;
    double lambda_used = 0.0;
};

inline void validate_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ParamError("lambda must be in [0,1], got " + std::to_string(lambda));
    }
}

inline FusedFeature fuse(const std::vector<double>& f_v, const std::vector<double>& f_t,
                         double lambda) {
    validate_lambda(lambda);
    FusedFeature out;
    out.lambda_used = lambda;
    out.vector.reserve(f_v.size() + f_t.size());
    const double visual_scale = 1.0 - lambda;
    for (double v : f_v) out.vector.push_back(visual_scale * v);
    for (double v : f_t) out.vector.push_back(lambda * v);
    return out;
}

/// Learned affine map from the fused dimension N to the classifier dimension
/// d_c shared with the graph stack's output.
struct ProjectionParams {
    Matrix weight;  // d_c x N
    Matrix bias;    // 1 x d_c
};

inline std::vector<double> project(const FusedFeature& f, const ProjectionParams& p) {
    if (p.weight.cols() != f.vector.size()) {
        throw ShapeError("project: weight " + p.weight.shape_str() + " vs fused vector 1x" +
                         std::to_string(f.vector.size()));
    }
    if (p.bias.rows() != 1 || p.bias.cols() != p.weight.rows()) {
        throw ShapeError("project: bias " + p.bias.shape_str() + " vs weight " +
                         p.weight.shape_str());
    }
    std::vector<double> out(p.weight.rows());
    for (std::size_t i = 0; i < p.weight.rows(); ++i) {
        double sum = p.bias(0, i);
        const double* row = p.weight.row_ptr(i);
        for (std::size_t j = 0; j < p.weight.cols(); ++j) sum += row[j] * f.vector[j];
        out[i] = sum;
    }
    return out;
}

}  // namespace graphfuse
