#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace graphfuse {

/// The five labels, in the fixed order used for weight vectors, adjacency
/// rows/columns, metric reports and TSV columns alike. Label 0 is the binary
/// gate; labels 1..4 are its subtypes.
inline constexpr std::size_t kNumLabels = 5;

inline const std::array<std::string, kNumLabels>& label_names() {
    static const std::array<std::string, kNumLabels> names = {
        "misogynous", "shaming", "stereotype", "objectification", "violence"};
    return names;
}

using LabelVector = std::array<int, kNumLabels>;

/// A subtype flag may only be set when the gate label is set.
inline bool labels_consistent(const LabelVector& y) {
    if (y[0] == 1) return true;
    for (std::size_t i = 1; i < kNumLabels; ++i) {
        if (y[i] != 0) return false;
    }
    return true;
}

}  // namespace graphfuse
