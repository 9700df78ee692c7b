#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/labels.hpp"
#include "graphfuse/matrix.hpp"

namespace graphfuse {

/// One sample: precomputed visual and textual feature vectors plus the five
/// binary labels. Region features, when present upstream, arrive flattened
/// into the visual vector.
struct FeatureRecord {
    std::string sample_id;
    std::vector<double> visual;
    std::vector<double> textual;
    LabelVector labels{};
};

struct Dataset {
    std::vector<FeatureRecord> records;
    std::size_t d_v = 0;
    std::size_t e = 0;
    std::size_t regions = 1;  // M, informational; d_v is already M*D when M > 1
    std::array<std::string, kNumLabels> names = label_names();

    std::size_t size() const { return records.size(); }
};

/// n x 5 binary label matrix in record order.
inline Matrix label_matrix(const Dataset& ds) {
    Matrix m(ds.records.size(), kNumLabels);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        for (std::size_t j = 0; j < kNumLabels; ++j) {
            m(i, j) = static_cast<double>(ds.records[i].labels[j]);
        }
    }
    return m;
}

inline std::array<std::size_t, kNumLabels> positive_counts(const Dataset& ds) {
    std::array<std::size_t, kNumLabels> counts{};
    for (const FeatureRecord& r : ds.records) {
        for (std::size_t j = 0; j < kNumLabels; ++j) {
            counts[j] += static_cast<std::size_t>(r.labels[j]);
        }
    }
    return counts;
}

/// FNV-1a over the id sequence; the determinism anchor for record order.
inline std::uint64_t id_sequence_hash(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (const FeatureRecord& r : ds.records) {
        for (char c : r.sample_id) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

/// Deterministic head/tail split: the first (1 - valid_fraction) of the
/// records train, the rest validate. Record order is preserved on both sides.
inline std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double valid_fraction) {
    if (valid_fraction <= 0.0 || valid_fraction >= 1.0) {
        throw ParamError("split_dataset: valid_fraction must be in (0,1), got " +
                         std::to_string(valid_fraction));
    }
    const std::size_t n_valid =
        std::max<std::size_t>(1, static_cast<std::size_t>(
            static_cast<double>(ds.records.size()) * valid_fraction));
    if (n_valid >= ds.records.size()) {
        throw ParamError("split_dataset: not enough records to split");
    }
    Dataset train = ds;
    Dataset valid = ds;
    const std::size_t n_train = ds.records.size() - n_valid;
    train.records.assign(ds.records.begin(), ds.records.begin() + n_train);
    valid.records.assign(ds.records.begin() + n_train, ds.records.end());
    return {std::move(train), std::move(valid)};
}

}  // namespace graphfuse
