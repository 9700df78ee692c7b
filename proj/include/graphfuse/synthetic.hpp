#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "graphfuse/dataset.hpp"
#include "graphfuse/errors.hpp"
#include "graphfuse/labels.hpp"
#include "graphfuse/rng.hpp"

namespace graphfuse {

/// Seeded synthetic dataset for desk-scale experiments.
///
/// Labels: the gate label is Bernoulli(imbalance[0]); each subtype is drawn
/// conditionally inside the gate so that its marginal rate is imbalance[i]
/// and subtype-implies-misogynous holds by construction.
///
/// Features: pure N(0,1) noise plus, per active label, a fixed seed-drawn
/// Gaussian direction scaled by separability and the block's signal share:
/// text_signal_fraction of the discriminative amplitude sits in the textual
/// block, the remainder in the visual block.
struct SyntheticConfig {
    std::uint64_t seed = 1;
    std::size_t n = 1000;
    std::size_t d_v = 32;
    std::size_t e = 32;
    // defaults mirror a 50/12.74/28.1/22.02/9.53% positive-rate mix
    std::array<double, kNumLabels> imbalance = {0.5, 0.1274, 0.281, 0.2202, 0.0953};
    double separability = 3.0;
    double text_signal_fraction = 0.5;
};

inline void validate(const SyntheticConfig& cfg) {
    if (cfg.n < 10) {
        throw ParamError("gen_synthetic: n must be >= 10, got " + std::to_string(cfg.n));
    }
    if (cfg.d_v < 1 || cfg.e < 1) {
        throw ParamError("gen_synthetic: d_v and e must be >= 1");
    }
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        if (!(cfg.imbalance[i] > 0.0 && cfg.imbalance[i] < 1.0)) {
            throw ParamError("gen_synthetic: imbalance[" + std::to_string(i) +
                             "] must be in (0,1), got " + std::to_string(cfg.imbalance[i]));
        }
        if (i > 0 && cfg.imbalance[i] > cfg.imbalance[0]) {
            throw ParamError("gen_synthetic: subtype rate " + std::to_string(cfg.imbalance[i]) +
                             " exceeds the misogynous rate " + std::to_string(cfg.imbalance[0]) +
                             ", incompatible with subtype-implies-misogynous");
        }
    }
    if (cfg.separability < 0.0) {
        throw ParamError("gen_synthetic: separability must be >= 0");
    }
    if (cfg.text_signal_fraction < 0.0 || cfg.text_signal_fraction > 1.0) {
        throw ParamError("gen_synthetic: text_signal_fraction must be in [0,1]");
    }
}

inline Dataset gen_synthetic(const SyntheticConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);

    // Per-label mean directions, drawn once: all visual, then all textual.
    std::vector<std::vector<double>> dir_v(kNumLabels), dir_t(kNumLabels);
    for (std::size_t label = 0; label < kNumLabels; ++label) {
        dir_v[label].resize(cfg.d_v);
        for (double& v : dir_v[label]) v = rng.normal();
    }
    for (std::size_t label = 0; label < kNumLabels; ++label) {
        dir_t[label].resize(cfg.e);
        for (double& v : dir_t[label]) v = rng.normal();
    }

    const double visual_amp = cfg.separability * (1.0 - cfg.text_signal_fraction);
    const double textual_amp = cfg.separability * cfg.text_signal_fraction;

    Dataset ds;
    ds.d_v = cfg.d_v;
    ds.e = cfg.e;
    ds.records.reserve(cfg.n);
    std::string id_buf;
    for (std::size_t s = 0; s < cfg.n; ++s) {
        FeatureRecord record;
        id_buf = std::to_string(s);
        record.sample_id = "s" + std::string(6 - std::min<std::size_t>(6, id_buf.size()), '0') +
                           id_buf;

        // One uniform per label regardless of the gate, keeping the stream
        // alignment independent of earlier draws.
        std::array<double, kNumLabels> u;
        for (double& v : u) v = rng.uniform();
        record.labels[0] = u[0] < cfg.imbalance[0] ? 1 : 0;
        for (std::size_t label = 1; label < kNumLabels; ++label) {
            const double conditional = cfg.imbalance[label] / cfg.imbalance[0];
            record.labels[label] =
                (record.labels[0] == 1 && u[label] < conditional) ? 1 : 0;
        }

        record.visual.resize(cfg.d_v);
        for (double& v : record.visual) v = rng.normal();
        record.textual.resize(cfg.e);
        for (double& v : record.textual) v = rng.normal();
        for (std::size_t label = 0; label < kNumLabels; ++label) {
            if (record.labels[label] == 0) continue;
            for (std::size_t j = 0; j < cfg.d_v; ++j) {
                record.visual[j] += visual_amp * dir_v[label][j];
            }
            for (std::size_t j = 0; j < cfg.e; ++j) {
                record.textual[j] += textual_amp * dir_t[label][j];
            }
        }
        ds.records.push_back(std::move(record));
    }
    return ds;
}

/// Random label embeddings for synthetic runs, standing in for pretrained
/// word vectors. 5 x e_emb, standard normal entries.
inline Matrix random_label_embeddings(std::uint64_t seed, std::size_t e_emb) {
    if (e_emb < 1) {
        throw ParamError("random_label_embeddings: e_emb must be >= 1");
    }
    Rng rng(seed ^ 0x5eedfacefeedbeefULL);
    Matrix out(kNumLabels, e_emb);
    for (double& v : out.values()) v = rng.normal();
    return out;
}

}  // namespace graphfuse
