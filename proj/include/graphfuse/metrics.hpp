#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "graphfuse/errors.hpp"
#include "graphfuse/labels.hpp"

namespace graphfuse {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

inline ConfusionCounts count_confusion(const std::vector<int>& pred,
                                       const std::vector<int>& gold) {
    if (pred.size() != gold.size()) {
        throw ParamError("count_confusion: " + std::to_string(pred.size()) +
                         " predictions vs " + std::to_string(gold.size()) + " gold labels");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (gold[i] == 1) {
            pred[i] == 1 ? ++c.tp : ++c.fn;
        } else {
            pred[i] == 1 ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

/// 2tp / (2tp + fp + fn); a zero denominator scores 0.
inline double f1_from_counts(const ConfusionCounts& c) {
    const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(c.tp) / denom;
}

namespace detail {

inline std::vector<int> complement(const std::vector<int>& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1 - v[i];
    return out;
}

inline void require_scorable(const std::vector<int>& pred, const std::vector<int>& gold,
                             const char* op) {
    if (pred.size() != gold.size()) {
        throw ParamError(std::string(op) + ": " + std::to_string(pred.size()) +
                         " predictions vs " + std::to_string(gold.size()) + " gold labels");
    }
    if (pred.empty()) {
        throw ParamError(std::string(op) + ": empty inputs");
    }
}

}  // namespace detail

/// Unweighted mean of the F1 treating 1 as positive and the F1 treating 0 as
/// positive.
inline double macro_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
    detail::require_scorable(pred, gold, "macro_f1");
    const double f1_pos = f1_from_counts(count_confusion(pred, gold));
    const double f1_neg =
        f1_from_counts(count_confusion(detail::complement(pred), detail::complement(gold)));
    return 0.5 * (f1_pos + f1_neg);
}

/// Support-weighted mean of the positive- and negative-class F1 of one label;
/// supports come from gold.
inline double weighted_f1_label(const std::vector<int>& pred, const std::vector<int>& gold) {
    detail::require_scorable(pred, gold, "weighted_f1_label");
    const ConfusionCounts pos = count_confusion(pred, gold);
    const double f1_pos = f1_from_counts(pos);
    const double f1_neg =
        f1_from_counts(count_confusion(detail::complement(pred), detail::complement(gold)));
    const double support_pos = static_cast<double>(pos.tp + pos.fn);
    const double support_neg = static_cast<double>(pos.fp + pos.tn);
    const double n = static_cast<double>(pred.size());
    return (support_pos * f1_pos + support_neg * f1_neg) / n;
}

/// Arithmetic mean of the five per-label weighted F1 values. subtypes_only
/// drops the gate label and averages the remaining four.
inline double task_b_score(const std::array<double, kNumLabels>& per_label_weighted_f1,
                           bool subtypes_only = false) {
    double sum = 0.0;
    const std::size_t first = subtypes_only ? 1 : 0;
    for (std::size_t i = first; i < kNumLabels; ++i) sum += per_label_weighted_f1[i];
    return sum / static_cast<double>(kNumLabels - first);
}

struct PerLabelMetrics {
    double f1_pos = 0.0;
    double f1_neg = 0.0;
    double weighted_f1 = 0.0;
    std::size_t support_pos = 0;
    std::size_t support_neg = 0;
};

/// Full scoring decomposition for one prediction set: per-label F1s plus the
/// two task-level scores.
struct MetricsReport {
    std::array<PerLabelMetrics, kNumLabels> per_label{};
    double task_a_macro_f1 = 0.0;
    double task_b = 0.0;
};

inline MetricsReport compute_report(const std::vector<LabelVector>& pred,
                                    const std::vector<LabelVector>& gold,
                                    bool subtypes_only = false) {
    if (pred.size() != gold.size()) {
        throw ParamError("compute_report: " + std::to_string(pred.size()) +
                         " predictions vs " + std::to_string(gold.size()) + " gold labels");
    }
    if (pred.empty()) {
        throw ParamError("compute_report: empty inputs");
    }
    MetricsReport report;
    std::array<double, kNumLabels> weighted{};
    for (std::size_t label = 0; label < kNumLabels; ++label) {
        std::vector<int> p(pred.size()), g(gold.size());
        for (std::size_t s = 0; s < pred.size(); ++s) {
            p[s] = pred[s][label];
            g[s] = gold[s][label];
        }
        const ConfusionCounts pos = count_confusion(p, g);
        PerLabelMetrics& m = report.per_label[label];
        m.f1_pos = f1_from_counts(pos);
        m.f1_neg = f1_from_counts(count_confusion(detail::complement(p), detail::complement(g)));
        m.weighted_f1 = weighted_f1_label(p, g);
        m.support_pos = pos.tp + pos.fn;
        m.support_neg = pos.fp + pos.tn;
        weighted[label] = m.weighted_f1;
        if (label == 0) report.task_a_macro_f1 = macro_f1(p, g);
    }
    report.task_b = task_b_score(weighted, subtypes_only);
    return report;
}

}  // namespace graphfuse
