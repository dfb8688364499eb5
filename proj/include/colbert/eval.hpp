#pragma once

// Classification metrics (humor is the positive class) and the multinomial
// Naive Bayes bag-of-words baseline.

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "colbert/dataset.hpp"
#include "colbert/error.hpp"
#include "colbert/textprep.hpp"

namespace colbert::eval {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    void add(bool predicted, bool actual) {
        if (predicted) {
            ++(actual ? tp : fp);
        } else {
            ++(actual ? fn : tn);
        }
    }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct EvalMetrics {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    ConfusionCounts counts;
    // set when the corresponding denominator was zero and the value reported as 0
    bool precision_undefined = false;
    bool recall_undefined = false;
};

inline EvalMetrics metrics_from_counts(const ConfusionCounts& c) {
    if (c.total() == 0) throw Error(ErrorCode::empty_input, "no examples were evaluated");
    EvalMetrics m;
    m.counts = c;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.precision_undefined = c.tp + c.fp == 0;
    m.recall_undefined = c.tp + c.fn == 0;
    m.precision = m.precision_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.recall = m.recall_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

inline EvalMetrics compute_metrics(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
    if (predictions.size() != labels.size()) {
        throw Error(ErrorCode::length_mismatch, std::to_string(predictions.size()) + " predictions for " +
                                                    std::to_string(labels.size()) + " labels");
    }
    if (predictions.empty()) throw Error(ErrorCode::empty_input, "no predictions");
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) c.add(predictions[i], labels[i]);
    return metrics_from_counts(c);
}

/// Runs predict_at(i) for i in [0, n) against label_at(i).
template <typename PredictAt, typename LabelAt>
EvalMetrics evaluate_model(std::size_t n, PredictAt&& predict_at, LabelAt&& label_at) {
    if (n == 0) throw Error(ErrorCode::empty_input, "empty test set");
    ConfusionCounts c;
    for (std::size_t i = 0; i < n; ++i) c.add(static_cast<bool>(predict_at(i)), static_cast<bool>(label_at(i)));
    return metrics_from_counts(c);
}

template <typename PredictFn>
EvalMetrics evaluate_model(PredictFn&& predict_fn, std::span<const dataset::LabeledExample> test_examples) {
    return evaluate_model(
        test_examples.size(), [&](std::size_t i) { return predict_fn(test_examples[i]); },
        [&](std::size_t i) { return test_examples[i].label; });
}

inline void to_json(nlohmann::json& j, const EvalMetrics& m) {
    j = {{"accuracy", m.accuracy},
         {"precision", m.precision},
         {"recall", m.recall},
         {"f1", m.f1},
         {"counts", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}}}};
}

inline void print_table_header(std::ostream& out) {
    out << std::left << std::setw(16) << "Method" << std::setw(24) << "Configuration" << std::right
        << std::setw(10) << "Accuracy" << std::setw(11) << "Precision" << std::setw(8) << "Recall" << std::setw(8)
        << "F1" << '\n';
}

inline void print_table_row(std::ostream& out, std::string_view method, std::string_view configuration,
                            const EvalMetrics& m) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::left << std::setw(16) << method << std::setw(24) << configuration << std::right << std::fixed
        << std::setprecision(3) << std::setw(10) << m.accuracy << std::setw(11) << m.precision << std::setw(8)
        << m.recall << std::setw(8) << m.f1 << '\n';
    out.flags(flags);
    out.precision(precision);
}

/// Count-vectorizer style tokens: preprocessed text, ASCII-lowercased, split
/// on whitespace.
inline std::vector<std::string> nb_tokenize(std::string_view text) {
    auto cleaned = textprep::preprocess(text).cleaned;
    for (char& c : cleaned) c = textprep::detail::ascii_lower(c);
    std::vector<std::string> tokens;
    for (auto t : dataset::whitespace_tokens(cleaned)) tokens.emplace_back(t);
    return tokens;
}

struct NBModel {
    double alpha = 0.2;
    std::unordered_map<std::string, std::size_t> vocabulary;
    std::array<std::vector<std::uint64_t>, 2> token_counts; // [class][token index]; class 1 = humor
    std::array<std::uint64_t, 2> totals{};                  // total token count per class
    std::array<double, 2> priors{};

    std::size_t vocabulary_size() const { return vocabulary.size(); }

    double log_prior(bool cls) const { return std::log(priors[cls]); }

    /// log P(token | class) with additive smoothing; unseen tokens get count 0.
    double log_likelihood(std::string_view token, bool cls) const {
        const auto denom = static_cast<double>(totals[cls]) + alpha * static_cast<double>(vocabulary.size());
        auto it = vocabulary.find(std::string(token));
        const double count = it == vocabulary.end() ? 0.0 : static_cast<double>(token_counts[cls][it->second]);
        return std::log((count + alpha) / denom);
    }

    double log_score(std::span<const std::string> tokens, bool cls) const {
        double score = log_prior(cls);
        for (const auto& t : tokens) score += log_likelihood(t, cls);
        return score;
    }
};

inline NBModel nb_fit(std::span<const std::string> texts, const std::vector<bool>& labels, double alpha = 0.2) {
    if (texts.empty()) throw Error(ErrorCode::empty_input, "cannot fit Naive Bayes on an empty corpus");
    if (texts.size() != labels.size()) throw Error(ErrorCode::length_mismatch, "texts and labels differ in length");
    if (!(alpha > 0)) throw Error(ErrorCode::invalid_argument, "alpha must be > 0");

    NBModel model;
    model.alpha = alpha;
    std::array<std::uint64_t, 2> docs{};
    for (std::size_t i = 0; i < texts.size(); ++i) {
        const bool cls = labels[i];
        ++docs[cls];
        for (auto& token : nb_tokenize(texts[i])) {
            auto [it, inserted] = model.vocabulary.emplace(std::move(token), model.vocabulary.size());
            if (inserted) {
                model.token_counts[0].push_back(0);
                model.token_counts[1].push_back(0);
            }
            ++model.token_counts[cls][it->second];
            ++model.totals[cls];
        }
    }
    const auto n = static_cast<double>(texts.size());
    model.priors = {static_cast<double>(docs[0]) / n, static_cast<double>(docs[1]) / n};
    return model;
}

/// Ties go to the negative class.
inline bool nb_predict(const NBModel& model, std::string_view text) {
    const auto tokens = nb_tokenize(text);
    return model.log_score(tokens, true) > model.log_score(tokens, false);
}

} // namespace colbert::eval
