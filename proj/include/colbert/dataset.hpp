#pragma once

// Balanced humor dataset construction from a jokes dump and a news-headline
// dump, plus the surface statistics used to compare the two halves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "colbert/csv.hpp"
#include "colbert/error.hpp"
#include "colbert/random.hpp"
#include "colbert/textprep.hpp"

namespace colbert::dataset {

enum class Source { jokes, news };

struct LabeledExample {
    std::string text;
    bool label = false; // true = humor
    Source source = Source::news;

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct FilterConfig {
    std::size_t min_chars = 30;
    std::size_t max_chars = 100;
    std::size_t min_words = 10;
    std::size_t max_words = 18;
    std::size_t rows_per_class = 100000;
    std::uint64_t seed = 0;

    void validate() const {
        if (min_chars > max_chars || min_words > max_words) {
            throw Error(ErrorCode::invalid_argument, "filter range has min > max");
        }
        if (rows_per_class == 0) throw Error(ErrorCode::invalid_argument, "rows_per_class must be > 0");
    }
};

/// Number of Unicode code points (malformed bytes count as one each).
inline std::size_t char_count(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < text.size(); pos += textprep::detail::utf8_length(text, pos)) ++n;
    return n;
}

inline std::vector<std::string_view> whitespace_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && textprep::detail::is_space(text[pos])) ++pos;
        std::size_t end = pos;
        while (end < text.size() && !textprep::detail::is_space(text[end])) ++end;
        if (end > pos) tokens.push_back(text.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

inline std::size_t word_count(std::string_view text) { return whitespace_tokens(text).size(); }

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && textprep::detail::is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && textprep::detail::is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// Drops repeated rows (compared after trimming outer whitespace), keeping the
/// first occurrence in its original position. Returned rows are trimmed.
inline std::vector<std::string> dedup(std::span<const std::string> rows) {
    std::unordered_set<std::string_view> seen;
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const auto key = trim(row);
        if (seen.insert(key).second) out.emplace_back(key);
    }
    return out;
}

inline bool passes_filters(std::string_view text, const FilterConfig& cfg) {
    const auto chars = char_count(text);
    const auto words = word_count(text);
    return chars >= cfg.min_chars && chars <= cfg.max_chars && words >= cfg.min_words && words <= cfg.max_words;
}

inline std::vector<std::string> apply_filters(std::span<const std::string> rows, const FilterConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& row : rows) {
        if (passes_filters(row, cfg)) out.push_back(row);
    }
    return out;
}

namespace detail {

inline std::vector<std::string> sample(std::vector<std::string> rows, std::size_t k, Rng& rng) {
    // partial Fisher-Yates: the first k slots end up uniformly sampled
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, rows.size() - i));
        std::swap(rows[i], rows[j]);
    }
    rows.resize(k);
    return rows;
}

} // namespace detail

/// dedup -> length filters -> sentence case (news only) -> seeded sample of
/// rows_per_class per source -> merge -> seeded shuffle.
inline std::vector<LabeledExample> build_from_rows(std::span<const std::string> jokes,
                                                   std::span<const std::string> news, const FilterConfig& cfg) {
    cfg.validate();
    auto joke_rows = apply_filters(dedup(jokes), cfg);
    auto news_rows = apply_filters(dedup(news), cfg);
    for (auto& row : news_rows) row = textprep::to_sentence_case(row);

    if (joke_rows.size() < cfg.rows_per_class) {
        throw Error(ErrorCode::not_enough_rows, "jokes source has " + std::to_string(joke_rows.size()) +
                                                    " rows after filtering, need " +
                                                    std::to_string(cfg.rows_per_class));
    }
    if (news_rows.size() < cfg.rows_per_class) {
        throw Error(ErrorCode::not_enough_rows, "news source has " + std::to_string(news_rows.size()) +
                                                    " rows after filtering, need " +
                                                    std::to_string(cfg.rows_per_class));
    }

    Rng rng(cfg.seed);
    joke_rows = detail::sample(std::move(joke_rows), cfg.rows_per_class, rng);
    news_rows = detail::sample(std::move(news_rows), cfg.rows_per_class, rng);

    std::vector<LabeledExample> merged;
    merged.reserve(2 * cfg.rows_per_class);
    for (auto& t : joke_rows) merged.push_back({std::move(t), true, Source::jokes});
    for (auto& t : news_rows) merged.push_back({std::move(t), false, Source::news});
    shuffle(std::span(merged), rng);
    return merged;
}

inline std::vector<LabeledExample> build(const std::filesystem::path& jokes_path,
                                         const std::filesystem::path& news_path, const FilterConfig& cfg,
                                         std::string_view jokes_column = "text",
                                         std::string_view news_column = "text") {
    const auto jokes = csv::read_column(jokes_path, jokes_column);
    const auto news = csv::read_column(news_path, news_column);
    return build_from_rows(jokes, news, cfg);
}

inline void write_csv(std::ostream& out, std::span<const LabeledExample> examples) {
    out << "text,humor\n";
    for (const auto& e : examples) csv::write_row(out, {e.text, e.label ? "true" : "false"});
}

inline void write_csv(const std::filesystem::path& path, std::span<const LabeledExample> examples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    write_csv(out, examples);
}

inline bool parse_label(std::string_view value) {
    if (value == "true" || value == "True" || value == "TRUE" || value == "1") return true;
    if (value == "false" || value == "False" || value == "FALSE" || value == "0") return false;
    throw Error(ErrorCode::bad_csv, "humor value '" + std::string(value) + "' is not a boolean");
}

/// Reads a text,humor dataset file.
inline std::vector<LabeledExample> read_csv(const std::filesystem::path& path) {
    const auto texts = csv::read_column(path, "text");
    const auto labels = csv::read_column(path, "humor");
    std::vector<LabeledExample> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        const bool label = parse_label(labels[i]);
        out.push_back({texts[i], label, label ? Source::jokes : Source::news});
    }
    return out;
}

struct ColumnStats {
    double mean = 0;
    double std = 0; // population
    double min = 0;
    double median = 0;
    double max = 0;

    friend bool operator==(const ColumnStats&, const ColumnStats&) = default;
};

struct DatasetStats {
    ColumnStats chars;
    ColumnStats words;
    ColumnStats unique_words;
    ColumnStats punctuation;
    ColumnStats duplicate_words;
    ColumnStats sentences;

    friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

inline ColumnStats describe(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::empty_input, "no values to describe");
    ColumnStats s;
    const auto n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / n);
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return s;
}

inline std::size_t punctuation_count(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        const std::size_t len = textprep::detail::utf8_length(text, pos);
        if (textprep::is_punctuation_mark(text.substr(pos, len))) ++n;
        pos += len;
    }
    return n;
}

inline DatasetStats compute_stats(std::span<const LabeledExample> examples) {
    if (examples.empty()) throw Error(ErrorCode::empty_input, "cannot compute statistics of an empty dataset");
    std::vector<double> chars, words, unique, punct, dups, sentences;
    for (const auto& e : examples) {
        const auto tokens = whitespace_tokens(e.text);
        const std::unordered_set<std::string_view> distinct(tokens.begin(), tokens.end());
        chars.push_back(static_cast<double>(char_count(e.text)));
        words.push_back(static_cast<double>(tokens.size()));
        unique.push_back(static_cast<double>(distinct.size()));
        punct.push_back(static_cast<double>(punctuation_count(e.text)));
        dups.push_back(static_cast<double>(tokens.size() - distinct.size()));
        sentences.push_back(
            static_cast<double>(textprep::split_sentences(textprep::separate_punctuation(e.text)).size()));
    }
    return {describe(std::move(chars)),  describe(std::move(words)), describe(std::move(unique)),
            describe(std::move(punct)),  describe(std::move(dups)),  describe(std::move(sentences))};
}

inline void to_json(nlohmann::json& j, const ColumnStats& s) {
    j = {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"median", s.median}, {"max", s.max}};
}

inline void to_json(nlohmann::json& j, const DatasetStats& s) {
    j = {{"chars", s.chars},
         {"words", s.words},
         {"unique_words", s.unique_words},
         {"punctuation", s.punctuation},
         {"duplicate_words", s.duplicate_words},
         {"sentences", s.sentences}};
}

inline void print_stats_table(std::ostream& out, const DatasetStats& s) {
    const std::pair<const char*, const ColumnStats*> cols[] = {
        {"#chars", &s.chars},           {"#words", &s.words},
        {"#unique words", &s.unique_words}, {"#punctuation", &s.punctuation},
        {"#duplicate words", &s.duplicate_words}, {"#sentences", &s.sentences},
    };
    out << std::left << std::setw(8) << "";
    for (const auto& [name, _] : cols) out << std::right << std::setw(18) << name;
    out << '\n';
    const std::pair<const char*, double ColumnStats::*> rows[] = {
        {"mean", &ColumnStats::mean}, {"std", &ColumnStats::std},       {"min", &ColumnStats::min},
        {"median", &ColumnStats::median}, {"max", &ColumnStats::max},
    };
    out << std::fixed << std::setprecision(3);
    for (const auto& [label, field] : rows) {
        out << std::left << std::setw(8) << label;
        for (const auto& [_, col] : cols) out << std::right << std::setw(18) << col->*field;
        out << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

/// Stratified seeded split of row indices: sizes are floor(n * fraction) and
/// the remainder, and each part keeps the overall label ratio up to rounding.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(const std::vector<bool>& labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "train fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = labels.size();
    const auto train_size = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (labels[i] ? pos : neg).push_back(i);
    Rng rng(seed);
    shuffle(std::span(pos), rng);
    shuffle(std::span(neg), rng);

    std::size_t pos_train = n == 0 ? 0 : (train_size * pos.size() + n / 2) / n;
    pos_train = std::clamp(pos_train, train_size > neg.size() ? train_size - neg.size() : 0,
                           std::min(pos.size(), train_size));
    const std::size_t neg_train = train_size - pos_train;

    std::vector<std::size_t> train(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(pos_train));
    train.insert(train.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(neg_train));
    std::vector<std::size_t> test(pos.begin() + static_cast<std::ptrdiff_t>(pos_train), pos.end());
    test.insert(test.end(), neg.begin() + static_cast<std::ptrdiff_t>(neg_train), neg.end());
    shuffle(std::span(train), rng);
    shuffle(std::span(test), rng);
    return {std::move(train), std::move(test)};
}

template <typename T, typename LabelOf>
std::pair<std::vector<T>, std::vector<T>> split(std::span<const T> items, double train_fraction, std::uint64_t seed,
                                                LabelOf label_of) {
    std::vector<bool> labels;
    labels.reserve(items.size());
    for (const auto& item : items) labels.push_back(label_of(item));
    auto [train_idx, test_idx] = split_indices(labels, train_fraction, seed);
    std::pair<std::vector<T>, std::vector<T>> out;
    out.first.reserve(train_idx.size());
    out.second.reserve(test_idx.size());
    for (auto i : train_idx) out.first.push_back(items[i]);
    for (auto i : test_idx) out.second.push_back(items[i]);
    return out;
}

inline std::pair<std::vector<LabeledExample>, std::vector<LabeledExample>>
split(std::span<const LabeledExample> examples, double train_fraction, std::uint64_t seed) {
    return split(examples, train_fraction, seed, [](const LabeledExample& e) { return e.label; });
}

} // namespace colbert::dataset
