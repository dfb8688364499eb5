#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 internal error. Data goes to `out`, diagnostics to `err`.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "colbert/colbert.hpp"

namespace colbert::cli {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

struct SharedOptions {
    std::uint64_t seed = 0;
    bool quiet = false;
};

/// Error reasons are printed on a single line.
inline std::string one_line(std::string_view message) {
    std::string s(message);
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

inline void require_file(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw Error(ErrorCode::missing_file, path.string());
}

inline void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

/// Record for a text with no sentences: zero whole-text vector plus one zero
/// sentence vector.
inline encoder::EmbeddingRecord zero_record(std::uint64_t id, std::size_t dim) {
    return {id, encoder::EmbeddingVector(dim, 0.0f), {encoder::EmbeddingVector(dim, 0.0f)}};
}

inline std::vector<bool> labels_of(const std::vector<dataset::LabeledExample>& examples) {
    std::vector<bool> labels;
    labels.reserve(examples.size());
    for (const auto& e : examples) labels.push_back(e.label);
    return labels;
}

struct BuildDatasetArgs {
    std::string jokes, news, out;
    std::string jokes_column = "text", news_column = "text";
    dataset::FilterConfig filter;
};

inline void build_dataset(const BuildDatasetArgs& a, const SharedOptions& shared, std::ostream& out,
                          std::ostream& err) {
    require_file(a.jokes);
    require_file(a.news);
    auto cfg = a.filter;
    cfg.seed = shared.seed;
    const auto examples = dataset::build(a.jokes, a.news, cfg, a.jokes_column, a.news_column);
    dataset::write_csv(fs::path(a.out), examples);
    out << "wrote " << examples.size() << " rows to " << a.out << '\n';
    if (!shared.quiet) err << "build-dataset: " << cfg.rows_per_class << " rows per class, seed " << cfg.seed << '\n';
}

struct StatsArgs {
    std::string data;
    std::string json_out;
};

inline void stats(const StatsArgs& a, std::ostream& out) {
    require_file(a.data);
    const auto examples = dataset::read_csv(a.data);
    const auto s = dataset::compute_stats(examples);
    dataset::print_stats_table(out, s);
    if (!a.json_out.empty()) write_json(a.json_out, nlohmann::json(s));
}

struct EncodeArgs {
    std::string data, store, backend = "mock", source;
    std::size_t dim = 768;
    std::size_t s_max = 3;
};

inline void encode(const EncodeArgs& a, const SharedOptions& shared, std::ostream& out, std::ostream& err) {
    require_file(a.data);
    encoder::EncoderConfig cfg;
    cfg.dim = a.dim;
    cfg.max_sentences = a.s_max;
    cfg.validate();
    const auto examples = dataset::read_csv(a.data);

    std::vector<encoder::EmbeddingRecord> records;
    records.reserve(examples.size());
    std::size_t empty_rows = 0;
    if (a.backend == "mock") {
        const encoder::MockEncoder enc(cfg.dim);
        for (std::size_t i = 0; i < examples.size(); ++i) {
            const auto clean = textprep::preprocess(examples[i].text);
            if (clean.sentences.empty()) {
                ++empty_rows;
                records.push_back(zero_record(i, cfg.dim));
            } else {
                records.push_back(encoder::encode_record(clean, enc, cfg, i));
            }
        }
    } else {
        if (a.source.empty()) throw Error(ErrorCode::invalid_argument, "--backend file requires --source");
        require_file(a.source);
        const auto src = store::EmbeddingStore::open(a.source);
        src.require_dim(cfg.dim);
        for (std::size_t i = 0; i < examples.size(); ++i) {
            auto r = src.get(i);
            if (r.sentence_vectors.empty()) {
                ++empty_rows;
                r.sentence_vectors.emplace_back(cfg.dim, 0.0f);
            }
            if (r.sentence_vectors.size() > cfg.max_sentences) r.sentence_vectors.resize(cfg.max_sentences);
            records.push_back(std::move(r));
        }
    }
    store::write(a.store, records, cfg);
    out << "wrote " << records.size() << " records (dim " << cfg.dim << ") to " << a.store << '\n';
    if (!shared.quiet && empty_rows) err << "encode: " << empty_rows << " rows were empty after cleaning\n";
}

struct TrainArgs {
    std::string store, labels, params_out;
    model::TrainConfig train;
    std::size_t s_max = 3;
    double train_fraction = 0.8;
};

inline void train(const TrainArgs& a, const SharedOptions& shared, std::ostream& out, std::ostream& err) {
    require_file(a.store);
    require_file(a.labels);
    const auto st = store::EmbeddingStore::open(a.store);
    const auto all_labels = labels_of(dataset::read_csv(a.labels));
    const auto [train_ids, test_ids] = dataset::split_indices(all_labels, a.train_fraction, shared.seed);

    model::ModelConfig mcfg;
    mcfg.dim = st.dim();
    mcfg.s_max = a.s_max;
    mcfg.seed = shared.seed;
    auto tcfg = a.train;
    tcfg.seed = shared.seed;

    std::vector<bool> labels;
    labels.reserve(train_ids.size());
    for (auto id : train_ids) labels.push_back(all_labels[id]);

    auto result = model::train(
        model::init<float>(mcfg), mcfg, train_ids.size(), [&](std::size_t i) { return st.get(train_ids[i]); },
        labels, tcfg,
        model::EpochCallback<float>([&](std::size_t epoch, double loss, const model::ModelParams<float>&) {
            out << "epoch " << epoch + 1 << " loss " << std::fixed << std::setprecision(6) << loss << '\n';
            out.unsetf(std::ios::floatfield);
            return true;
        }));
    model::save_params(a.params_out, result.params, mcfg);
    if (!shared.quiet) {
        err << "train: " << train_ids.size() << " records, " << result.params.parameter_count() << " parameters, saved to "
            << a.params_out << '\n';
    }
}

struct EvalArgs {
    std::string store, labels, params, baseline, data, json_out;
    double train_fraction = 0.8;
    double alpha = 0.2;
};

inline void evaluate(const EvalArgs& a, const SharedOptions& shared, std::ostream& out) {
    require_file(a.store);
    require_file(a.labels);
    require_file(a.params);
    if (!a.baseline.empty() && a.baseline != "nb") {
        throw Error(ErrorCode::invalid_argument, "unknown baseline '" + a.baseline + "'");
    }
    const auto data_path = a.data.empty() ? a.labels : a.data;
    if (!a.baseline.empty()) require_file(data_path);

    const auto st = store::EmbeddingStore::open(a.store);
    const auto examples = dataset::read_csv(a.labels);
    const auto all_labels = labels_of(examples);
    const auto [train_ids, test_ids] = dataset::split_indices(all_labels, a.train_fraction, shared.seed);
    const auto [params, mcfg] = model::load_params<float>(a.params);
    st.require_dim(mcfg.dim);

    nlohmann::json report;
    eval::print_table_header(out);
    const auto head_metrics = eval::evaluate_model(
        test_ids.size(), [&](std::size_t i) { return model::predict(params, st.get(test_ids[i]), mcfg).label; },
        [&](std::size_t i) { return all_labels[test_ids[i]]; });
    eval::print_table_row(out, "Proposed", "s_max=" + std::to_string(mcfg.s_max), head_metrics);
    report["model"] = head_metrics;

    if (a.baseline == "nb") {
        const auto texts_source = data_path == a.labels ? examples : dataset::read_csv(data_path);
        if (texts_source.size() != examples.size()) {
            throw Error(ErrorCode::length_mismatch, "--data and --labels have different row counts");
        }
        std::vector<std::string> texts;
        std::vector<bool> labels;
        for (auto id : train_ids) {
            texts.push_back(texts_source[id].text);
            labels.push_back(all_labels[id]);
        }
        const auto nb = eval::nb_fit(texts, labels, a.alpha);
        const auto nb_metrics = eval::evaluate_model(
            test_ids.size(), [&](std::size_t i) { return eval::nb_predict(nb, texts_source[test_ids[i]].text); },
            [&](std::size_t i) { return all_labels[test_ids[i]]; });
        std::ostringstream cfg;
        cfg << "alpha=" << a.alpha;
        eval::print_table_row(out, "Multinomial NB", cfg.str(), nb_metrics);
        report["nb"] = nb_metrics;
    }
    if (!a.json_out.empty()) write_json(a.json_out, report);
}

struct PredictArgs {
    std::string text, params, backend = "mock";
};

inline void predict(const PredictArgs& a, std::ostream& out) {
    require_file(a.params);
    if (a.backend != "mock") throw Error(ErrorCode::invalid_argument, "predict supports only --backend mock");
    const auto [params, mcfg] = model::load_params<float>(a.params);
    encoder::EncoderConfig ecfg;
    ecfg.dim = mcfg.dim;
    ecfg.max_sentences = mcfg.s_max;
    const auto clean = textprep::preprocess(a.text);
    const auto record = clean.sentences.empty()
                            ? zero_record(0, mcfg.dim)
                            : encoder::encode_record(clean, encoder::MockEncoder(mcfg.dim), ecfg);
    const auto p = model::predict(params, record, mcfg);
    out << std::fixed << std::setprecision(6) << p.probability << ' ' << (p.label ? "true" : "false") << '\n';
    out.unsetf(std::ios::floatfield);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Humor detection with parallel sentence-embedding paths", "colbert"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "Read flags from an INI/TOML file; command-line flags take precedence");

    SharedOptions shared;
    app.add_option("--seed", shared.seed, "Seed for sampling, splitting, initialization and batching");
    app.add_flag("--quiet", shared.quiet, "Suppress diagnostics on stderr");

    BuildDatasetArgs build_args;
    auto* build_cmd = app.add_subcommand("build-dataset", "Build the balanced text,humor dataset");
    build_cmd->add_option("--jokes", build_args.jokes, "Jokes CSV")->required();
    build_cmd->add_option("--news", build_args.news, "News headlines CSV")->required();
    build_cmd->add_option("--out", build_args.out, "Output dataset CSV")->required();
    build_cmd->add_option("--rows-per-class", build_args.filter.rows_per_class, "Rows sampled from each source");
    build_cmd->add_option("--jokes-column", build_args.jokes_column, "Text column of the jokes CSV");
    build_cmd->add_option("--news-column", build_args.news_column, "Text column of the news CSV");
    build_cmd->add_option("--min-chars", build_args.filter.min_chars, "Minimum characters (inclusive)");
    build_cmd->add_option("--max-chars", build_args.filter.max_chars, "Maximum characters (inclusive)");
    build_cmd->add_option("--min-words", build_args.filter.min_words, "Minimum words (inclusive)");
    build_cmd->add_option("--max-words", build_args.filter.max_words, "Maximum words (inclusive)");

    StatsArgs stats_args;
    auto* stats_cmd = app.add_subcommand("stats", "Print surface statistics of a dataset");
    stats_cmd->add_option("--data", stats_args.data, "Dataset CSV (text,humor)")->required();
    stats_cmd->add_option("--json-out", stats_args.json_out, "Also write the statistics as JSON");

    EncodeArgs encode_args;
    auto* encode_cmd = app.add_subcommand("encode", "Write an embedding store for a dataset");
    encode_cmd->add_option("--data", encode_args.data, "Dataset CSV (text,humor)")->required();
    encode_cmd->add_option("--store", encode_args.store, "Output store file")->required();
    encode_cmd->add_option("--backend", encode_args.backend, "Embedding backend")
        ->check(CLI::IsMember({"mock", "file"}));
    encode_cmd->add_option("--source", encode_args.source, "Existing store read by the file backend");
    encode_cmd->add_option("--dim", encode_args.dim, "Embedding dimension");
    encode_cmd->add_option("--s-max", encode_args.s_max, "Sentence vectors kept per text");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train the classifier head on the training split");
    train_cmd->add_option("--store", train_args.store, "Embedding store")->required();
    train_cmd->add_option("--labels", train_args.labels, "Dataset CSV whose row i labels store id i")->required();
    train_cmd->add_option("--params-out", train_args.params_out, "Output parameter file")->required();
    train_cmd->add_option("--epochs", train_args.train.epochs, "Training epochs");
    train_cmd->add_option("--batch", train_args.train.batch_size, "Mini-batch size");
    train_cmd->add_option("--lr", train_args.train.learning_rate, "Adam learning rate");
    train_cmd->add_option("--s-max", train_args.s_max, "Parallel sentence paths");
    train_cmd->add_option("--train-fraction", train_args.train_fraction, "Fraction of rows used for training");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate on the held-out split");
    eval_cmd->add_option("--store", eval_args.store, "Embedding store")->required();
    eval_cmd->add_option("--labels", eval_args.labels, "Dataset CSV whose row i labels store id i")->required();
    eval_cmd->add_option("--params", eval_args.params, "Trained parameter file")->required();
    eval_cmd->add_option("--baseline", eval_args.baseline, "Also evaluate a baseline")->check(CLI::IsMember({"nb"}));
    eval_cmd->add_option("--data", eval_args.data, "Dataset CSV with texts for the baseline (default: --labels)");
    eval_cmd->add_option("--alpha", eval_args.alpha, "Naive Bayes smoothing");
    eval_cmd->add_option("--train-fraction", eval_args.train_fraction, "Must match the value used for train");
    eval_cmd->add_option("--json-out", eval_args.json_out, "Also write metrics as JSON");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Classify one text");
    predict_cmd->add_option("--text", predict_args.text, "Input text")->required();
    predict_cmd->add_option("--params", predict_args.params, "Trained parameter file")->required();
    predict_cmd->add_option("--backend", predict_args.backend, "Embedding backend")->check(CLI::IsMember({"mock"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*build_cmd) build_dataset(build_args, shared, out, err);
        if (*stats_cmd) stats(stats_args, out);
        if (*encode_cmd) encode(encode_args, shared, out, err);
        if (*train_cmd) train(train_args, shared, out, err);
        if (*eval_cmd) evaluate(eval_args, shared, out);
        if (*predict_cmd) predict(predict_args, out);
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return e.code() == ErrorCode::invalid_argument ? kUsage : kDataError;
    } catch (const std::exception& e) {
        err << "error: Internal: " << one_line(e.what()) << '\n';
        return kInternalError;
    }
    return kOk;
}

} // namespace colbert::cli
