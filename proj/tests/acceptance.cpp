// Acceptance run: one PASS / FAIL / SKIP line per criterion. Exits non-zero
// if anything fails. Checks that need the published 200k dataset run only
// when COLBERT_DATASET names its CSV (text,humor).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colbert/colbert.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace colbert;
using encoder::EmbeddingRecord;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome fail(std::string d) { return {Status::fail, std::move(d)}; }
Outcome skip(std::string d) { return {Status::skip, std::move(d)}; }
Outcome check(bool ok, std::string d) { return {ok ? Status::pass : Status::fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

const char* dataset_path() {
    const char* p = std::getenv("COLBERT_DATASET");
    return p && *p ? p : nullptr;
}

Outcome gradient_check() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::size_t redraws = 0;
    for (std::size_t dim : {4u, 6u}) {
        for (std::size_t s_max : {1u, 3u}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto cfg = oracle::toy_config(dim, s_max, seed);
                const auto p = oracle::params_with_random_biases(cfg, seed);
                std::mt19937_64 rng(seed * 31 + dim + s_max);
                const std::vector<bool> labels{true, false, true};
                std::vector<EmbeddingRecord> records;
                for (bool first = true;; first = false) {
                    redraws += !first;
                    records.clear();
                    for (std::size_t i = 0; i < 3; ++i) records.push_back(oracle::random_record(rng, dim, 1 + i % 3, i));
                    if (!oracle::kink_within(p, records, cfg, 1e-4)) break;
                }
                const std::vector<std::size_t> idx{0, 1, 2};
                const auto a = oracle::flat_values(
                    model::batch_gradient(
                        p, cfg, [&](std::size_t i) -> const EmbeddingRecord& { return records[i]; }, labels, idx)
                        .gradient);
                const auto n = oracle::numeric_gradient(p, records, labels, cfg, 1e-4);
                for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, oracle::relative_error(a[k], n[k]));
            }
        }
    }
    const double t = seconds_since(t0);
    return check(worst <= 1e-4 && t < 10.0, "max rel err " + fmt(worst) + " (<= 1e-4), " + fmt(t, 3) +
                                                " s (< 10), 40 configs, " + std::to_string(redraws) +
                                                " kink redraws");
}

Outcome forward_oracle() {
    double worst = 0;
    for (std::size_t s_max : {1u, 3u}) {
        const auto cfg = oracle::toy_config(5, s_max, 40 + s_max);
        const auto p = oracle::params_with_random_biases(cfg, 3);
        std::mt19937_64 rng(s_max);
        for (std::size_t sentences = 1; sentences <= 4; ++sentences) {
            const auto r = oracle::random_record(rng, 5, sentences);
            worst = std::max(worst, std::abs(model::forward(p, r, cfg).prediction.probability -
                                             oracle::straight_line_probability(p, r, cfg)));
        }
    }
    return check(worst <= 1e-10, "max |diff| " + fmt(worst) + " (<= 1e-10)");
}

Outcome trainability() {
    const auto t0 = std::chrono::steady_clock::now();
    encoder::MockEncoder enc(768);
    encoder::EncoderConfig ecfg;
    std::vector<EmbeddingRecord> records;
    std::vector<bool> labels;
    static const char* nouns[] = {"chicken", "doctor", "lawyer", "cat", "robot", "teacher", "penguin", "farmer"};
    for (std::size_t i = 0; i < 200; ++i) {
        const bool joke = i % 2 == 0;
        const std::string a = nouns[i % 8];
        const std::string text = joke ? "Why did the " + a + " bring a ladder? Case " + std::to_string(i) + ". Ha!"
                                      : "Officials report " + std::to_string(i) + " new " + a + " permits.";
        records.push_back(encoder::encode_record(textprep::preprocess(text), enc, ecfg, i));
        labels.push_back(joke);
    }
    model::ModelConfig cfg;
    cfg.seed = 21;
    model::TrainConfig tc;
    tc.epochs = 50;
    tc.batch_size = 16;
    tc.seed = 21;
    auto accuracy = [&](const model::ModelParams<float>& p) {
        std::size_t ok = 0;
        for (std::size_t i = 0; i < records.size(); ++i) ok += model::predict(p, records[i], cfg).label == labels[i];
        return static_cast<double>(ok) / static_cast<double>(records.size());
    };
    auto run = [&](std::size_t& epochs, double& acc) {
        return model::train(model::init<float>(cfg), cfg, std::span<const EmbeddingRecord>(records), labels, tc,
                            model::EpochCallback<float>([&](std::size_t e, double, const model::ModelParams<float>& p) {
                                epochs = e + 1;
                                acc = accuracy(p);
                                return acc < 0.99;
                            }));
    };
    std::size_t epochs_a = 0, epochs_b = 0;
    double acc_a = 0, acc_b = 0;
    const auto a = run(epochs_a, acc_a);
    const auto b = run(epochs_b, acc_b);
    const double t = seconds_since(t0);
    const bool deterministic = a.params == b.params && a.epoch_losses == b.epoch_losses;
    return check(acc_a >= 0.99 && epochs_a <= 50 && deterministic && t < 30.0,
                 "train acc " + fmt(acc_a) + " after " + std::to_string(epochs_a) + " epochs, deterministic=" +
                     (deterministic ? "yes" : "no") + ", " + fmt(t, 3) + " s for two runs (< 30)");
}

Outcome nb_oracle() {
    const std::vector<std::string> texts{"funny funny", "news"};
    const auto m = eval::nb_fit(texts, {true, false}, 0.2);
    // V = 2, class totals 2 and 1
    const std::pair<double, double> pairs[] = {
        {m.log_likelihood("funny", true), std::log(2.2 / 2.4)},  {m.log_likelihood("news", true), std::log(0.2 / 2.4)},
        {m.log_likelihood("funny", false), std::log(0.2 / 1.4)}, {m.log_likelihood("news", false), std::log(1.2 / 1.4)},
        {m.log_likelihood("unseen", true), std::log(0.2 / 2.4)}, {m.log_prior(true), std::log(0.5)},
        {m.log_prior(false), std::log(0.5)},
    };
    double worst = 0;
    for (const auto& [got, want] : pairs) worst = std::max(worst, std::abs(got - want));
    const std::vector<std::string> tie_texts{"funny funny", "news news"};
    const auto tie = eval::nb_fit(tie_texts, {true, false}, 0.2);
    const bool preds = eval::nb_predict(m, "funny") && !eval::nb_predict(m, "news") &&
                       !eval::nb_predict(tie, "zebra quokka");
    return check(worst <= 1e-12 && preds, "max |log diff| " + fmt(worst) + " (<= 1e-12), predictions " +
                                              (preds ? "match" : "differ"));
}

Outcome metrics_oracle() {
    std::mt19937_64 rng(1234);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 200;
        std::vector<bool> pred(n), label(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = rng() & 1;
            label[i] = rng() & 1;
        }
        const auto m = eval::compute_metrics(pred, label);
        const auto c = oracle::brute_force_counts(pred, label);
        const bool same = m.counts.tp == c.tp && m.counts.fp == c.fp && m.counts.tn == c.tn && m.counts.fn == c.fn &&
                          m.accuracy == static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
        mismatches += !same;
    }
    return check(mismatches == 0, std::to_string(mismatches) + " mismatches over 1000 random sets");
}

Outcome preprocessing() {
    std::size_t failures = 0;
    failures += textprep::preprocess("isn't").cleaned != "is not";
    failures += textprep::separate_punctuation("This is' (fun).") != "This is ' ( fun ) .";
    failures += textprep::replace_special_chars("α") != "alpha";

    std::ifstream in(COLBERT_TEST_DATA_DIR "/preprocess_golden.json");
    if (!in) return fail("golden corpus not found");
    const auto cases = nlohmann::json::parse(in);
    for (const auto& c : cases) {
        const auto r = textprep::preprocess(c["input"].get<std::string>());
        failures += r.cleaned != c["cleaned"].get<std::string>() ||
                    r.sentences != c["sentences"].get<std::vector<std::string>>();
    }
    std::mt19937_64 rng(20240601);
    std::size_t not_idempotent = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto once = textprep::preprocess(gen::fuzz_string(rng));
        const auto twice = textprep::preprocess(once.cleaned);
        not_idempotent += twice.cleaned != once.cleaned || twice.sentences != once.sentences;
    }
    return check(failures == 0 && not_idempotent == 0 && cases.size() >= 50,
                 std::to_string(3 + cases.size() - failures) + "/" + std::to_string(3 + cases.size()) +
                     " golden cases byte-exact, " + std::to_string(not_idempotent) +
                     " idempotence failures on 10000 fuzzed strings");
}

// 100k+ distinct rows per source that pass the default filters.
std::vector<std::string> synthetic_rows(const std::string& stem, std::size_t n) {
    static const char* words[] = {"the", "cat", "said", "market", "rose", "why", "road", "sharply", "today", "joke"};
    std::vector<std::string> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string s = stem + std::to_string(i);
        for (std::size_t k = 0; k < 10; ++k) s += std::string(" ") + words[(i * 7 + k * 3) % 10];
        rows.push_back(std::move(s));
    }
    return rows;
}

Outcome dataset_builder() {
    const auto jokes = synthetic_rows("joke", 110000);
    const auto news = synthetic_rows("News", 110000);
    dataset::FilterConfig cfg;
    cfg.seed = 2020;
    const auto a = dataset::build_from_rows(jokes, news, cfg);
    const auto b = dataset::build_from_rows(jokes, news, cfg);
    std::ostringstream csv_a, csv_b;
    dataset::write_csv(csv_a, a);
    dataset::write_csv(csv_b, b);
    const bool byte_exact = csv_a.str() == csv_b.str();
    const auto [train, test] = dataset::split(std::span<const dataset::LabeledExample>(a), 0.8, cfg.seed);
    const auto [train2, test2] = dataset::split(std::span<const dataset::LabeledExample>(a), 0.8, cfg.seed);
    const bool split_same = train == train2 && test == test2;
    return check(a.size() == 200000 && train.size() == 160000 && test.size() == 40000 && byte_exact && split_same,
                 "synthetic 200k: split " + std::to_string(train.size()) + "/" + std::to_string(test.size()) +
                     ", build byte-exact=" + (byte_exact ? "yes" : "no") + ", split repeatable=" +
                     (split_same ? "yes" : "no"));
}

Outcome dataset_table_stats() {
    const char* path = dataset_path();
    if (!path) return skip("COLBERT_DATASET not set");
    const auto examples = dataset::read_csv(path);
    const auto stats = dataset::compute_stats(examples);
    const double dc = std::abs(stats.chars.mean - 71.561);
    const double dw = std::abs(stats.words.mean - 12.811);
    const auto [train, test] = dataset::split(std::span<const dataset::LabeledExample>(examples), 0.8, 0);
    return check(dc <= 0.5 && dw <= 0.3 && train.size() == 160000 && test.size() == 40000,
                 "#chars mean " + fmt(stats.chars.mean) + " (71.561 +- 0.5), #words mean " + fmt(stats.words.mean) +
                     " (12.811 +- 0.3), split " + std::to_string(train.size()) + "/" + std::to_string(test.size()));
}

Outcome store_format() {
    const auto dir = fs::temp_directory_path() / ("colbert_accept_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    std::mt19937_64 rng(17);
    std::size_t bad_roundtrips = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 1 + rng() % 40;
        std::vector<EmbeddingRecord> records;
        for (std::size_t i = 0, n = rng() % 30; i < n; ++i) {
            records.push_back(oracle::random_record(rng, dim, 1 + rng() % 5, i * 1000 + rng() % 1000));
        }
        encoder::EncoderConfig cfg;
        cfg.dim = dim;
        store::write(dir / "a", records, cfg);
        const auto st = store::EmbeddingStore::open(dir / "a");
        std::vector<EmbeddingRecord> back;
        for (const auto& r : records) back.push_back(st.get(r.example_id));
        store::write(dir / "b", back, cfg);
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        bad_roundtrips += back != records || slurp(dir / "a") != slurp(dir / "b");
    }

    auto header = [](std::string magic, std::uint16_t version, std::uint32_t dim, std::uint64_t count) {
        auto put = [&](std::uint64_t v, int n) {
            for (int i = 0; i < n; ++i) magic.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        };
        put(version, 2);
        put(dim, 4);
        put(count, 8);
        return magic;
    };
    const std::string record(9 + 8, '\0');
    const std::tuple<std::string, std::string, ErrorCode> corrupt[] = {
        {"magic", header("CBEX", 1, 1, 1) + record, ErrorCode::bad_magic},
        {"version", header("CBEM", 7, 1, 1) + record, ErrorCode::version_mismatch},
        {"dim", header("CBEM", 1, 0, 1) + record, ErrorCode::dim_mismatch},
        {"truncated", header("CBEM", 1, 1, 2) + record, ErrorCode::truncated_file},
    };
    std::size_t wrong_errors = 0;
    for (const auto& [name, bytes, code] : corrupt) {
        {
            std::ofstream out(dir / name, std::ios::binary);
            out << bytes;
        }
        try {
            store::EmbeddingStore::open(dir / name);
            ++wrong_errors;
        } catch (const Error& e) {
            wrong_errors += e.code() != code;
        }
    }
    fs::remove_all(dir);
    return check(bad_roundtrips == 0 && wrong_errors == 0,
                 std::to_string(20 - bad_roundtrips) + "/20 randomized roundtrips byte-exact, " +
                     std::to_string(4 - wrong_errors) + "/4 corrupt headers raise the expected error");
}

Outcome nb_baseline_full() {
    const char* path = dataset_path();
    if (!path) return skip("COLBERT_DATASET not set");
    const auto examples = dataset::read_csv(path);
    const auto [train, test] = dataset::split(std::span<const dataset::LabeledExample>(examples), 0.8, 0);
    std::vector<std::string> texts;
    std::vector<bool> labels;
    for (const auto& e : train) {
        texts.push_back(e.text);
        labels.push_back(e.label);
    }
    const auto nb = eval::nb_fit(texts, labels, 0.2);
    const auto m = eval::evaluate_model([&](const dataset::LabeledExample& e) { return eval::nb_predict(nb, e.text); },
                                        std::span<const dataset::LabeledExample>(test));
    return check(std::abs(m.accuracy - 0.876) <= 0.03, "accuracy " + fmt(m.accuracy) + " (0.876 +- 0.03)");
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"gradient correctness", gradient_check},
        {"forward oracle", forward_oracle},
        {"trainability", trainability},
        {"naive bayes oracle", nb_oracle},
        {"metrics oracle", metrics_oracle},
        {"preprocessing golden suite", preprocessing},
        {"dataset builder: split and determinism", dataset_builder},
        {"dataset builder: published-data statistics", dataset_table_stats},
        {"store format", store_format},
        {"naive bayes on published data", nb_baseline_full},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = fail(std::string("threw: ") + e.what());
        }
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
        failures += o.status == Status::fail;
        std::cout << tag << "  " << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
