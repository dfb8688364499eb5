#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colbert/textprep.hpp"
#include "generators.hpp"

using namespace colbert::textprep;

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out.push_back(' ');
        out += p;
    }
    return out;
}

} // namespace

TEST(ExpandContractions, WorkedExamples) {
    EXPECT_EQ(expand_contractions("isn't"), "is not");
    EXPECT_EQ(expand_contractions(""), "");
    EXPECT_EQ(expand_contractions("Isn't it? It isn't."), "Is not it? It is not.");
}

TEST(ExpandContractions, IrregularFormsAndCurlyApostrophe) {
    EXPECT_EQ(expand_contractions("won't"), "will not");
    EXPECT_EQ(expand_contractions("can't"), "cannot");
    EXPECT_EQ(expand_contractions("Can’t stop"), "Cannot stop");
}

TEST(ExpandContractions, PossessiveAndUnknownFormsPassThrough) {
    EXPECT_EQ(expand_contractions("John's hat"), "John's hat");
    EXPECT_EQ(expand_contractions("it's"), "it's");
    EXPECT_EQ(expand_contractions("rock 'n' roll"), "rock 'n' roll");
}

TEST(ExpandContractions, OnlyWholeTokensMatch) {
    EXPECT_EQ(expand_contractions("xisn't"), "xisn't");
    EXPECT_EQ(expand_contractions("isn'tx"), "isn'tx");
    EXPECT_EQ(expand_contractions("(isn't)"), "(is not)");
}

TEST(ContractionTable, KeysUniqueAndExpansionsContainNoKey) {
    const auto& table = default_contractions();
    EXPECT_GE(table.size(), 60u);
    for (const auto& [key, expansion] : table.entries()) {
        EXPECT_EQ(expansion.find('\''), std::string::npos) << key;
        EXPECT_EQ(expand_contractions(expansion), expansion) << key;
    }
}

TEST(ContractionTable, RejectsDuplicateAfterCaseFolding) {
    ContractionTable t;
    t.add("isn't", "is not");
    EXPECT_THROW(t.add("ISN'T", "is not"), colbert::Error);
    EXPECT_THROW(t.add("plain", "x"), colbert::Error);
}

TEST(SeparatePunctuation, WorkedExamples) {
    EXPECT_EQ(separate_punctuation("This is' (fun)."), "This is ' ( fun ) .");
    EXPECT_EQ(separate_punctuation("abc"), "abc");
    EXPECT_EQ(separate_punctuation("a,b,,c"), "a , b , , c");
}

TEST(SeparatePunctuation, EllipsisFormsAreSingleTokens) {
    EXPECT_EQ(separate_punctuation("so...yes"), "so ... yes");
    EXPECT_EQ(separate_punctuation("so…yes"), "so … yes");
    EXPECT_EQ(separate_punctuation("....."), "... . .");
}

TEST(SeparatePunctuation, CurlyQuotesBecomeStraight) {
    EXPECT_EQ(separate_punctuation("“hi” ‘there’"), "\" hi \" ' there '");
}

TEST(ReplaceSpecialChars, WorkedExamples) {
    EXPECT_EQ(replace_special_chars("α"), "alpha");
    EXPECT_EQ(replace_special_chars("plain ascii"), "plain ascii");
    EXPECT_EQ(replace_special_chars("β-test"), "beta-test");
}

TEST(ReplaceSpecialChars, TableCoversGreekAlphabetAndSymbols) {
    const auto& table = special_char_aliases();
    EXPECT_EQ(replace_special_chars("ω"), "omega");
    EXPECT_EQ(replace_special_chars("Σ"), "Sigma");
    EXPECT_EQ(replace_special_chars("a&b"), "aandb");
    EXPECT_EQ(replace_special_chars("50%"), "50percent");
    EXPECT_EQ(replace_special_chars("$"), "dollar");
    EXPECT_EQ(replace_special_chars("@"), "at");
    // 24 lower + 24 upper + final sigma + 4 symbols
    EXPECT_EQ(table.size(), 53u);
}

TEST(SplitSentences, WorkedExamples) {
    EXPECT_EQ(split_sentences("a . b ? c !"), (std::vector<std::string>{"a .", "b ?", "c !"}));
    EXPECT_EQ(split_sentences("no terminator here"), (std::vector<std::string>{"no terminator here"}));
    const auto joke = split_sentences("“ Is the doctor at home ? ” the patient asked in his bronchial whisper .");
    ASSERT_EQ(joke.size(), 2u);
    EXPECT_EQ(joke[0], "“ Is the doctor at home ?");
    EXPECT_EQ(joke[1], "” the patient asked in his bronchial whisper .");
}

TEST(SplitSentences, EmptyAndWhitespaceOnlyInput) {
    EXPECT_TRUE(split_sentences("").empty());
    EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(SplitSentences, TerminatorRunsStayTogether) {
    EXPECT_EQ(split_sentences("What ? ! No ."), (std::vector<std::string>{"What ? !", "No ."}));
    EXPECT_EQ(split_sentences("so ... then …"), (std::vector<std::string>{"so ...", "then …"}));
}

TEST(SentenceCase, WorkedExamples) {
    EXPECT_EQ(to_sentence_case("Trump Breaks Another Record"), "Trump breaks another record");
    EXPECT_EQ(to_sentence_case("a"), "A");
    EXPECT_EQ(to_sentence_case("9 TO 5"), "9 To 5");
    EXPECT_EQ(to_sentence_case(""), "");
}

TEST(Preprocess, WorkedExamples) {
    const auto r = preprocess("isn't (fun).");
    EXPECT_EQ(r.cleaned, "is not ( fun ) .");
    EXPECT_EQ(r.sentences, (std::vector<std::string>{"is not ( fun ) ."}));
    EXPECT_EQ(r.original, "isn't (fun).");

    const auto empty = preprocess("");
    EXPECT_EQ(empty.cleaned, "");
    EXPECT_TRUE(empty.sentences.empty());
}

TEST(Preprocess, GoldenCorpus) {
    std::ifstream in(COLBERT_TEST_DATA_DIR "/preprocess_golden.json");
    ASSERT_TRUE(in) << "missing golden corpus";
    const auto cases = nlohmann::json::parse(in);
    ASSERT_GE(cases.size(), 53u);
    for (const auto& c : cases) {
        const auto input = c["input"].get<std::string>();
        const auto r = preprocess(input);
        EXPECT_EQ(r.cleaned, c["cleaned"].get<std::string>()) << "input: " << input;
        EXPECT_EQ(r.sentences, c["sentences"].get<std::vector<std::string>>()) << "input: " << input;
    }
}

TEST(PreprocessProperties, IdempotentOnFuzzedStrings) {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 10000; ++i) {
        const auto s = gen::fuzz_string(rng);
        const auto once = preprocess(s);
        const auto twice = preprocess(once.cleaned);
        ASSERT_EQ(twice.cleaned, once.cleaned) << "input: " << s;
        ASSERT_EQ(twice.sentences, once.sentences) << "input: " << s;
    }
}

TEST(PreprocessProperties, CleanTextInvariantsOnRandomAscii) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5000; ++i) {
        const auto s = gen::random_ascii(rng);
        const auto r = preprocess(s);
        for (const auto& sentence : r.sentences) ASSERT_FALSE(sentence.empty()) << s;
        ASSERT_EQ(join(r.sentences), r.cleaned) << s;
        ASSERT_EQ(r.sentences.empty(), r.cleaned.empty()) << s;
        // every mark is a standalone token
        for (std::size_t k = 0; k < r.cleaned.size(); ++k) {
            const std::string_view ch(&r.cleaned[k], 1);
            if (!is_punctuation_mark(ch)) continue;
            const bool dots = ch == "." && r.cleaned.substr(k, 3) == "...";
            const std::size_t end = dots ? k + 3 : k + 1;
            ASSERT_TRUE(k == 0 || r.cleaned[k - 1] == ' ') << r.cleaned;
            ASSERT_TRUE(end == r.cleaned.size() || r.cleaned[end] == ' ') << r.cleaned;
            k = end - 1;
        }
        // no contraction survives
        for (const auto& [key, _] : default_contractions().entries()) {
            ASSERT_EQ(r.cleaned.find(key), std::string::npos) << r.cleaned;
        }
    }
}

TEST(PreprocessProperties, ContractionAndSpecialPassesCommute) {
    // inputs built from non-overlapping pieces: contractions never touch specials
    const std::vector<std::string> pieces = {"isn't", "α", " ", "We'll", "&", "%", "ok", "Ω", "can't", "$"};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        for (int k = 0; k < 8; ++k) {
            s += pieces[pick(rng)];
            s += ' ';
        }
        EXPECT_EQ(expand_contractions(replace_special_chars(s)), replace_special_chars(expand_contractions(s))) << s;
    }
}

TEST(PreprocessProperties, SentenceCaseIdempotent) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const auto s = gen::random_ascii(rng);
        const auto once = to_sentence_case(s);
        ASSERT_EQ(to_sentence_case(once), once);
    }
}
