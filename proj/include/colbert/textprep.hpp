#pragma once

// Text normalization applied to every input before encoding:
//   contraction expansion -> special-character aliasing ->
//   punctuation separation -> sentence splitting.
// All functions are pure and operate on UTF-8 byte strings. Malformed UTF-8
// bytes pass through as opaque single-byte characters.

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colbert/error.hpp"

namespace colbert::textprep {

namespace detail {

/// Byte length of the UTF-8 sequence starting at s[pos]; 1 for malformed input.
inline std::size_t utf8_length(std::string_view s, std::size_t pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    std::size_t len = 1;
    if (lead >= 0xF0 && lead <= 0xF4) {
        len = 4;
    } else if (lead >= 0xE0) {
        len = lead <= 0xEF ? 3 : 1;
    } else if (lead >= 0xC2) {
        len = 2;
    }
    if (pos + len > s.size()) return 1;
    for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(s[pos + k]) & 0xC0) != 0x80) return 1;
    }
    return len;
}

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline char ascii_lower(char c) { return is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
inline char ascii_upper(char c) {
    return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

inline constexpr std::string_view kLeftDoubleQuote = "“";
inline constexpr std::string_view kRightDoubleQuote = "”";
inline constexpr std::string_view kLeftSingleQuote = "‘";
inline constexpr std::string_view kRightSingleQuote = "’";
inline constexpr std::string_view kEnDash = "–";
inline constexpr std::string_view kEllipsis = "…";

inline bool is_apostrophe(std::string_view ch) { return ch == "'" || ch == kRightSingleQuote; }

} // namespace detail

/// Punctuation marks that get separated from words. Multi-byte marks are
/// stored as their UTF-8 encoding.
inline constexpr std::array<std::string_view, 13> kPunctuationMarks = {
    ".", ",", "?", "-", detail::kEnDash, "(", ")", "'", detail::kEllipsis, "\"", ":", ";", "!",
};

inline bool is_punctuation_mark(std::string_view ch) {
    return std::find(kPunctuationMarks.begin(), kPunctuationMarks.end(), ch) != kPunctuationMarks.end();
}

inline bool is_sentence_terminator(std::string_view token) {
    return token == "." || token == "?" || token == "!" || token == "..." || token == detail::kEllipsis;
}

/// Lower-cased contraction -> expansion. Keys always contain a straight
/// apostrophe; expansions never do.
class ContractionTable {
public:
    ContractionTable() = default;

    ContractionTable(std::initializer_list<std::pair<std::string, std::string>> entries) {
        for (const auto& [key, value] : entries) add(key, value);
    }

    void add(std::string_view key, std::string value) {
        std::string folded;
        folded.reserve(key.size());
        for (char c : key) folded.push_back(detail::ascii_lower(c));
        if (folded.find('\'') == std::string::npos || value.find('\'') != std::string::npos) {
            throw Error(ErrorCode::invalid_argument, "contraction entry '" + std::string(key) + "'");
        }
        if (!entries_.emplace(std::move(folded), std::move(value)).second) {
            throw Error(ErrorCode::invalid_argument, "duplicate contraction '" + std::string(key) + "'");
        }
    }

    const std::string* find(std::string_view folded_key) const {
        auto it = entries_.find(std::string(folded_key));
        return it == entries_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string> entries_;
};

/// Common English contractions. Ambiguous "'s" forms (is / has / possessive)
/// are deliberately absent; "let's" is the one unambiguous exception.
inline const ContractionTable& default_contractions() {
    static const ContractionTable table{
        {"ain't", "am not"},          {"aren't", "are not"},        {"can't", "cannot"},
        {"couldn't", "could not"},    {"daren't", "dare not"},      {"didn't", "did not"},
        {"doesn't", "does not"},      {"don't", "do not"},          {"hadn't", "had not"},
        {"hasn't", "has not"},        {"haven't", "have not"},      {"isn't", "is not"},
        {"mightn't", "might not"},    {"mustn't", "must not"},      {"needn't", "need not"},
        {"oughtn't", "ought not"},    {"shan't", "shall not"},      {"shouldn't", "should not"},
        {"wasn't", "was not"},        {"weren't", "were not"},      {"won't", "will not"},
        {"wouldn't", "would not"},    {"couldn't've", "could not have"},
        {"shouldn't've", "should not have"},                        {"wouldn't've", "would not have"},
        {"could've", "could have"},   {"should've", "should have"}, {"would've", "would have"},
        {"might've", "might have"},   {"must've", "must have"},     {"i'm", "i am"},
        {"i've", "i have"},           {"i'll", "i will"},           {"i'd", "i would"},
        {"you're", "you are"},        {"you've", "you have"},       {"you'll", "you will"},
        {"you'd", "you would"},       {"he'll", "he will"},         {"he'd", "he would"},
        {"she'll", "she will"},       {"she'd", "she would"},       {"it'll", "it will"},
        {"it'd", "it would"},         {"we're", "we are"},          {"we've", "we have"},
        {"we'll", "we will"},         {"we'd", "we would"},         {"they're", "they are"},
        {"they've", "they have"},     {"they'll", "they will"},     {"they'd", "they would"},
        {"that'll", "that will"},     {"that'd", "that would"},     {"there'll", "there will"},
        {"there'd", "there would"},   {"there're", "there are"},    {"who're", "who are"},
        {"who've", "who have"},       {"who'll", "who will"},       {"who'd", "who would"},
        {"what're", "what are"},      {"what've", "what have"},     {"what'll", "what will"},
        {"where'd", "where did"},     {"how'd", "how did"},         {"how'll", "how will"},
        {"let's", "let us"},          {"y'all", "you all"},         {"ma'am", "madam"},
    };
    return table;
}

/// Character -> ASCII alias: Greek letters (both cases) and four symbols.
inline const std::map<std::string, std::string, std::less<>>& special_char_aliases() {
    static const std::map<std::string, std::string, std::less<>> table = [] {
        static constexpr std::array<std::string_view, 24> names = {
            "alpha", "beta", "gamma",   "delta", "epsilon", "zeta", "eta", "theta",
            "iota",  "kappa", "lambda", "mu",    "nu",      "xi",   "omicron", "pi",
            "rho",   "sigma", "tau",    "upsilon", "phi",   "chi",  "psi", "omega",
        };
        std::map<std::string, std::string, std::less<>> t;
        // U+03B1..U+03C9 minus final sigma (U+03C2); U+0391..U+03A9 minus U+03A2.
        std::size_t i = 0;
        for (char32_t cp = 0x3B1; cp <= 0x3C9; ++cp) {
            if (cp == 0x3C2) continue;
            const std::string lower{static_cast<char>(0xC0 | (cp >> 6)), static_cast<char>(0x80 | (cp & 0x3F))};
            const char32_t upper_cp = cp - 0x20;
            const std::string upper{static_cast<char>(0xC0 | (upper_cp >> 6)),
                                    static_cast<char>(0x80 | (upper_cp & 0x3F))};
            std::string cap(names[i]);
            cap[0] = detail::ascii_upper(cap[0]);
            t.emplace(lower, std::string(names[i]));
            t.emplace(upper, std::move(cap));
            ++i;
        }
        t.emplace("ς", "sigma");
        t.emplace("&", "and");
        t.emplace("%", "percent");
        t.emplace("$", "dollar");
        t.emplace("@", "at");
        return t;
    }();
    return table;
}

namespace detail {

/// Characters that may appear inside a contraction-bearing word.
inline bool is_word_char(std::string_view ch) {
    if (ch.size() == 1) {
        const char c = ch[0];
        return c == '\'' || (c >= '0' && c <= '9') || is_ascii_alpha(c) ||
               (!is_space(c) && static_cast<unsigned char>(c) >= 0x80);
    }
    if (ch == kRightSingleQuote) return true;
    return !(ch == kLeftDoubleQuote || ch == kRightDoubleQuote || ch == kLeftSingleQuote ||
             ch == kEnDash || ch == kEllipsis || ch == "—" || ch == " ");
}

} // namespace detail

inline std::string expand_contractions(std::string_view text, const ContractionTable& table = default_contractions()) {
    std::string out;
    out.reserve(text.size() + text.size() / 4);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t len = detail::utf8_length(text, pos);
        if (!detail::is_word_char(text.substr(pos, len))) {
            out.append(text.substr(pos, len));
            pos += len;
            continue;
        }
        std::size_t end = pos;
        std::string folded;
        bool has_apostrophe = false;
        while (end < text.size()) {
            const std::size_t l = detail::utf8_length(text, end);
            const auto ch = text.substr(end, l);
            if (!detail::is_word_char(ch)) break;
            if (detail::is_apostrophe(ch)) {
                folded.push_back('\'');
                has_apostrophe = true;
            } else if (l == 1) {
                folded.push_back(detail::ascii_lower(ch[0]));
            } else {
                folded.append(ch);
            }
            end += l;
        }
        const std::string* expansion = has_apostrophe ? table.find(folded) : nullptr;
        if (expansion == nullptr) {
            out.append(text.substr(pos, end - pos));
        } else {
            std::string replaced = *expansion;
            if (detail::is_ascii_upper(text[pos]) && !replaced.empty()) replaced[0] = detail::ascii_upper(replaced[0]);
            out += replaced;
        }
        pos = end;
    }
    return out;
}

inline std::string replace_special_chars(std::string_view text) {
    const auto& aliases = special_char_aliases();
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t len = detail::utf8_length(text, pos);
        const auto ch = text.substr(pos, len);
        if (auto it = aliases.find(ch); it != aliases.end()) {
            out += it->second;
        } else {
            out.append(ch);
        }
        pos += len;
    }
    return out;
}

/// Splits marks off words, normalizes curly quotes to straight ones, keeps a
/// run of three periods together as one "..." token and collapses whitespace.
inline std::string separate_punctuation(std::string_view text) {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) tokens.push_back(std::move(word));
        word.clear();
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t len = detail::utf8_length(text, pos);
        std::string_view ch = text.substr(pos, len);
        if (ch == detail::kLeftDoubleQuote || ch == detail::kRightDoubleQuote) {
            ch = "\"";
        } else if (ch == detail::kLeftSingleQuote || ch == detail::kRightSingleQuote) {
            ch = "'";
        }
        if (len == 1 && detail::is_space(ch[0])) {
            flush();
        } else if (ch == "." && text.substr(pos, 3) == "...") {
            flush();
            tokens.emplace_back("...");
            pos += 3;
            continue;
        } else if (is_punctuation_mark(ch)) {
            flush();
            tokens.emplace_back(ch);
        } else {
            word.append(ch);
        }
        pos += len;
    }
    flush();

    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

/// A sentence ends after a run of terminator tokens ("." "?" "!" "..." "…").
/// Input is expected to be punctuation-separated already.
inline std::vector<std::string> split_sentences(std::string_view cleaned) {
    std::vector<std::string> sentences;
    std::string current;
    bool after_terminator = false;
    std::size_t pos = 0;
    while (pos < cleaned.size()) {
        while (pos < cleaned.size() && detail::is_space(cleaned[pos])) ++pos;
        if (pos == cleaned.size()) break;
        std::size_t end = pos;
        while (end < cleaned.size() && !detail::is_space(cleaned[end])) ++end;
        const auto token = cleaned.substr(pos, end - pos);
        const bool terminator = is_sentence_terminator(token);
        if (after_terminator && !terminator) {
            sentences.push_back(std::move(current));
            current.clear();
        }
        if (!current.empty()) current.push_back(' ');
        current.append(token);
        after_terminator = terminator;
        pos = end;
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

/// First ASCII letter upper-cased, every later ASCII letter lower-cased.
inline std::string to_sentence_case(std::string_view text) {
    std::string out(text);
    bool seen_alpha = false;
    for (char& c : out) {
        if (!detail::is_ascii_alpha(c)) continue;
        c = seen_alpha ? detail::ascii_lower(c) : detail::ascii_upper(c);
        seen_alpha = true;
    }
    return out;
}

struct CleanText {
    std::string original;
    std::string cleaned;
    std::vector<std::string> sentences;

    friend bool operator==(const CleanText&, const CleanText&) = default;
};

inline CleanText preprocess(std::string_view text, const ContractionTable& table = default_contractions()) {
    CleanText result;
    result.original = std::string(text);
    result.cleaned = separate_punctuation(replace_special_chars(expand_contractions(text, table)));
    result.sentences = split_sentences(result.cleaned);
    return result;
}

} // namespace colbert::textprep
