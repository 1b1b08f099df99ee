/**
 * @file
 * @brief Text normalization and tokenization shared by every analysis stage.
 *
 * Normalization lowercases ASCII, strips the Spanish acute accents and the
 * diaeresis, and folds ñ to n. Everything else passes through untouched, so a
 * normalized string is still valid UTF-8. Tokenization splits normalized text
 * on every byte outside [a-z0-9_#@]; multi-byte sequences therefore act as
 * separators.
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace geosocial {

enum class TokenKind : std::uint8_t { word, hashtag, mention };

struct Token {
    std::string surface;
    TokenKind kind = TokenKind::word;

    friend bool operator==(const Token&, const Token&) = default;
};

namespace detail {

// Second byte of the two-byte UTF-8 sequences starting with 0xC3 that fold to
// a plain ASCII letter. Returns 0 for anything else.
constexpr char fold_latin1_supplement(unsigned char second) noexcept {
    switch (second) {
        case 0x81: case 0xA1: return 'a';  // Á á
        case 0x89: case 0xA9: return 'e';  // É é
        case 0x8D: case 0xAD: return 'i';  // Í í
        case 0x93: case 0xB3: return 'o';  // Ó ó
        case 0x9A: case 0xBA:              // Ú ú
        case 0x9C: case 0xBC: return 'u';  // Ü ü
        case 0x91: case 0xB1: return 'n';  // Ñ ñ
        default: return 0;
    }
}

constexpr bool is_word_byte(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

constexpr bool is_space_byte(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

/// Lowercase + accent-strip. Idempotent and total.
inline std::string normalize_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto c = static_cast<unsigned char>(raw[i]);
        if (c >= 'A' && c <= 'Z') {
            out.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c == 0xC3 && i + 1 < raw.size()) {
            if (const char folded = detail::fold_latin1_supplement(static_cast<unsigned char>(raw[i + 1]))) {
                out.push_back(folded);
                ++i;
            } else {
                out.push_back(raw[i]);
            }
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

/// Trims and collapses internal whitespace runs to a single space.
inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (const char c : s) {
        if (detail::is_space_byte(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

/// Normalizes `text`, then splits it into word, hashtag and mention tokens.
/// A '#' or '@' always opens a new token; a bare prefix without a body is dropped.
inline std::vector<Token> tokenize(std::string_view text) {
    const std::string norm = normalize_text(text);
    std::vector<Token> tokens;

    std::size_t i = 0;
    const std::size_t n = norm.size();
    while (i < n) {
        const char c = norm[i];
        if (c == '#' || c == '@') {
            std::size_t j = i + 1;
            while (j < n && detail::is_word_byte(norm[j])) ++j;
            if (j > i + 1) {
                tokens.push_back({norm.substr(i, j - i), c == '#' ? TokenKind::hashtag : TokenKind::mention});
            }
            i = j;
        } else if (detail::is_word_byte(c)) {
            std::size_t j = i + 1;
            while (j < n && detail::is_word_byte(norm[j])) ++j;
            tokens.push_back({norm.substr(i, j - i), TokenKind::word});
            i = j;
        } else {
            ++i;
        }
    }
    return tokens;
}

inline std::string_view to_string(TokenKind kind) noexcept {
    switch (kind) {
        case TokenKind::word: return "word";
        case TokenKind::hashtag: return "hashtag";
        case TokenKind::mention: return "mention";
    }
    return "word";
}

}  // namespace geosocial
