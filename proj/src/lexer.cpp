#include "michelstat/lexer.hpp"

#include <cctype>

namespace michelstat {

std::vector<token> tokenize(const std::string& src) {
    std::vector<token> out;
    int line = 1, col = 1;
    size_t i = 0;
    const size_t n = src.size();

    auto advance = [&](size_t k) {
        for (size_t j = 0; j < k && i < n; ++j, ++i) {
            if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
        }
    };
    auto push = [&](tok_kind k, std::string text, span s) {
        token t; t.kind = k; t.text = std::move(text); t.where = s;
        out.push_back(std::move(t));
    };

    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
        if (c == '#') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        span here{line, col};
        if (c == '{') { push(tok_kind::t_lbrace, "{", here); advance(1); continue; }
        if (c == '}') { push(tok_kind::t_rbrace, "}", here); advance(1); continue; }
        if (c == '(') { push(tok_kind::t_lparen, "(", here); advance(1); continue; }
        if (c == ')') { push(tok_kind::t_rparen, ")", here); advance(1); continue; }
        if (c == ';') { push(tok_kind::t_semi, ";", here); advance(1); continue; }
        if (c == '%') {
            size_t j = i + 1;
            while (j < n && (std::isalnum((unsigned char)src[j]) || src[j] == '_')) ++j;
            std::string name = src.substr(i + 1, j - i - 1);
            if (name.empty()) throw script_error("empty %annotation", here);
            advance(j - i);
            push(tok_kind::t_annot, name, here);
            continue;
        }
        if (c == '"') {
            std::string s;
            size_t j = i + 1;
            int l2 = line, c2 = col + 1;
            bool closed = false;
            while (j < n) {
                char d = src[j];
                if (d == '\\') {
                    if (j + 1 >= n) break;
                    char e = src[j + 1];
                    if (e == '"' || e == '\\') { s += e; j += 2; c2 += 2; continue; }
                    if (e == 'n') { s += '\n'; j += 2; c2 += 2; continue; }
                    throw script_error("unknown string escape", span{l2, c2});
                }
                if (d == '"') { closed = true; ++j; break; }
                if (d == '\n') throw script_error("unterminated string literal", here);
                s += d; ++j; ++c2;
            }
            if (!closed) throw script_error("unterminated string literal", here);
            advance(j - i);
            push(tok_kind::t_string, s, here);
            continue;
        }
        if (std::isdigit((unsigned char)c) ||
            (c == '-' && i + 1 < n && std::isdigit((unsigned char)src[i + 1]))) {
            size_t j = i + (c == '-' ? 1 : 0);
            while (j < n && std::isdigit((unsigned char)src[j])) ++j;
            std::string digits = src.substr(i, j - i);
            advance(j - i);
            token t; t.kind = tok_kind::t_num; t.text = digits;
            t.num = big_int(digits); t.where = here;
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t j = i;
            while (j < n && (std::isalnum((unsigned char)src[j]) || src[j] == '_')) ++j;
            std::string word = src.substr(i, j - i);
            advance(j - i);
            push(tok_kind::t_ident, word, here);
            continue;
        }
        throw script_error(std::string("unexpected character '") + c + "'", here);
    }
    push(tok_kind::t_eof, "", span{line, col});
    return out;
}

} // namespace michelstat
