#pragma once

#include <string>
#include <vector>

#include "michelstat/ast.hpp"

namespace michelstat {

enum class tok_kind {
    t_ident,   // instructions, type names, data constructors, section keywords
    t_annot,   // %name
    t_num,     // optionally signed decimal
    t_string,  // "..." with \" and \\ escapes
    t_lbrace,
    t_rbrace,
    t_lparen,
    t_rparen,
    t_semi,
    t_eof,
};

struct token {
    tok_kind kind;
    std::string text;
    big_int num;
    span where;
};

// Tokenizes a whole script. `#` starts a comment running to end of line.
std::vector<token> tokenize(const std::string& src);

} // namespace michelstat
