#include "michelstat/parser.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "michelstat/lexer.hpp"

namespace michelstat {

namespace {

class parser {
  public:
    explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

    const token& peek(size_t k = 0) const {
        size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const token& next() {
        const token& t = peek();
        if (t.kind != tok_kind::t_eof) ++pos_;
        return t;
    }
    bool at(tok_kind k) const { return peek().kind == k; }
    const token& expect(tok_kind k, const char* what) {
        if (!at(k)) throw script_error(std::string("expected ") + what, peek().where);
        return next();
    }

    // ---- types ----

    mtype_ptr parse_type(bool allow_args) {
        if (at(tok_kind::t_lparen)) {
            next();
            mtype_ptr t = parse_type(true);
            expect(tok_kind::t_rparen, "')'");
            return t;
        }
        const token& t = expect(tok_kind::t_ident, "type name");
        type_ctor ctor;
        int arity;
        if (!lookup_type(t.text, ctor, arity))
            throw script_error("unknown type '" + t.text + "'", t.where);
        std::string annot;
        if (at(tok_kind::t_annot)) annot = next().text;
        std::vector<mtype_ptr> args;
        if (arity > 0) {
            if (!allow_args)
                throw script_error("compound type '" + t.text + "' must be parenthesized here",
                                   t.where);
            for (int i = 0; i < arity; ++i) args.push_back(parse_type(false));
        }
        if (ctor == type_ctor::t_set || ctor == type_ctor::t_map) {
            if (!args[0]->is_comparable_key())
                throw script_error(std::string(ctor == type_ctor::t_set ? "set" : "map") +
                                       " key type must be comparable",
                                   t.where);
        }
        return mtype::make(ctor, std::move(args), std::move(annot));
    }

    // ---- literals ----

    literal_ptr parse_literal(bool allow_args) {
        const token& t = peek();
        switch (t.kind) {
        case tok_kind::t_num: next(); return lit_int(t.num, t.where);
        case tok_kind::t_string: next(); return lit_string(t.text, t.where);
        case tok_kind::t_lparen: {
            next();
            literal_ptr l = parse_literal(true);
            expect(tok_kind::t_rparen, "')'");
            return l;
        }
        case tok_kind::t_lbrace: return parse_braced_literal();
        case tok_kind::t_ident: break;
        default: throw script_error("expected literal", t.where);
        }
        next();
        const std::string& w = t.text;
        if (w == "True") return lit_bool(true, t.where);
        if (w == "False") return lit_bool(false, t.where);
        if (w == "Unit") return lit_unit(t.where);
        if (w == "None") return lit_none(t.where);
        if (w == "Pair" || w == "Some" || w == "Left" || w == "Right") {
            if (!allow_args)
                throw script_error("'" + w + "' application must be parenthesized here", t.where);
            if (w == "Pair") {
                literal_ptr a = parse_literal(false);
                literal_ptr b = parse_literal(false);
                return lit_pair(std::move(a), std::move(b), t.where);
            }
            literal_ptr a = parse_literal(false);
            if (w == "Some") return lit_some(std::move(a), t.where);
            if (w == "Left") return lit_left(std::move(a), t.where);
            return lit_right(std::move(a), t.where);
        }
        throw script_error("unknown literal '" + w + "'", t.where);
    }

    literal_ptr parse_braced_literal() {
        const token& open = expect(tok_kind::t_lbrace, "'{'");
        if (at(tok_kind::t_rbrace)) {
            next();
            return lit_seq({}, open.where);
        }
        bool is_map = at(tok_kind::t_ident) && peek().text == "Elt";
        if (is_map) {
            std::vector<std::pair<literal_ptr, literal_ptr>> entries;
            for (;;) {
                const token& e = expect(tok_kind::t_ident, "'Elt'");
                if (e.text != "Elt") throw script_error("expected 'Elt'", e.where);
                literal_ptr k = parse_literal(false);
                literal_ptr v = parse_literal(false);
                entries.emplace_back(std::move(k), std::move(v));
                if (at(tok_kind::t_semi)) { next(); if (at(tok_kind::t_rbrace)) break; continue; }
                break;
            }
            expect(tok_kind::t_rbrace, "'}'");
            return lit_map(std::move(entries), open.where);
        }
        std::vector<literal_ptr> items;
        for (;;) {
            items.push_back(parse_literal(true));
            if (at(tok_kind::t_semi)) { next(); if (at(tok_kind::t_rbrace)) break; continue; }
            break;
        }
        expect(tok_kind::t_rbrace, "'}'");
        return lit_seq(std::move(items), open.where);
    }

    // ---- instructions ----

    instr_seq parse_block() {
        expect(tok_kind::t_lbrace, "'{'");
        instr_seq out;
        while (!at(tok_kind::t_rbrace)) {
            if (at(tok_kind::t_lbrace)) {
                // nested bare block: splice its contents
                instr_seq inner = parse_block();
                for (auto& i : inner) out.push_back(std::move(i));
            } else {
                parse_instr_into(out);
            }
            if (at(tok_kind::t_semi)) { next(); continue; }
            break;
        }
        expect(tok_kind::t_rbrace, "'}'");
        return out;
    }

    void parse_instr_into(instr_seq& out) {
        const token& t = expect(tok_kind::t_ident, "instruction");
        const std::string& w = t.text;
        span s = t.where;

        // macros first
        if (w == "FAIL") { emit_fail(out, s); return; }
        if (w == "ASSERT") {
            instr i; i.op = opcode::op_if; i.where = s;
            i.blocks = {instr_seq{}, fail_block(s)};
            out.push_back(std::move(i));
            return;
        }
        std::string sfx;
        if (starts_with(w, "ASSERT_CMP") && cmp_op(w.substr(10), sfx)) {
            push_simple(out, opcode::op_compare, s);
            push_simple(out, cmp_opcode(sfx), s);
            instr i; i.op = opcode::op_if; i.where = s;
            i.blocks = {instr_seq{}, fail_block(s)};
            out.push_back(std::move(i));
            return;
        }
        if (starts_with(w, "IFCMP") && cmp_op(w.substr(5), sfx)) {
            push_simple(out, opcode::op_compare, s);
            push_simple(out, cmp_opcode(sfx), s);
            instr i; i.op = opcode::op_if; i.where = s;
            i.blocks.push_back(parse_block());
            i.blocks.push_back(parse_block());
            out.push_back(std::move(i));
            return;
        }
        if (starts_with(w, "CMP") && cmp_op(w.substr(3), sfx)) {
            push_simple(out, opcode::op_compare, s);
            push_simple(out, cmp_opcode(sfx), s);
            return;
        }

        opcode op;
        if (!lookup_opcode(w, op))
            throw script_error("unknown instruction '" + w + "'", s);

        instr i; i.op = op; i.where = s;
        switch (op) {
        case opcode::op_drop:
        case opcode::op_dup:
            i.n = at(tok_kind::t_num) ? take_count() : 1;
            if (op == opcode::op_dup && i.n == 0)
                throw script_error("DUP 0 is not allowed", s);
            break;
        case opcode::op_dig:
        case opcode::op_dug:
            i.n = take_count();
            break;
        case opcode::op_dip:
            i.n = at(tok_kind::t_num) ? take_count() : 1;
            i.blocks.push_back(parse_block());
            break;
        case opcode::op_push:
            i.ty = parse_type(false);
            i.lit = parse_literal(false);
            break;
        case opcode::op_none:
        case opcode::op_left:
        case opcode::op_right:
        case opcode::op_nil:
        case opcode::op_empty_set:
        case opcode::op_contract:
            i.ty = parse_type(false);
            break;
        case opcode::op_empty_map:
            i.ty = parse_type(false);
            i.ty2 = parse_type(false);
            break;
        case opcode::op_if:
        case opcode::op_if_none:
        case opcode::op_if_left:
        case opcode::op_if_cons:
            i.blocks.push_back(parse_block());
            i.blocks.push_back(parse_block());
            break;
        case opcode::op_loop:
        case opcode::op_loop_left:
        case opcode::op_iter:
        case opcode::op_map:
            i.blocks.push_back(parse_block());
            break;
        default: break;
        }
        if (op == opcode::op_empty_set && !i.ty->is_comparable_key())
            throw script_error("EMPTY_SET element type must be comparable", s);
        if (op == opcode::op_empty_map && !i.ty->is_comparable_key())
            throw script_error("EMPTY_MAP key type must be comparable", s);
        out.push_back(std::move(i));
    }

    uint64_t take_count() {
        const token& t = expect(tok_kind::t_num, "stack depth");
        if (t.num < 0 || t.num > 1024)
            throw script_error("stack depth out of range", t.where);
        return t.num.convert_to<uint64_t>();
    }

    // ---- script ----

    script parse_toplevel(const std::string& source_name) {
        script sc;
        sc.source_name = source_name;
        bool have_storage = false, have_param = false, have_code = false;
        while (!at(tok_kind::t_eof)) {
            const token& t = expect(tok_kind::t_ident, "'storage', 'parameter' or 'code'");
            if (t.text == "storage") {
                if (have_storage) throw script_error("duplicate storage section", t.where);
                sc.storage_ty = parse_type(true);
                have_storage = true;
            } else if (t.text == "parameter") {
                if (have_param) throw script_error("duplicate parameter section", t.where);
                sc.param_ty = parse_type(true);
                have_param = true;
            } else if (t.text == "code") {
                if (have_code) throw script_error("duplicate code section", t.where);
                sc.code = parse_block();
                have_code = true;
            } else {
                throw script_error("unknown section '" + t.text + "'", t.where);
            }
            if (at(tok_kind::t_semi)) next();
        }
        if (!have_storage) throw script_error("missing storage section");
        if (!have_param) throw script_error("missing parameter section");
        if (!have_code) throw script_error("missing code section");
        if (sc.storage_ty->contains_operation())
            throw script_error("storage type cannot contain operation values");
        if (sc.param_ty->contains_operation())
            throw script_error("parameter type cannot contain operation values");
        return sc;
    }

  private:
    static bool starts_with(const std::string& s, const char* p) {
        return s.rfind(p, 0) == 0;
    }
    static bool cmp_op(const std::string& sfx, std::string& out) {
        if (sfx == "EQ" || sfx == "NEQ" || sfx == "LT" || sfx == "GT" || sfx == "LE" ||
            sfx == "GE") {
            out = sfx;
            return true;
        }
        return false;
    }
    static opcode cmp_opcode(const std::string& sfx) {
        if (sfx == "EQ") return opcode::op_eq;
        if (sfx == "NEQ") return opcode::op_neq;
        if (sfx == "LT") return opcode::op_lt;
        if (sfx == "GT") return opcode::op_gt;
        if (sfx == "LE") return opcode::op_le;
        return opcode::op_ge;
    }
    static void push_simple(instr_seq& out, opcode op, span s) {
        instr i; i.op = op; i.where = s;
        out.push_back(std::move(i));
    }
    static instr_seq fail_block(span s) {
        instr_seq b;
        push_simple(b, opcode::op_unit, s);
        push_simple(b, opcode::op_failwith, s);
        return b;
    }
    static void emit_fail(instr_seq& out, span s) {
        push_simple(out, opcode::op_unit, s);
        push_simple(out, opcode::op_failwith, s);
    }

    static bool lookup_type(const std::string& w, type_ctor& ctor, int& arity) {
        static const std::unordered_map<std::string, std::pair<type_ctor, int>> table = {
            {"int", {type_ctor::t_int, 0}},
            {"nat", {type_ctor::t_nat, 0}},
            {"mutez", {type_ctor::t_mutez, 0}},
            {"timestamp", {type_ctor::t_timestamp, 0}},
            {"bool", {type_ctor::t_bool, 0}},
            {"string", {type_ctor::t_string, 0}},
            {"unit", {type_ctor::t_unit, 0}},
            {"address", {type_ctor::t_address, 0}},
            {"operation", {type_ctor::t_operation, 0}},
            {"contract", {type_ctor::t_contract, 1}},
            {"pair", {type_ctor::t_pair, 2}},
            {"option", {type_ctor::t_option, 1}},
            {"or", {type_ctor::t_or, 2}},
            {"list", {type_ctor::t_list, 1}},
            {"set", {type_ctor::t_set, 1}},
            {"map", {type_ctor::t_map, 2}},
        };
        auto it = table.find(w);
        if (it == table.end()) return false;
        ctor = it->second.first;
        arity = it->second.second;
        return true;
    }

    static bool lookup_opcode(const std::string& w, opcode& op) {
        static const std::unordered_map<std::string, opcode> table = {
            {"PUSH", opcode::op_push},
            {"UNIT", opcode::op_unit},
            {"DROP", opcode::op_drop},
            {"DUP", opcode::op_dup},
            {"SWAP", opcode::op_swap},
            {"DIG", opcode::op_dig},
            {"DUG", opcode::op_dug},
            {"DIP", opcode::op_dip},
            {"PAIR", opcode::op_pair},
            {"UNPAIR", opcode::op_unpair},
            {"CAR", opcode::op_car},
            {"CDR", opcode::op_cdr},
            {"SOME", opcode::op_some},
            {"NONE", opcode::op_none},
            {"IF_NONE", opcode::op_if_none},
            {"LEFT", opcode::op_left},
            {"RIGHT", opcode::op_right},
            {"IF_LEFT", opcode::op_if_left},
            {"NIL", opcode::op_nil},
            {"CONS", opcode::op_cons},
            {"IF_CONS", opcode::op_if_cons},
            {"EMPTY_SET", opcode::op_empty_set},
            {"EMPTY_MAP", opcode::op_empty_map},
            {"MEM", opcode::op_mem},
            {"GET", opcode::op_get},
            {"UPDATE", opcode::op_update},
            {"SIZE", opcode::op_size},
            {"ITER", opcode::op_iter},
            {"MAP", opcode::op_map},
            {"ADD", opcode::op_add},
            {"SUB", opcode::op_sub},
            {"MUL", opcode::op_mul},
            {"EDIV", opcode::op_ediv},
            {"NEG", opcode::op_neg},
            {"ABS", opcode::op_abs},
            {"ISNAT", opcode::op_isnat},
            {"INT", opcode::op_int},
            {"LSL", opcode::op_lsl},
            {"LSR", opcode::op_lsr},
            {"AND", opcode::op_and},
            {"OR", opcode::op_or},
            {"XOR", opcode::op_xor},
            {"NOT", opcode::op_not},
            {"COMPARE", opcode::op_compare},
            {"EQ", opcode::op_eq},
            {"NEQ", opcode::op_neq},
            {"LT", opcode::op_lt},
            {"GT", opcode::op_gt},
            {"LE", opcode::op_le},
            {"GE", opcode::op_ge},
            {"IF", opcode::op_if},
            {"LOOP", opcode::op_loop},
            {"LOOP_LEFT", opcode::op_loop_left},
            {"FAILWITH", opcode::op_failwith},
            {"SENDER", opcode::op_sender},
            {"SOURCE", opcode::op_source},
            {"AMOUNT", opcode::op_amount},
            {"BALANCE", opcode::op_balance},
            {"NOW", opcode::op_now},
            {"SELF_ADDRESS", opcode::op_self_address},
            {"CONTRACT", opcode::op_contract},
            {"TRANSFER_TOKENS", opcode::op_transfer_tokens},
        };
        auto it = table.find(w);
        if (it == table.end()) return false;
        op = it->second;
        return true;
    }

    std::vector<token> toks_;
    size_t pos_ = 0;
};

} // namespace

script parse_script(const std::string& src, const std::string& source_name) {
    parser p(tokenize(src));
    return p.parse_toplevel(source_name);
}

script parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw script_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string name = path;
    size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return parse_script(ss.str(), name);
}

mtype_ptr parse_type_string(const std::string& src) {
    parser p(tokenize(src));
    mtype_ptr t = p.parse_type(true);
    if (!p.at(tok_kind::t_eof)) throw script_error("trailing input after type", p.peek().where);
    return t;
}

literal_ptr parse_literal_string(const std::string& src) {
    parser p(tokenize(src));
    literal_ptr l = p.parse_literal(true);
    if (!p.at(tok_kind::t_eof)) throw script_error("trailing input after literal", p.peek().where);
    return l;
}

} // namespace michelstat
