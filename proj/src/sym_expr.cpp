#include "michelstat/sym_expr.hpp"

#include <algorithm>

namespace michelstat {

sym_ptr sym_var(cell_var v) {
    auto e = std::make_shared<sym_expr>();
    e->node = sym_node::s_var;
    e->var = std::move(v);
    return e;
}

sym_ptr sym_num(big_int n) {
    auto e = std::make_shared<sym_expr>();
    e->node = sym_node::s_num;
    e->num = std::move(n);
    return e;
}

sym_ptr sym_str(std::string s) {
    auto e = std::make_shared<sym_expr>();
    e->node = sym_node::s_str;
    e->str = std::move(s);
    return e;
}

sym_ptr sym_app(sym_node node, std::vector<sym_ptr> args) {
    auto e = std::make_shared<sym_expr>();
    e->node = node;
    e->args = std::move(args);
    return e;
}

int sym_depth(const sym_expr& e) {
    int d = 0;
    for (const auto& a : e.args) d = std::max(d, sym_depth(*a));
    return d + 1;
}

bool sym_mentions(const sym_expr& e, const cell_var& v) {
    if (e.node == sym_node::s_var) return e.var == v;
    for (const auto& a : e.args)
        if (sym_mentions(*a, v)) return true;
    return false;
}

void sym_collect_vars(const sym_expr& e, std::set<cell_var>& out) {
    if (e.node == sym_node::s_var) {
        out.insert(e.var);
        return;
    }
    for (const auto& a : e.args) sym_collect_vars(*a, out);
}

bool sym_equal(const sym_expr& a, const sym_expr& b) {
    if (a.node != b.node || a.args.size() != b.args.size()) return false;
    switch (a.node) {
    case sym_node::s_var: return a.var == b.var;
    case sym_node::s_num: return a.num == b.num;
    case sym_node::s_str: return a.str == b.str;
    default: break;
    }
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!sym_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

sym_ptr sym_subst_var(const sym_ptr& e, const cell_var& v, const sym_ptr& by) {
    if (e->node == sym_node::s_var) return e->var == v ? by : e;
    if (e->args.empty()) return e;
    bool changed = false;
    std::vector<sym_ptr> args;
    args.reserve(e->args.size());
    for (const auto& a : e->args) {
        sym_ptr s = sym_subst_var(a, v, by);
        changed |= (s != a);
        args.push_back(std::move(s));
    }
    if (!changed) return e;
    auto out = std::make_shared<sym_expr>(*e);
    out->args = std::move(args);
    return out;
}

sym_ptr sym_rename_var(const sym_ptr& e, const cell_var& from, const cell_var& to) {
    return sym_subst_var(e, from, sym_var(to));
}

std::string sym_expr::to_string() const {
    auto opname = [](sym_node n) -> const char* {
        switch (n) {
        case sym_node::s_add: return "add";
        case sym_node::s_sub: return "sub";
        case sym_node::s_mul: return "mul";
        case sym_node::s_neg: return "neg";
        case sym_node::s_compare: return "compare";
        case sym_node::s_eq: return "eq";
        case sym_node::s_neq: return "neq";
        case sym_node::s_lt: return "lt";
        case sym_node::s_gt: return "gt";
        case sym_node::s_le: return "le";
        case sym_node::s_ge: return "ge";
        case sym_node::s_pair: return "pair";
        case sym_node::s_some: return "some";
        case sym_node::s_none: return "none";
        case sym_node::s_left: return "left";
        case sym_node::s_right: return "right";
        case sym_node::s_unit: return "unit";
        default: return "?";
        }
    };
    switch (node) {
    case sym_node::s_var: return var.to_string();
    case sym_node::s_num: return num.str();
    case sym_node::s_str: return "\"" + str + "\"";
    default: {
        std::string out = opname(node);
        out += "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            out += args[i]->to_string();
        }
        out += ")";
        return out;
    }
    }
}

void sym_env::bind(const cell_var& dst, sym_ptr e) {
    if (!e) {
        m_.erase(dst);
        return;
    }
    // Bindings stay shallow: mentioned cells are snapshotted on reassignment
    // by the caller, so a stored expression keeps meaning "dst equals this
    // over the current cells" without inlining operand definitions. Inlining
    // would embed loop-local ghost roots and no two iterations would ever
    // agree on a binding.
    if (sym_mentions(*e, dst))
        throw std::logic_error("sym bind: self-reference must be snapshotted by the caller");
    if (sym_depth(*e) > sym_depth_cap) {
        m_.erase(dst);
        return;
    }
    m_.insert_or_assign(dst, std::move(e));
}

void sym_env::rename(const cell_var& from, const cell_var& to) {
    if (from == to) return;
    auto it = m_.find(from);
    sym_ptr own;
    if (it != m_.end()) {
        own = it->second;
        m_.erase(it);
    }
    m_.erase(to);
    if (own) m_.insert_or_assign(to, sym_rename_var(own, from, to));
    for (auto& [v, e] : m_) e = sym_rename_var(e, from, to);
}

void sym_env::rename_root(uint64_t from, uint64_t to) {
    if (from == to) return;
    std::map<cell_var, sym_ptr> out;
    auto fix = [&](const cell_var& v) {
        return v.root == from ? cell_var{to, v.p} : v;
    };
    for (const auto& [v, e] : m_) {
        sym_ptr ne = e;
        std::set<cell_var> vars;
        sym_collect_vars(*e, vars);
        for (const cell_var& w : vars)
            if (w.root == from) ne = sym_rename_var(ne, w, fix(w));
        out.insert_or_assign(fix(v), std::move(ne));
    }
    m_ = std::move(out);
}

void sym_env::forget_root(uint64_t root) {
    for (auto it = m_.begin(); it != m_.end();) {
        bool kill = it->first.root == root;
        if (!kill) {
            std::set<cell_var> vars;
            sym_collect_vars(*it->second, vars);
            for (const cell_var& w : vars)
                if (w.root == root) { kill = true; break; }
        }
        it = kill ? m_.erase(it) : std::next(it);
    }
}

bool sym_env::mentions(const cell_var& v) const {
    for (const auto& [w, e] : m_)
        if (sym_mentions(*e, v)) return true;
    return false;
}

void sym_env::subst_everywhere(const cell_var& v, const sym_ptr& by) {
    for (auto it = m_.begin(); it != m_.end();) {
        if (it->first != v && sym_mentions(*it->second, v)) {
            sym_ptr ne = sym_subst_var(it->second, v, by);
            if (sym_depth(*ne) > sym_depth_cap) {
                it = m_.erase(it);
                continue;
            }
            it->second = std::move(ne);
        }
        ++it;
    }
}

void sym_env::drop_mentions(const cell_var& v) {
    for (auto it = m_.begin(); it != m_.end();) {
        if (it->first == v || sym_mentions(*it->second, v)) it = m_.erase(it);
        else ++it;
    }
}

sym_env sym_env::join(const sym_env& o) const {
    sym_env out;
    for (const auto& [v, e] : m_) {
        auto it = o.m_.find(v);
        if (it != o.m_.end() && sym_equal(*e, *it->second)) out.m_.insert_or_assign(v, e);
    }
    return out;
}

bool sym_env::leq(const sym_env& o) const {
    for (const auto& [v, e] : o.m_) {
        auto it = m_.find(v);
        if (it == m_.end() || !sym_equal(*it->second, *e)) return false;
    }
    return true;
}

bool sym_env::operator==(const sym_env& o) const {
    if (m_.size() != o.m_.size()) return false;
    auto a = m_.begin();
    auto b = o.m_.begin();
    for (; a != m_.end(); ++a, ++b)
        if (a->first != b->first || !sym_equal(*a->second, *b->second)) return false;
    return true;
}

void sym_env::collect_mentioned(std::set<cell_var>& out) const {
    for (const auto& [v, e] : m_) sym_collect_vars(*e, out);
}

namespace {

std::optional<cmp_rel> rel_of_node(sym_node n) {
    switch (n) {
    case sym_node::s_eq: return cmp_rel::eq;
    case sym_node::s_neq: return cmp_rel::ne;
    case sym_node::s_lt: return cmp_rel::lt;
    case sym_node::s_gt: return cmp_rel::gt;
    case sym_node::s_le: return cmp_rel::le;
    case sym_node::s_ge: return cmp_rel::ge;
    default: return std::nullopt;
    }
}

} // namespace

std::vector<sym_rel> sym_env::resolve_guard(const cell_var& v, bool branch) const {
    sym_ptr e = get(v);
    if (!e) return {};
    auto rel = rel_of_node(e->node);
    if (!rel || e->args.size() != 1) return {};
    cmp_rel r = branch ? *rel : negate_rel(*rel);
    const sym_expr& inner = *e->args[0];
    // eq(compare(x, y)) family: relation between compare's operands
    if (inner.node == sym_node::s_compare && inner.args.size() == 2) {
        const sym_expr& a = *inner.args[0];
        const sym_expr& b = *inner.args[1];
        sym_rel out;
        out.rel = r;
        if (a.node == sym_node::s_var && b.node == sym_node::s_var) {
            out.x = a.var;
            out.y = b.var;
            return {out};
        }
        if (a.node == sym_node::s_var && b.node == sym_node::s_num) {
            out.x = a.var;
            out.k = b.num;
            return {out};
        }
        if (a.node == sym_node::s_num && b.node == sym_node::s_var) {
            out.rel = swap_rel(r);
            out.x = b.var;
            out.k = a.num;
            return {out};
        }
        return {};
    }
    // eq(x) family directly over an int cell: relation against 0
    if (inner.node == sym_node::s_var) {
        sym_rel out;
        out.rel = r;
        out.x = inner.var;
        out.k = 0;
        return {out};
    }
    return {};
}

} // namespace michelstat
