#include "bottomup/term.hpp"

#include <utility>
#include <variant>

namespace bottomup {

struct Term::Node {
    struct Var {
        VarId id;
        std::string name;
    };
    struct Atom {
        std::string name;
    };
    struct Int {
        std::int64_t value;
    };
    struct Compound {
        std::string functor;
        std::vector<Term> args;
    };
    std::variant<Var, Atom, Int, Compound> data;
};

Term Term::variable(VarId id, std::string name) {
    return Term(std::make_shared<const Node>(Node{Node::Var{id, std::move(name)}}));
}

Term Term::atom(std::string_view name) {
    return Term(std::make_shared<const Node>(Node{Node::Atom{std::string(name)}}));
}

Term Term::integer(std::int64_t value) {
    return Term(std::make_shared<const Node>(Node{Node::Int{value}}));
}

Term Term::compound(std::string_view functor, std::vector<Term> args) {
    if (args.empty()) {
        throw std::invalid_argument("compound term '" + std::string(functor) + "' needs at least one argument");
    }
    return Term(std::make_shared<const Node>(Node{Node::Compound{std::string(functor), std::move(args)}}));
}

Term Term::nil() {
    static const Term empty = Term::atom("[]");
    return empty;
}

Term Term::list(std::vector<Term> items, std::optional<Term> tail) {
    Term result = tail ? *tail : nil();
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
        result = compound(".", {*it, result});
    }
    return result;
}

Term::Kind Term::kind() const {
    return static_cast<Kind>(node_->data.index());
}

bool Term::is_ground() const {
    switch (kind()) {
    case Kind::Variable:
        return false;
    case Kind::Compound:
        for (const Term& a : args()) {
            if (!a.is_ground()) return false;
        }
        return true;
    default:
        return true;
    }
}

VarId Term::var_id() const {
    return std::get<Node::Var>(node_->data).id;
}

const std::string& Term::var_name() const {
    return std::get<Node::Var>(node_->data).name;
}

const std::string& Term::name() const {
    if (const auto* a = std::get_if<Node::Atom>(&node_->data)) return a->name;
    return std::get<Node::Compound>(node_->data).functor;
}

std::int64_t Term::int_value() const {
    return std::get<Node::Int>(node_->data).value;
}

std::span<const Term> Term::args() const {
    if (const auto* c = std::get_if<Node::Compound>(&node_->data)) return c->args;
    return {};
}

std::size_t Term::arity() const {
    return args().size();
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Term::Kind::Variable:
        return a.var_id() == b.var_id();
    case Term::Kind::Atom:
        return a.name() == b.name();
    case Term::Kind::Integer:
        return a.int_value() == b.int_value();
    case Term::Kind::Compound: {
        if (a.name() != b.name() || a.arity() != b.arity()) return false;
        auto xs = a.args();
        auto ys = b.args();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(xs[i] == ys[i])) return false;
        }
        return true;
    }
    }
    return false;
}

PredKey pred_key(const Term& literal) {
    if (literal.is_atom()) return {literal.name(), 0};
    if (literal.is_compound()) return {literal.name(), literal.arity()};
    throw std::invalid_argument("not a callable term: " + format_term(literal));
}

std::string to_string(const PredKey& key) {
    return format_atom(key.name) + "/" + std::to_string(key.arity);
}

VarCounter& default_var_counter() {
    static VarCounter counter;
    return counter;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(VarId id) const {
    auto it = bindings_.find(id);
    return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(VarId id, Term value) {
    if (value.is_var() && value.var_id() == id) {
        throw std::invalid_argument("variable bound to itself");
    }
    bindings_.insert_or_assign(id, std::move(value));
}

Term Substitution::walk(Term t) const {
    while (t.is_var()) {
        const Term* next = lookup(t.var_id());
        if (!next) break;
        t = *next;
    }
    return t;
}

std::optional<Term> Substitution::resolve(VarId id) const {
    const Term* bound = lookup(id);
    if (!bound) return std::nullopt;
    return apply(*this, *bound);
}

bool occurs_in(VarId id, const Term& t) {
    if (t.is_var()) return t.var_id() == id;
    for (const Term& a : t.args()) {
        if (occurs_in(id, a)) return true;
    }
    return false;
}

namespace {

bool occurs_walked(VarId id, const Term& t, const Substitution& s) {
    Term w = s.walk(t);
    if (w.is_var()) return w.var_id() == id;
    for (const Term& a : w.args()) {
        if (occurs_walked(id, a, s)) return true;
    }
    return false;
}

}  // namespace

std::optional<Substitution> unify(const Term& t1, const Term& t2, const Substitution& s, UnifyOptions opts) {
    Substitution out = s;
    std::vector<std::pair<Term, Term>> work{{t1, t2}};
    while (!work.empty()) {
        auto [a, b] = std::move(work.back());
        work.pop_back();
        a = out.walk(a);
        b = out.walk(b);
        if (a.same_node(b)) continue;
        if (a.is_var() && b.is_var() && a.var_id() == b.var_id()) continue;
        if (a.is_var()) {
            if (opts.occurs_check && occurs_walked(a.var_id(), b, out)) return std::nullopt;
            out.bind(a.var_id(), b);
            continue;
        }
        if (b.is_var()) {
            if (opts.occurs_check && occurs_walked(b.var_id(), a, out)) return std::nullopt;
            out.bind(b.var_id(), a);
            continue;
        }
        if (a.kind() != b.kind()) return std::nullopt;
        switch (a.kind()) {
        case Term::Kind::Atom:
            if (a.name() != b.name()) return std::nullopt;
            break;
        case Term::Kind::Integer:
            if (a.int_value() != b.int_value()) return std::nullopt;
            break;
        case Term::Kind::Compound: {
            if (a.name() != b.name() || a.arity() != b.arity()) return std::nullopt;
            auto xs = a.args();
            auto ys = b.args();
            // Reverse push keeps left-to-right processing order.
            for (std::size_t i = xs.size(); i-- > 0;) work.emplace_back(xs[i], ys[i]);
            break;
        }
        case Term::Kind::Variable:
            break;
        }
    }
    return out;
}

namespace {

Term apply_rec(const Substitution& s, const Term& t, std::vector<VarId>& expanding) {
    switch (t.kind()) {
    case Term::Kind::Variable: {
        const Term* bound = s.lookup(t.var_id());
        if (!bound) return t;
        for (VarId v : expanding) {
            if (v == t.var_id()) throw CyclicTermError("cyclic binding for variable _" + std::to_string(v));
        }
        expanding.push_back(t.var_id());
        Term r = apply_rec(s, *bound, expanding);
        expanding.pop_back();
        return r;
    }
    case Term::Kind::Compound: {
        if (t.is_ground()) return t;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const Term& a : t.args()) args.push_back(apply_rec(s, a, expanding));
        return Term::compound(t.name(), std::move(args));
    }
    default:
        return t;
    }
}

}  // namespace

Term apply(const Substitution& s, const Term& t) {
    if (s.empty()) return t;
    std::vector<VarId> expanding;
    return apply_rec(s, t, expanding);
}

void collect_variables(const Term& t, std::vector<Term>& out) {
    if (t.is_var()) {
        for (const Term& v : out) {
            if (v.var_id() == t.var_id()) return;
        }
        out.push_back(t);
        return;
    }
    for (const Term& a : t.args()) collect_variables(a, out);
}

std::vector<Term> term_variables(const Term& t) {
    std::vector<Term> out;
    collect_variables(t, out);
    return out;
}

Term Renamer::operator()(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Variable: {
        auto it = map_.find(t.var_id());
        if (it != map_.end()) return it->second;
        Term fresh = Term::variable(counter_->fresh(), t.var_name());
        map_.emplace(t.var_id(), fresh);
        return fresh;
    }
    case Term::Kind::Compound: {
        if (t.is_ground()) return t;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const Term& a : t.args()) args.push_back((*this)(a));
        return Term::compound(t.name(), std::move(args));
    }
    default:
        return t;
    }
}

Term rename_fresh(const Term& t, VarCounter& counter) {
    Renamer r(counter);
    return r(t);
}

namespace {

bool match(const Term& general, const Term& specific, std::unordered_map<VarId, Term>& bound) {
    if (general.is_var()) {
        auto [it, inserted] = bound.try_emplace(general.var_id(), specific);
        return inserted || it->second == specific;
    }
    if (general.kind() != specific.kind()) return false;
    switch (general.kind()) {
    case Term::Kind::Atom:
        return general.name() == specific.name();
    case Term::Kind::Integer:
        return general.int_value() == specific.int_value();
    case Term::Kind::Compound: {
        if (general.name() != specific.name() || general.arity() != specific.arity()) return false;
        auto gs = general.args();
        auto ss = specific.args();
        for (std::size_t i = 0; i < gs.size(); ++i) {
            if (!match(gs[i], ss[i], bound)) return false;
        }
        return true;
    }
    case Term::Kind::Variable:
        break;
    }
    return false;
}

}  // namespace

bool is_instance_of(const Term& specific, const Term& general) {
    std::unordered_map<VarId, Term> bound;
    return match(general, specific, bound);
}

bool are_variants(const Term& a, const Term& b) {
    return is_instance_of(a, b) && is_instance_of(b, a);
}

// ---------------------------------------------------------------------------
// Printing

std::string VarNaming::name_of(VarId id) {
    auto it = names_.find(id);
    if (it != names_.end()) return it->second;
    std::size_t i = next_++;
    std::string name(1, static_cast<char>('A' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    names_.emplace(id, name);
    return name;
}

bool atom_needs_quotes(std::string_view name) {
    if (name == "[]") return false;
    if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) return true;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return true;
    }
    return false;
}

std::string format_atom(std::string_view name) {
    if (!atom_needs_quotes(name)) return std::string(name);
    std::string out = "'";
    for (char c : name) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

namespace {

void format_into(const Term& t, VarNaming& naming, std::string& out) {
    switch (t.kind()) {
    case Term::Kind::Variable:
        out += naming.name_of(t.var_id());
        return;
    case Term::Kind::Atom:
        out += format_atom(t.name());
        return;
    case Term::Kind::Integer:
        out += std::to_string(t.int_value());
        return;
    case Term::Kind::Compound:
        break;
    }
    if (t.is_list_cell()) {
        out += '[';
        Term cur = t;
        bool first = true;
        while (cur.is_list_cell()) {
            if (!first) out += ',';
            first = false;
            format_into(cur.arg(0), naming, out);
            cur = cur.arg(1);
        }
        if (!cur.is_nil()) {
            out += '|';
            format_into(cur, naming, out);
        }
        out += ']';
        return;
    }
    out += format_atom(t.name());
    out += '(';
    bool first = true;
    for (const Term& a : t.args()) {
        if (!first) out += ',';
        first = false;
        format_into(a, naming, out);
    }
    out += ')';
}

}  // namespace

std::string format_term(const Term& t, VarNaming& naming) {
    std::string out;
    format_into(t, naming, out);
    return out;
}

std::string format_term(const Term& t) {
    VarNaming naming;
    return format_term(t, naming);
}

}  // namespace bottomup
