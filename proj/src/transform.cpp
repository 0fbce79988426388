#include "bottomup/transform.hpp"

#include <deque>

namespace bottomup {

Term seed_term() {
    static const Term seed = Term::atom(kSeedSymbol);
    return seed;
}

bool is_seed(const Term& t) {
    return t.is_atom() && t.name() == kSeedSymbol;
}

TriggerProgram::TriggerProgram(std::vector<TriggerRule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        index_[pred_key(rules_[i].trigger)].push_back(i);
    }
}

std::span<const std::size_t> TriggerProgram::rules_for(const PredKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return {};
    return it->second;
}

std::vector<BodyDeletion> body_deletions(std::span<const Term> body) {
    std::vector<BodyDeletion> out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        BodyDeletion d{body[i], {}};
        d.residual.reserve(body.size() - 1);
        for (std::size_t j = 0; j < body.size(); ++j) {
            if (j != i) d.residual.push_back(body[j]);
        }
        out.push_back(std::move(d));
    }
    return out;
}

TriggerProgram compile_triggers(const Program& p) {
    std::vector<TriggerRule> rules;
    for (const Clause& c : p.clauses) {
        if (c.is_fact()) {
            rules.push_back({seed_term(), {}, c.head});
            continue;
        }
        for (BodyDeletion& d : body_deletions(c.body)) {
            rules.push_back({std::move(d.selected), std::move(d.residual), c.head});
        }
    }
    return TriggerProgram(std::move(rules));
}

std::string format_trigger_rule(const TriggerRule& rule) {
    VarNaming naming;
    std::string out = "implies(";
    out += format_term(rule.trigger, naming);
    out += ',';
    out += format_term(rule.head, naming);
    out += ')';
    for (std::size_t i = 0; i < rule.residual.size(); ++i) {
        out += i == 0 ? " :- " : ", ";
        out += format_term(rule.residual[i], naming);
    }
    out += '.';
    return out;
}

// ---------------------------------------------------------------------------
// Folding

namespace {

void collect_symbols(const Term& t, std::set<std::string>& out) {
    if (t.is_atom() || t.is_compound()) out.insert(t.name());
    for (const Term& a : t.args()) collect_symbols(a, out);
}

bool contains_var(const std::vector<Term>& vars, const Term& v) {
    for (const Term& x : vars) {
        if (x.var_id() == v.var_id()) return true;
    }
    return false;
}

}  // namespace

std::set<std::string> program_symbols(const Program& p) {
    std::set<std::string> out;
    for (const Clause& c : p.clauses) {
        collect_symbols(c.head, out);
        for (const Term& b : c.body) collect_symbols(b, out);
    }
    return out;
}

void GensymState::reserve(const Program& p) {
    for (const std::string& s : program_symbols(p)) taken_.insert(s);
}

std::string GensymState::next() {
    for (;;) {
        std::string name = prefix_ + std::to_string(counter_++);
        if (taken_.insert(name).second) return name;
    }
}

std::optional<FoldedClause> fold_clause(const Clause& c, GensymState& gensym) {
    if (c.body.size() <= 2) return std::nullopt;

    std::vector<Term> outer;
    collect_variables(c.head, outer);
    collect_variables(c.body[0], outer);
    std::vector<Term> inner;
    for (std::size_t i = 1; i < c.body.size(); ++i) collect_variables(c.body[i], inner);

    // `outer` is already in first-occurrence order over head then L1.
    std::vector<Term> shared;
    for (const Term& v : outer) {
        if (contains_var(inner, v)) shared.push_back(v);
    }

    std::string pred = gensym.next();
    Term link = shared.empty() ? Term::atom(pred) : Term::compound(pred, shared);

    Clause tail{link, {c.body.begin() + 1, c.body.end()}};
    return FoldedClause{Clause{c.head, {c.body[0], link}}, rename_clause(tail)};
}

Program fold_program(const Program& p, GensymState& gensym) {
    gensym.reserve(p);
    Program out;
    std::deque<Clause> pending(p.clauses.begin(), p.clauses.end());
    while (!pending.empty()) {
        Clause c = std::move(pending.front());
        pending.pop_front();
        if (auto folded = fold_clause(c, gensym)) {
            out.clauses.push_back(std::move(folded->replacement));
            pending.push_front(std::move(folded->remainder));
        } else {
            out.clauses.push_back(std::move(c));
        }
    }
    return out;
}

Program fold_program(const Program& p) {
    GensymState gensym;
    return fold_program(p, gensym);
}

}  // namespace bottomup
