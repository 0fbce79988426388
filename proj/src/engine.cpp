#include "bottomup/engine.hpp"

#include <functional>

namespace bottomup {

std::optional<ArgKey> arg_key(const Term& arg) {
    switch (arg.kind()) {
    case Term::Kind::Variable:
        return std::nullopt;
    case Term::Kind::Atom:
        return ArgKey{1, arg.name(), 0, 0};
    case Term::Kind::Integer:
        return ArgKey{2, {}, arg.int_value(), 0};
    case Term::Kind::Compound:
        return ArgKey{3, arg.name(), 0, arg.arity()};
    }
    return std::nullopt;
}

void FactStore::insert(Term fact) {
    PredKey key = pred_key(fact);
    auto [it, inserted] = buckets_.try_emplace(key);
    if (inserted) pred_order_.push_back(key);
    Bucket& b = it->second;
    std::size_t pos = b.facts.size();
    if (first_arg_index_ && fact.is_compound()) {
        if (auto k = arg_key(fact.arg(0))) {
            b.by_first_arg[*k].push_back(pos);
        } else {
            b.var_first_arg.push_back(pos);
        }
    }
    b.facts.push_back(fact);
    all_.push_back(std::move(fact));
}

const FactStore::Bucket* FactStore::find(const PredKey& key) const {
    auto it = buckets_.find(key);
    return it == buckets_.end() ? nullptr : &it->second;
}

std::span<const Term> FactStore::bucket(const PredKey& key) const {
    const Bucket* b = find(key);
    if (!b) return {};
    return b->facts;
}

bool subsumed_by_store(const Term& fact, const FactStore& store) {
    bool found = false;
    store.for_each_candidate(fact, Substitution{}, [&](const Term& stored) {
        found = is_instance_of(fact, stored);
        return !found;
    });
    return found;
}

std::vector<Substitution> solve_residual(std::span<const Term> residual, const FactStore& store,
                                         const Substitution& s, UnifyOptions opts, EngineStats* stats) {
    std::vector<Substitution> solutions;
    std::function<void(std::size_t, const Substitution&)> solve = [&](std::size_t i, const Substitution& cur) {
        if (i == residual.size()) {
            solutions.push_back(cur);
            return;
        }
        const Term& literal = residual[i];
        store.for_each_candidate(literal, cur, [&](const Term& fact) {
            if (stats) ++stats->residual_resolution_steps;
            if (auto next = unify(literal, rename_fresh(fact), cur, opts)) solve(i + 1, *next);
            return true;
        });
    };
    solve(0, s);
    return solutions;
}

Engine::Engine(TriggerProgram program, EngineOptions options)
    : program_(std::move(program)), options_(options), store_(options.first_arg_index) {}

std::vector<Term> Engine::fire(const Term& trigger_fact) {
    std::vector<Term> inferred;
    const UnifyOptions uopts{options_.occurs_check};
    Term fact = rename_fresh(trigger_fact);
    for (std::size_t pos : program_.rules_for(pred_key(fact))) {
        const TriggerRule& rule = program_.rules()[pos];
        ++stats_.rule_firings;
        auto s = unify(rule.trigger, fact, {}, uopts);
        if (!s) continue;
        for (const Substitution& sol : solve_residual(rule.residual, store_, *s, uopts, &stats_)) {
            inferred.push_back(rename_fresh(apply(sol, rule.head)));
        }
    }
    return inferred;
}

std::vector<Term> Engine::insert_batch(std::span<const Term> facts) {
    std::vector<Term> added;
    for (const Term& f : facts) {
        if (subsumed_by_store(f, store_)) {
            ++stats_.facts_subsumed;
            continue;
        }
        store_.insert(f);
        schedule_.push_back(f);
        ++stats_.facts_stored;
        added.push_back(f);
    }
    return added;
}

std::optional<StepEvent> Engine::step() {
    Term consumed = seed_term();
    if (!seeded_) {
        seeded_ = true;
    } else if (!schedule_.empty()) {
        consumed = schedule_.front();
        schedule_.pop_front();
    } else {
        return std::nullopt;
    }
    ++stats_.steps;
    StepEvent event{consumed, fire(consumed), {}};
    event.added = insert_batch(event.inferred);
    return event;
}

bool limits_reached(const EngineStats& stats, const RunLimits& limits) {
    if (limits.max_steps && stats.steps >= *limits.max_steps) return true;
    if (limits.max_facts && stats.facts_stored >= *limits.max_facts) return true;
    return false;
}

RunResult Engine::run(RunLimits limits) {
    for (;;) {
        if (!step()) break;
        if (at_fixpoint()) break;
        if (limits_reached(stats_, limits)) break;
    }
    return {at_fixpoint(), stats_};
}

std::string format_step(const StepEvent& event, VarNaming& naming) {
    std::string out = format_term(event.consumed, naming);
    out += " adds [";
    for (std::size_t i = 0; i < event.added.size(); ++i) {
        if (i > 0) out += ',';
        out += format_term(event.added[i], naming);
    }
    out += ']';
    return out;
}

std::string format_stats(const EngineStats& stats) {
    std::string out;
    auto line = [&](const char* key, std::uint64_t v) {
        out += key;
        out += ": ";
        out += std::to_string(v);
        out += '\n';
    };
    line("facts_stored", stats.facts_stored);
    line("facts_subsumed", stats.facts_subsumed);
    line("rule_firings", stats.rule_firings);
    line("residual_resolution_steps", stats.residual_resolution_steps);
    line("steps", stats.steps);
    return out;
}

}  // namespace bottomup
