#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bottomup/term.hpp"
#include "bottomup/transform.hpp"

namespace bottomup {

struct EngineOptions {
    /// Narrow fact retrieval by the principal symbol of the first argument,
    /// in addition to the mandatory predicate-key dispatch.
    bool first_arg_index = false;
    bool occurs_check = false;
};

struct EngineStats {
    std::uint64_t facts_stored = 0;
    std::uint64_t facts_subsumed = 0;
    /// Trigger unifications attempted.
    std::uint64_t rule_firings = 0;
    /// Candidate-fact unifications attempted while solving residuals.
    std::uint64_t residual_resolution_steps = 0;
    /// Schedule entries consumed, the seed included.
    std::uint64_t steps = 0;
};

/// Principal symbol of a non-variable argument: kind, name or value, arity.
struct ArgKey {
    int kind = 0;
    std::string name;
    std::int64_t value = 0;
    std::size_t arity = 0;

    friend auto operator<=>(const ArgKey&, const ArgKey&) = default;
};

std::optional<ArgKey> arg_key(const Term& arg);

/// Derived facts, bucketed by predicate key, each bucket in insertion order.
/// The store does not check subsumption itself; see subsumed_by_store().
class FactStore {
public:
    explicit FactStore(bool first_arg_index = false) : first_arg_index_(first_arg_index) {}

    void insert(Term fact);

    std::size_t size() const { return all_.size(); }
    bool empty() const { return all_.empty(); }
    /// All facts in global insertion order.
    const std::vector<Term>& facts() const { return all_; }
    /// Predicate keys in order of their first insertion.
    const std::vector<PredKey>& predicates() const { return pred_order_; }
    std::span<const Term> bucket(const PredKey& key) const;
    bool indexed() const { return first_arg_index_; }

    /// Calls `visit(fact)` for each stored fact that could unify with
    /// `pattern` under `s`, in insertion order, until `visit` returns false.
    template <class Visit>
    void for_each_candidate(const Term& pattern, const Substitution& s, Visit&& visit) const;

private:
    struct Bucket {
        std::vector<Term> facts;
        std::map<ArgKey, std::vector<std::size_t>> by_first_arg;
        std::vector<std::size_t> var_first_arg;
    };

    const Bucket* find(const PredKey& key) const;

    bool first_arg_index_;
    std::map<PredKey, Bucket> buckets_;
    std::vector<PredKey> pred_order_;
    std::vector<Term> all_;
};

/// True iff some stored fact of the same predicate is at least as general as
/// `fact`. `fact` must not share variables with the store.
bool subsumed_by_store(const Term& fact, const FactStore& store);

/// All solutions of the conjunction `residual` against `store`, extending `s`,
/// in depth-first left-to-right order. Each candidate fact is renamed before
/// unification.
std::vector<Substitution> solve_residual(std::span<const Term> residual, const FactStore& store,
                                         const Substitution& s = {}, UnifyOptions opts = {},
                                         EngineStats* stats = nullptr);

/// One consumed schedule entry and what it produced.
struct StepEvent {
    Term consumed;
    /// Every head instance found, before the subsumption check.
    std::vector<Term> inferred;
    /// The subsequence of `inferred` that was stored and scheduled.
    std::vector<Term> added;
};

struct RunLimits {
    std::optional<std::uint64_t> max_steps;
    std::optional<std::uint64_t> max_facts;
};

bool limits_reached(const EngineStats& stats, const RunLimits& limits);

struct RunResult {
    bool completed = false;
    EngineStats stats;
};

/// Semi-naive evaluator over a compiled trigger program.
///
/// The schedule starts with the virtual seed fact. Each step consumes one
/// entry, collects the heads of all trigger rules it satisfies against the
/// current store, then stores and schedules those not subsumed by a stored
/// fact. Facts are never removed, so a more general fact arriving later sits
/// alongside the instances stored before it.
///
/// An Engine is not thread-safe.
class Engine {
public:
    explicit Engine(TriggerProgram program, EngineOptions options = {});

    /// Heads inferred from `trigger_fact` against the current store. Does not
    /// modify the store.
    std::vector<Term> fire(const Term& trigger_fact);

    /// Stores and schedules each fact not subsumed by the store as it stands
    /// when the fact is reached. Returns the facts added, in order.
    std::vector<Term> insert_batch(std::span<const Term> facts);

    /// Consumes one schedule entry; nullopt at the fixpoint.
    std::optional<StepEvent> step();

    /// Steps until the fixpoint or until a limit trips (checked after each step).
    RunResult run(RunLimits limits = {});

    bool seeded() const { return seeded_; }
    bool at_fixpoint() const { return seeded_ && schedule_.empty(); }
    std::size_t pending() const { return schedule_.size(); }

    const TriggerProgram& program() const { return program_; }
    const FactStore& store() const { return store_; }
    const EngineStats& stats() const { return stats_; }
    const EngineOptions& options() const { return options_; }

private:
    TriggerProgram program_;
    EngineOptions options_;
    FactStore store_;
    std::deque<Term> schedule_;
    bool seeded_ = false;
    EngineStats stats_;
};

/// `<consumed> adds [<fact>,...]`
std::string format_step(const StepEvent& event, VarNaming& naming);

/// `key: value` lines, one per counter.
std::string format_stats(const EngineStats& stats);

// ---------------------------------------------------------------------------

template <class Visit>
void FactStore::for_each_candidate(const Term& pattern, const Substitution& s, Visit&& visit) const {
    const Bucket* b = find(pred_key(pattern));
    if (!b) return;
    std::optional<ArgKey> key;
    if (first_arg_index_ && pattern.is_compound()) key = arg_key(s.walk(pattern.arg(0)));
    if (!key) {
        for (const Term& f : b->facts) {
            if (!visit(f)) return;
        }
        return;
    }
    static const std::vector<std::size_t> none;
    auto it = b->by_first_arg.find(*key);
    const std::vector<std::size_t>& keyed = it == b->by_first_arg.end() ? none : it->second;
    const std::vector<std::size_t>& open = b->var_first_arg;
    // Merge the two ascending position lists to keep insertion order.
    std::size_t i = 0, j = 0;
    while (i < keyed.size() || j < open.size()) {
        std::size_t pos;
        if (j == open.size() || (i < keyed.size() && keyed[i] < open[j])) {
            pos = keyed[i++];
        } else {
            pos = open[j++];
        }
        if (!visit(b->facts[pos])) return;
    }
}

}  // namespace bottomup
