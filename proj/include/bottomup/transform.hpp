#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bottomup/parser.hpp"
#include "bottomup/term.hpp"

namespace bottomup {

/// The bootstrap token whose consumption fires every fact-producing rule.
inline const std::string kSeedSymbol = "true";
Term seed_term();
bool is_seed(const Term& t);

/// Compiled form of one body position of an object clause: when a fact
/// matching `trigger` arrives, `head` holds for every solution of `residual`
/// against the stored facts. Object facts compile to a rule triggered by the
/// seed with an empty residual.
struct TriggerRule {
    Term trigger;
    std::vector<Term> residual;
    Term head;
};

/// Trigger rules in clause order (and body-position order within a clause),
/// indexed by the predicate key of their trigger.
class TriggerProgram {
public:
    TriggerProgram() = default;
    explicit TriggerProgram(std::vector<TriggerRule> rules);

    const std::vector<TriggerRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }
    /// Positions of rules whose trigger has predicate key `key`, ascending.
    std::span<const std::size_t> rules_for(const PredKey& key) const;

private:
    std::vector<TriggerRule> rules_;
    std::map<PredKey, std::vector<std::size_t>> index_;
};

/// One literal selected from a body together with the rest, in order.
struct BodyDeletion {
    Term selected;
    std::vector<Term> residual;
};

std::vector<BodyDeletion> body_deletions(std::span<const Term> body);

TriggerProgram compile_triggers(const Program& p);

/// `implies(Trigger,Head).` or `implies(Trigger,Head) :- R1, ..., Rk.`
std::string format_trigger_rule(const TriggerRule& rule);

/// Source of fresh predicate names for folding. Names already used by the
/// program being folded are skipped.
class GensymState {
public:
    explicit GensymState(std::string prefix = "_$Tmp") : prefix_(std::move(prefix)) {}

    void reserve(const Program& p);
    void reserve(const std::string& symbol) { taken_.insert(symbol); }
    std::string next();
    std::size_t counter() const { return counter_; }
    const std::string& prefix() const { return prefix_; }

private:
    std::string prefix_;
    std::size_t counter_ = 0;
    std::set<std::string> taken_;
};

struct FoldedClause {
    Clause replacement;
    Clause remainder;
};

/// Splits `H :- L1, T1, ..., Tm` (m >= 2) into `H :- L1, N` and
/// `N :- T1, ..., Tm`, where N is a fresh predicate over the variables shared
/// by {H, L1} and the tail. Returns nullopt for bodies of two or fewer literals.
std::optional<FoldedClause> fold_clause(const Clause& c, GensymState& gensym);

/// Folds until every body has at most two literals. Each replacement is
/// emitted in place and its remainder folded next.
Program fold_program(const Program& p, GensymState& gensym);
Program fold_program(const Program& p);

/// Every atom and functor name occurring in the program.
std::set<std::string> program_symbols(const Program& p);

}  // namespace bottomup
