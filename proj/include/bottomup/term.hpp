#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bottomup {

using VarId = std::uint64_t;

/// Immutable first-order term: variable, atom, integer or compound.
///
/// Terms are cheap to copy (a shared pointer to an immutable node) and may be
/// shared freely between threads. Equality is structural, with variables
/// compared by id.
class Term {
public:
    enum class Kind { Variable, Atom, Integer, Compound };

    static Term variable(VarId id, std::string name = {});
    static Term atom(std::string_view name);
    static Term integer(std::int64_t value);
    /// Throws std::invalid_argument on an empty argument list; use atom() for
    /// zero-arity symbols.
    static Term compound(std::string_view functor, std::vector<Term> args);
    /// Right-nested '.'/2 cells ending in `tail`.
    static Term list(std::vector<Term> items, std::optional<Term> tail = std::nullopt);
    static Term nil();

    Kind kind() const;
    bool is_var() const { return kind() == Kind::Variable; }
    bool is_atom() const { return kind() == Kind::Atom; }
    bool is_integer() const { return kind() == Kind::Integer; }
    bool is_compound() const { return kind() == Kind::Compound; }
    bool is_atomic() const { return is_atom() || is_integer(); }
    bool is_ground() const;

    VarId var_id() const;
    /// Source name of a variable; empty when the variable was generated.
    const std::string& var_name() const;
    /// Atom symbol or compound functor.
    const std::string& name() const;
    std::int64_t int_value() const;
    std::span<const Term> args() const;
    std::size_t arity() const;
    const Term& arg(std::size_t i) const { return args()[i]; }

    bool is_list_cell() const { return is_compound() && arity() == 2 && name() == "."; }
    bool is_nil() const { return is_atom() && name() == "[]"; }

    /// Same underlying node (cheaper than, and implies, structural equality).
    bool same_node(const Term& other) const { return node_ == other.node_; }

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Predicate indicator: name/arity.
struct PredKey {
    std::string name;
    std::size_t arity = 0;

    friend auto operator<=>(const PredKey&, const PredKey&) = default;
    friend bool operator==(const PredKey&, const PredKey&) = default;
};

/// Throws std::invalid_argument for variables and integers.
PredKey pred_key(const Term& literal);
std::string to_string(const PredKey& key);

/// Monotone source of fresh variable ids. Safe to share between threads.
class VarCounter {
public:
    VarId fresh() { return next_.fetch_add(1, std::memory_order_relaxed); }
    VarId peek() const { return next_.load(std::memory_order_relaxed); }

private:
    std::atomic<VarId> next_{1};
};

VarCounter& default_var_counter();

/// Thrown when resolving a binding chain that loops back on itself
/// (possible only when unification runs without the occurs check).
class CyclicTermError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Triangular variable bindings. A variable is never bound to itself.
class Substitution {
public:
    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const Term* lookup(VarId id) const;
    void bind(VarId id, Term value);
    /// Follows variable-to-variable chains until an unbound variable or a
    /// non-variable term is reached. Does not descend into arguments.
    Term walk(Term t) const;
    /// Fully resolved binding of `id`, or nullopt when unbound.
    std::optional<Term> resolve(VarId id) const;

private:
    std::unordered_map<VarId, Term> bindings_;
};

struct UnifyOptions {
    bool occurs_check = false;
};

/// Most general unifier of t1 and t2 extending s, or nullopt.
std::optional<Substitution> unify(const Term& t1, const Term& t2, const Substitution& s = {},
                                  UnifyOptions opts = {});

/// Replaces every bound variable, recursively. Throws CyclicTermError if a
/// binding refers back to itself.
Term apply(const Substitution& s, const Term& t);

bool occurs_in(VarId id, const Term& t);

/// Variables of `t` in first-occurrence order, without duplicates.
std::vector<Term> term_variables(const Term& t);
void collect_variables(const Term& t, std::vector<Term>& out);

/// Consistent renaming of one or more terms to fresh variables.
class Renamer {
public:
    explicit Renamer(VarCounter& counter = default_var_counter()) : counter_(&counter) {}
    Term operator()(const Term& t);

private:
    VarCounter* counter_;
    std::unordered_map<VarId, Term> map_;
};

Term rename_fresh(const Term& t, VarCounter& counter = default_var_counter());

/// One-way matching: is there a substitution over the variables of `general`
/// only that turns it into `specific`? The two terms must not share variables.
bool is_instance_of(const Term& specific, const Term& general);
bool are_variants(const Term& a, const Term& b);

/// Display names for variables: A..Z, then A1..Z1, A2.. in the order
/// variables are first printed. One naming may span several terms.
class VarNaming {
public:
    std::string name_of(VarId id);

private:
    std::unordered_map<VarId, std::string> names_;
    std::size_t next_ = 0;
};

bool atom_needs_quotes(std::string_view name);
std::string format_atom(std::string_view name);
std::string format_term(const Term& t, VarNaming& naming);
/// Formats with a naming local to this call.
std::string format_term(const Term& t);

}  // namespace bottomup
