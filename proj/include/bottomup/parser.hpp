#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bottomup/term.hpp"

namespace bottomup {

/// Object-program clause. Facts have an empty body.
struct Clause {
    Term head;
    std::vector<Term> body;

    bool is_fact() const { return body.empty(); }
};

/// Clauses in source order.
struct Program {
    std::vector<Clause> clauses;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// Message without the position prefix.
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
    std::size_t line_;
    std::size_t column_;
};

/// Parses the pure positive subset: `H.` and `H :- B1, ..., Bn.` clauses,
/// `%` comments, list syntax, quoted atoms and integers. Every clause gets its
/// own fresh variables. Throws ParseError.
Program parse_program(std::string_view src, VarCounter& counter = default_var_counter());

/// Parses one term, optionally terminated by `.`. Rejects a bare variable.
Term parse_query(std::string_view src, VarCounter& counter = default_var_counter());

/// Renames all variables of the clause, keeping sharing between head and body.
Clause rename_clause(const Clause& c, VarCounter& counter = default_var_counter());

std::string format_clause(const Clause& c);
/// One clause per line.
std::string format_program(const Program& p);

}  // namespace bottomup
