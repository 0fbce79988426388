#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "bottomup/engine.hpp"
#include "bottomup/term.hpp"

namespace bottomup {

/// Pull-based enumeration of derived facts, for programs whose model may be
/// infinite. Each call to next() steps the engine only as far as needed to
/// produce one more answer; dropping the stream stops all work.
///
/// Answers are the facts added by each step, in step order, filtered to those
/// unifying with `query` when one is given. The engine may be stepped by other
/// callers in between; facts added by those steps are not reported.
class AnswerStream {
public:
    AnswerStream(Engine& engine, std::optional<Term> query = std::nullopt,
                 std::optional<std::uint64_t> limit = std::nullopt, RunLimits engine_limits = {});

    std::optional<Term> next();

    std::uint64_t yielded() const { return yielded_; }
    bool limit_reached() const { return limit_ && yielded_ >= *limit_; }
    /// Stopped because the engine's step or fact limit tripped.
    bool halted() const { return halted_; }
    /// No answer is buffered and the engine is at its fixpoint.
    bool exhausted() const { return pending_.empty() && engine_->at_fixpoint(); }
    void set_limit(std::optional<std::uint64_t> limit) { limit_ = limit; }

private:
    bool wanted(const Term& fact) const;

    Engine* engine_;
    std::optional<Term> query_;
    std::optional<std::uint64_t> limit_;
    RunLimits engine_limits_;
    bool halted_ = false;
    std::uint64_t yielded_ = 0;
    std::deque<Term> pending_;
};

}  // namespace bottomup
