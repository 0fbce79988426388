#include "bottomup/stream.hpp"

namespace bottomup {

AnswerStream::AnswerStream(Engine& engine, std::optional<Term> query, std::optional<std::uint64_t> limit,
                           RunLimits engine_limits)
    : engine_(&engine), query_(std::move(query)), limit_(limit), engine_limits_(engine_limits) {}

bool AnswerStream::wanted(const Term& fact) const {
    if (!query_) return true;
    return unify(*query_, rename_fresh(fact), {}, {engine_->options().occurs_check}).has_value();
}

std::optional<Term> AnswerStream::next() {
    if (limit_reached()) return std::nullopt;
    while (pending_.empty()) {
        if (engine_->seeded() && limits_reached(engine_->stats(), engine_limits_)) {
            halted_ = !engine_->at_fixpoint();
            return std::nullopt;
        }
        auto event = engine_->step();
        if (!event) return std::nullopt;
        for (Term& f : event->added) {
            if (wanted(f)) pending_.push_back(std::move(f));
        }
    }
    Term answer = std::move(pending_.front());
    pending_.pop_front();
    ++yielded_;
    return answer;
}

}  // namespace bottomup
