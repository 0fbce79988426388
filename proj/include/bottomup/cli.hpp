#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bottomup::cli {

enum class Command { Compile, Fold, Eval, Trace, Stream, Repl };

/// Process exit codes. These values are part of the tool's interface.
enum class ExitStatus : int {
    Ok = 0,            ///< success, or fixpoint reached
    LimitReached = 1,  ///< a step, fact or answer limit stopped evaluation first
    Usage = 2,
    ParseFailure = 3,
    EvalFailure = 4,   ///< cyclic binding met without the occurs check
};

struct CliConfig {
    Command command = Command::Eval;
    std::string input_path;
    bool fold_enabled = false;
    std::optional<std::uint64_t> max_steps;
    std::optional<std::uint64_t> max_facts;
    std::optional<std::uint64_t> limit;
    std::optional<std::string> query;
    bool stats_enabled = false;
    bool first_arg_index = false;
    bool occurs_check = false;
};

std::optional<Command> command_from_name(const std::string& name);

ExitStatus cmd_compile(const CliConfig& cfg, std::ostream& out, std::ostream& err);
ExitStatus cmd_fold(const CliConfig& cfg, std::ostream& out, std::ostream& err);
ExitStatus cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err);
ExitStatus cmd_trace(const CliConfig& cfg, std::ostream& out, std::ostream& err);
ExitStatus cmd_stream(const CliConfig& cfg, std::ostream& out, std::ostream& err);
/// Reads REPL commands from `in` until `quit` or end of input.
ExitStatus cmd_repl(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err);

ExitStatus run_command(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err);

/// Parses `args` (program name first) and runs the command.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bottomup::cli
