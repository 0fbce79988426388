#include "bottomup/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "bottomup/engine.hpp"
#include "bottomup/parser.hpp"
#include "bottomup/stream.hpp"
#include "bottomup/transform.hpp"

namespace bottomup::cli {

namespace {

// Raised after the diagnostic has been written.
struct Failure {
    ExitStatus status;
};

int code(ExitStatus s) { return static_cast<int>(s); }

ExitStatus guarded(std::ostream& err, const std::function<ExitStatus()>& body) {
    try {
        return body();
    } catch (const Failure& f) {
        return f.status;
    } catch (const CyclicTermError& e) {
        err << "error: " << e.what() << " (enable --occurs-check to reject cyclic bindings)\n";
        return ExitStatus::EvalFailure;
    }
}

std::string read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read '" << path << "'\n";
        throw Failure{ExitStatus::Usage};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Program load_program(const CliConfig& cfg, std::ostream& err) {
    std::string src = read_file(cfg.input_path, err);
    try {
        Program p = parse_program(src);
        return cfg.fold_enabled ? fold_program(p) : p;
    } catch (const ParseError& e) {
        err << cfg.input_path << ":" << e.line() << ":" << e.column() << ": syntax error: " << e.reason() << "\n";
        throw Failure{ExitStatus::ParseFailure};
    }
}

std::optional<Term> load_query(const CliConfig& cfg, std::ostream& err) {
    if (!cfg.query) return std::nullopt;
    try {
        return parse_query(*cfg.query);
    } catch (const ParseError& e) {
        err << "error: invalid --query '" << *cfg.query << "': " << e.reason() << "\n";
        throw Failure{ExitStatus::Usage};
    }
}

Engine make_engine(const CliConfig& cfg, const Program& p) {
    return Engine(compile_triggers(p), EngineOptions{cfg.first_arg_index, cfg.occurs_check});
}

RunLimits limits_of(const CliConfig& cfg) {
    return RunLimits{cfg.max_steps, cfg.max_facts};
}

bool matches(const std::optional<Term>& query, const Term& fact, bool occurs_check) {
    if (!query) return true;
    return unify(*query, rename_fresh(fact), {}, {occurs_check}).has_value();
}

void print_facts(const FactStore& store, const std::optional<PredKey>& only, const std::optional<Term>& query,
                 bool occurs_check, std::ostream& out) {
    for (const PredKey& key : store.predicates()) {
        if (only && !(*only == key)) continue;
        for (const Term& fact : store.bucket(key)) {
            if (matches(query, fact, occurs_check)) out << format_term(fact) << ".\n";
        }
    }
}

std::optional<PredKey> parse_pred_indicator(const std::string& text) {
    auto slash = text.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) return std::nullopt;
    std::string name = text.substr(0, slash);
    std::size_t arity = 0;
    for (char c : text.substr(slash + 1)) {
        if (c < '0' || c > '9') return std::nullopt;
        arity = arity * 10 + static_cast<std::size_t>(c - '0');
    }
    if (name.size() >= 2 && name.front() == '\'' && name.back() == '\'') {
        try {
            Term t = parse_query(name);
            if (!t.is_atom()) return std::nullopt;
            name = t.name();
        } catch (const ParseError&) {
            return std::nullopt;
        }
    }
    return PredKey{name, arity};
}

}  // namespace

std::optional<Command> command_from_name(const std::string& name) {
    if (name == "compile") return Command::Compile;
    if (name == "fold") return Command::Fold;
    if (name == "eval") return Command::Eval;
    if (name == "trace") return Command::Trace;
    if (name == "stream") return Command::Stream;
    if (name == "repl") return Command::Repl;
    return std::nullopt;
}

ExitStatus cmd_compile(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        TriggerProgram triggers = compile_triggers(load_program(cfg, err));
        for (const TriggerRule& rule : triggers.rules()) out << format_trigger_rule(rule) << '\n';
        return ExitStatus::Ok;
    });
}

ExitStatus cmd_fold(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        CliConfig folded = cfg;
        folded.fold_enabled = true;
        out << format_program(load_program(folded, err));
        return ExitStatus::Ok;
    });
}

ExitStatus cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Program p = load_program(cfg, err);
        std::optional<Term> query = load_query(cfg, err);
        Engine engine = make_engine(cfg, p);
        RunResult result = engine.run(limits_of(cfg));
        print_facts(engine.store(), std::nullopt, query, cfg.occurs_check, out);
        if (cfg.stats_enabled) out << format_stats(result.stats);
        return result.completed ? ExitStatus::Ok : ExitStatus::LimitReached;
    });
}

ExitStatus cmd_trace(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Engine engine = make_engine(cfg, load_program(cfg, err));
        const RunLimits limits = limits_of(cfg);
        VarNaming naming;
        ExitStatus status = ExitStatus::Ok;
        while (auto event = engine.step()) {
            out << format_step(*event, naming) << '\n';
            if (engine.at_fixpoint()) break;
            if (limits_reached(engine.stats(), limits)) {
                status = ExitStatus::LimitReached;
                break;
            }
        }
        if (status == ExitStatus::Ok) out << "finished\n";
        if (cfg.stats_enabled) out << format_stats(engine.stats());
        return status;
    });
}

ExitStatus cmd_stream(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Program p = load_program(cfg, err);
        std::optional<Term> query = load_query(cfg, err);
        Engine engine = make_engine(cfg, p);
        AnswerStream answers(engine, query, cfg.limit, limits_of(cfg));
        VarNaming naming;
        while (auto fact = answers.next()) out << format_term(*fact, naming) << ".\n" << std::flush;
        if (cfg.stats_enabled) out << format_stats(engine.stats());
        bool stopped_early = answers.halted() || (answers.limit_reached() && !answers.exhausted());
        return stopped_early ? ExitStatus::LimitReached : ExitStatus::Ok;
    });
}

ExitStatus cmd_repl(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Program p = load_program(cfg, err);
        std::optional<Term> query = load_query(cfg, err);
        Engine engine = make_engine(cfg, p);
        const RunLimits limits = limits_of(cfg);
        AnswerStream answers(engine, query, std::nullopt, limits);
        VarNaming naming;

        auto limit_blocks = [&] {
            if (engine.seeded() && !engine.at_fixpoint() && limits_reached(engine.stats(), limits)) {
                out << "limit reached\n";
                return true;
            }
            return false;
        };

        std::string line;
        for (;;) {
            out << "bu[" << engine.stats().steps << "]> " << std::flush;
            if (!std::getline(in, line)) {
                out << '\n';
                break;
            }
            std::istringstream words(line);
            std::string cmd;
            if (!(words >> cmd)) continue;
            std::string arg;
            words >> arg;

            if (cmd == "quit" || cmd == "exit") break;
            if (cmd == "help") {
                out << "step           consume one scheduled fact and show what it adds\n"
                       "more [N]       show the next N answers (default 1)\n"
                       "facts [P/N]    list stored facts, optionally for one predicate\n"
                       "stats          show evaluation counters\n"
                       "quit           leave\n";
            } else if (cmd == "step") {
                if (limit_blocks()) continue;
                if (auto event = engine.step()) {
                    out << format_step(*event, naming) << '\n';
                } else {
                    out << "finished\n";
                }
            } else if (cmd == "more") {
                std::uint64_t n = 1;
                if (!arg.empty()) {
                    try {
                        std::size_t used = 0;
                        n = std::stoull(arg, &used);
                        if (used != arg.size()) throw std::invalid_argument(arg);
                    } catch (const std::exception&) {
                        out << "more: expected a count, got '" << arg << "'\n";
                        continue;
                    }
                }
                for (std::uint64_t i = 0; i < n; ++i) {
                    auto fact = answers.next();
                    if (!fact) {
                        out << (answers.halted() ? "limit reached\n" : "no more answers\n");
                        break;
                    }
                    out << format_term(*fact, naming) << ".\n";
                }
            } else if (cmd == "facts") {
                std::optional<PredKey> only;
                if (!arg.empty()) {
                    only = parse_pred_indicator(arg);
                    if (!only) {
                        out << "facts: expected name/arity, got '" << arg << "'\n";
                        continue;
                    }
                }
                print_facts(engine.store(), only, std::nullopt, cfg.occurs_check, out);
            } else if (cmd == "stats") {
                out << format_stats(engine.stats());
            } else {
                out << "unknown command '" << cmd << "' (try 'help')\n";
            }
        }
        return ExitStatus::Ok;
    });
}

ExitStatus run_command(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
    case Command::Compile: return cmd_compile(cfg, out, err);
    case Command::Fold: return cmd_fold(cfg, out, err);
    case Command::Eval: return cmd_eval(cfg, out, err);
    case Command::Trace: return cmd_trace(cfg, out, err);
    case Command::Stream: return cmd_stream(cfg, out, err);
    case Command::Repl: return cmd_repl(cfg, in, out, err);
    }
    return ExitStatus::Usage;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bottom-up evaluation of positive Horn-clause programs.", "bottomup"};
    CliConfig cfg;
    std::string command;
    app.add_option("command", command, "compile | fold | eval | trace | stream | repl")
        ->required()
        ->check(CLI::IsMember({"compile", "fold", "eval", "trace", "stream", "repl"}));
    app.add_option("file", cfg.input_path, "Program source (.pl)")->required();
    app.add_flag("--fold", cfg.fold_enabled, "Fold bodies to at most two literals first");
    app.add_option("--max-steps", cfg.max_steps, "Stop after N schedule entries");
    app.add_option("--max-facts", cfg.max_facts, "Stop once N facts are stored");
    app.add_option("--limit", cfg.limit, "Stop after N answers (stream)");
    app.add_option("--query", cfg.query, "Only report facts unifying with TERM");
    app.add_flag("--stats", cfg.stats_enabled, "Print evaluation counters");
    app.add_flag("--first-arg-index", cfg.first_arg_index, "Index stored facts on their first argument");
    app.add_flag("--occurs-check", cfg.occurs_check, "Unify with the occurs check");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return code(ExitStatus::Usage);
    }

    cfg.command = *command_from_name(command);
    if (cfg.limit && cfg.command != Command::Stream) {
        err << "error: --limit is only valid with the stream command\n";
        return code(ExitStatus::Usage);
    }
    if (cfg.query && cfg.command != Command::Eval && cfg.command != Command::Stream && cfg.command != Command::Repl) {
        err << "error: --query is only valid with eval, stream and repl\n";
        return code(ExitStatus::Usage);
    }
    return code(run_command(cfg, in, out, err));
}

}  // namespace bottomup::cli
