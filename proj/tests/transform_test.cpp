#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bottomup/engine.hpp"
#include "bottomup/parser.hpp"
#include "bottomup/transform.hpp"
#include "oracle/naive.hpp"
#include "oracle/random_programs.hpp"

using namespace bottomup;

namespace {

const char* kTc =
    "tc(X,Y) :- edge(X,Y).\n"
    "tc(X,Y) :- edge(X,Z), tc(Z,Y).\n"
    "edge(a,b).\nedge(b,c).\nedge(c,b).\n";

const char* kAppend =
    "append([],L,L).\n"
    "append([X|L1],L2,[X|L3]) :- append(L1,L2,L3).\n";

std::vector<std::string> lines_of(const TriggerProgram& tp) {
    std::vector<std::string> out;
    for (const TriggerRule& r : tp.rules()) out.push_back(format_trigger_rule(r));
    return out;
}

std::size_t expected_rule_count(const Program& p) {
    std::size_t n = 0;
    for (const Clause& c : p.clauses) n += std::max<std::size_t>(1, c.body.size());
    return n;
}

std::set<VarId> var_ids(const Term& t) {
    std::set<VarId> out;
    for (const Term& v : term_variables(t)) out.insert(v.var_id());
    return out;
}

}  // namespace

TEST(BodyDeletions, SingleLiteral) {
    std::vector<Term> body{Term::atom("b1")};
    auto d = body_deletions(body);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].selected, Term::atom("b1"));
    EXPECT_TRUE(d[0].residual.empty());
}

TEST(BodyDeletions, TcRecursiveClause) {
    Clause c = parse_program("tc(X,Y) :- edge(X,Z), tc(Z,Y).").clauses[0];
    auto d = body_deletions(c.body);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].selected, c.body[0]);
    EXPECT_EQ(d[0].residual, std::vector<Term>{c.body[1]});
    EXPECT_EQ(d[1].selected, c.body[1]);
    EXPECT_EQ(d[1].residual, std::vector<Term>{c.body[0]});
}

TEST(BodyDeletions, PreservesResidualOrder) {
    std::vector<Term> body{Term::atom("b1"), Term::atom("b2"), Term::atom("b3")};
    auto d = body_deletions(body);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].residual, (std::vector<Term>{body[1], body[2]}));
    EXPECT_EQ(d[1].residual, (std::vector<Term>{body[0], body[2]}));
    EXPECT_EQ(d[2].residual, (std::vector<Term>{body[0], body[1]}));
}

TEST(CompileTriggers, TransitiveClosure) {
    Program p = parse_program(kTc);
    TriggerProgram tp = compile_triggers(p);
    std::vector<std::string> expected{
        "implies(edge(A,B),tc(A,B)).",
        "implies(edge(A,B),tc(A,C)) :- tc(B,C).",
        "implies(tc(A,B),tc(C,B)) :- edge(C,A).",
        "implies(true,edge(a,b)).",
        "implies(true,edge(b,c)).",
        "implies(true,edge(c,b)).",
    };
    EXPECT_EQ(lines_of(tp), expected);
    EXPECT_EQ(tp.rules_for({"edge", 2}).size(), 2u);
    EXPECT_EQ(tp.rules_for({"tc", 2}).size(), 1u);
    EXPECT_EQ(tp.rules_for({"true", 0}).size(), 3u);
    EXPECT_TRUE(tp.rules_for({"nothing", 1}).empty());
}

TEST(CompileTriggers, Append) {
    TriggerProgram tp = compile_triggers(parse_program(kAppend));
    std::vector<std::string> expected{
        "implies(true,append([],A,A)).",
        "implies(append(A,B,C),append([D|A],B,[D|C])).",
    };
    EXPECT_EQ(lines_of(tp), expected);
}

TEST(CompileTriggers, EmptyProgram) {
    EXPECT_TRUE(compile_triggers(Program{}).empty());
}

TEST(CompileTriggers, RulesOfOneClauseShareItsVariables) {
    Clause c = parse_program("h(X,W) :- a(X,Y), b(Y,Z), c(Z,W).").clauses[0];
    TriggerProgram tp = compile_triggers(Program{{c}});
    ASSERT_EQ(tp.size(), 3u);
    std::set<VarId> clause_vars = var_ids(Term::compound("c", {c.head, c.body[0], c.body[1], c.body[2]}));
    for (const TriggerRule& r : tp.rules()) {
        std::vector<Term> all{r.trigger, r.head};
        all.insert(all.end(), r.residual.begin(), r.residual.end());
        EXPECT_EQ(var_ids(Term::compound("r", all)), clause_vars);
        EXPECT_EQ(r.head, c.head);
    }
}

TEST(CompileTriggersProperty, RuleCountMatchesBodies) {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        Program p = parse_program(oracle::random_datalog(rng));
        TriggerProgram tp = compile_triggers(p);
        EXPECT_EQ(tp.size(), expected_rule_count(p));
        std::size_t facts = 0;
        for (const Clause& c : p.clauses) facts += c.is_fact() ? 1 : 0;
        EXPECT_EQ(tp.rules_for({"true", 0}).size(), facts);
        for (const TriggerRule& r : tp.rules()) {
            if (is_seed(r.trigger)) EXPECT_TRUE(r.residual.empty());
        }
    }
}

TEST(Gensym, SkipsNamesUsedByTheProgram) {
    GensymState g;
    g.reserve(parse_program("'_$Tmp0'(a). p :- '_$Tmp2'."));
    EXPECT_EQ(g.next(), "_$Tmp1");
    EXPECT_EQ(g.next(), "_$Tmp3");
    EXPECT_EQ(g.counter(), 4u);
}

TEST(FoldClause, ShortBodiesAreLeftAlone) {
    GensymState g;
    EXPECT_FALSE(fold_clause(parse_program("h :- b1, b2.").clauses[0], g));
    EXPECT_FALSE(fold_clause(parse_program("h(X) :- b(X).").clauses[0], g));
    EXPECT_FALSE(fold_clause(parse_program("h(a).").clauses[0], g));
    EXPECT_EQ(g.counter(), 0u);
}

TEST(FoldClause, LinkCarriesVariablesSharedWithTheTail) {
    Clause c = parse_program("h(X) :- a(X), b(X,Y), c(Y,Z), d(Z).").clauses[0];
    // Shared set by direct intersection: vars({h(X), a(X)}) = {X};
    // vars(tail) = {X, Y, Z}; intersection = {X}.
    std::set<VarId> outer = var_ids(Term::compound("o", {c.head, c.body[0]}));
    std::set<VarId> inner = var_ids(Term::compound("i", {c.body[1], c.body[2], c.body[3]}));
    std::vector<VarId> shared;
    std::set_intersection(outer.begin(), outer.end(), inner.begin(), inner.end(), std::back_inserter(shared));
    ASSERT_EQ(shared, std::vector<VarId>{c.head.arg(0).var_id()});

    GensymState g;
    auto folded = fold_clause(c, g);
    ASSERT_TRUE(folded);
    EXPECT_EQ(format_clause(folded->replacement), "h(A) :- a(A), '_$Tmp0'(A).");
    EXPECT_EQ(format_clause(folded->remainder), "'_$Tmp0'(A) :- b(A,B), c(B,C), d(C).");
    EXPECT_EQ(folded->replacement.body[1].arg(0).var_id(), shared[0]);
}

TEST(FoldClause, SharedVariablesOrderedByFirstOccurrence) {
    Clause c = parse_program("h(Y) :- a(X,Y), b(X), c(Y), d(Z).").clauses[0];
    GensymState g;
    auto folded = fold_clause(c, g);
    ASSERT_TRUE(folded);
    EXPECT_EQ(format_clause(folded->replacement), "h(A) :- a(B,A), '_$Tmp0'(A,B).");
}

TEST(FoldClause, NoSharedVariablesGivesAtomLink) {
    Clause c = parse_program("h :- b1, b2, b3.").clauses[0];
    GensymState g;
    auto folded = fold_clause(c, g);
    ASSERT_TRUE(folded);
    EXPECT_EQ(format_clause(folded->replacement), "h :- b1, '_$Tmp0'.");
    EXPECT_EQ(format_clause(folded->remainder), "'_$Tmp0' :- b2, b3.");
}

TEST(FoldClause, RemainderIsRenamedApart) {
    Clause c = parse_program("h(X) :- a(X), b(X), c(X).").clauses[0];
    GensymState g;
    auto folded = fold_clause(c, g);
    ASSERT_TRUE(folded);
    std::set<VarId> rep = var_ids(Term::compound("r", {folded->replacement.head, folded->replacement.body[1]}));
    std::set<VarId> rem = var_ids(folded->remainder.head);
    for (VarId v : rem) EXPECT_EQ(rep.count(v), 0u);
}

TEST(FoldProgram, FourLiteralBodyBecomesThreeClauses) {
    Program p = parse_program("h(X) :- a(X), b(X,Y), c(Y,Z), d(Z).");
    Program f = fold_program(p);
    std::vector<std::string> got;
    for (const Clause& c : f.clauses) got.push_back(format_clause(c));
    std::vector<std::string> expected{
        "h(A) :- a(A), '_$Tmp0'(A).",
        "'_$Tmp0'(A) :- b(A,B), '_$Tmp1'(B).",
        "'_$Tmp1'(A) :- c(A,B), d(B).",
    };
    EXPECT_EQ(got, expected);
}

TEST(FoldProgram, SmallProgramsUnchanged) {
    Program p = parse_program(kTc);
    Program f = fold_program(p);
    ASSERT_EQ(f.clauses.size(), p.clauses.size());
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
        EXPECT_EQ(f.clauses[i].head, p.clauses[i].head);
        EXPECT_EQ(f.clauses[i].body, p.clauses[i].body);
    }
    EXPECT_TRUE(fold_program(Program{}).clauses.empty());
}

TEST(FoldProgram, ClauseOrderAroundFoldedClauses) {
    Program p = parse_program("first. h :- b1, b2, b3, b4. last(X) :- first, b1, q(X).");
    Program f = fold_program(p);
    std::string text = format_program(f);
    EXPECT_EQ(text,
              "first.\n"
              "h :- b1, '_$Tmp0'.\n"
              "'_$Tmp0' :- b2, '_$Tmp1'.\n"
              "'_$Tmp1' :- b3, b4.\n"
              "last(A) :- first, '_$Tmp2'(A).\n"
              "'_$Tmp2'(A) :- b1, q(A).\n");
}

TEST(FoldProgram, RefoldingAvoidsExistingTemporaries) {
    Program once = fold_program(parse_program("h :- b1, b2, b3."));
    Program p = once;
    Program extra = parse_program("g :- c1, c2, c3.");
    p.clauses.insert(p.clauses.end(), extra.clauses.begin(), extra.clauses.end());
    Program twice = fold_program(p);
    std::set<std::string> heads;
    for (const Clause& c : twice.clauses) {
        if (c.head.name().rfind("_$Tmp", 0) == 0) EXPECT_TRUE(heads.insert(c.head.name()).second);
    }
    EXPECT_EQ(heads.size(), 2u);
}

TEST(FoldProgramProperty, BoundAndFreshness) {
    std::mt19937 rng(31337);
    oracle::RandomProgramShape wide;
    wide.max_body = 6;
    for (int i = 0; i < 100; ++i) {
        Program p = parse_program(oracle::random_datalog(rng, wide));
        std::set<std::string> original = program_symbols(p);
        Program f = fold_program(p);
        for (const Clause& c : f.clauses) {
            EXPECT_LE(c.body.size(), 2u);
            if (c.head.name().rfind("_$Tmp", 0) == 0) EXPECT_EQ(original.count(c.head.name()), 0u);
        }
    }
}

TEST(FoldProgramProperty, PreservesModelOnOriginalPredicates) {
    std::mt19937 rng(4242);
    oracle::RandomProgramShape wide;
    wide.max_body = 5;
    for (int i = 0; i < 100; ++i) {
        Program p = parse_program(oracle::random_datalog(rng, wide));
        std::set<std::string> original = program_symbols(p);
        auto plain = oracle::naive_fixpoint(p);
        auto folded = oracle::naive_fixpoint(fold_program(p));
        ASSERT_TRUE(plain.completed && folded.completed);
        std::vector<Term> restricted;
        for (const Term& t : folded.facts) {
            if (original.count(t.name())) restricted.push_back(t);
        }
        EXPECT_TRUE(oracle::same_model(plain.facts, restricted)) << format_program(p);
    }
}
