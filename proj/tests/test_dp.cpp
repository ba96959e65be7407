#include "support.hpp"
#include "termfilter/dp.hpp"

#include <gtest/gtest.h>

using namespace termfilter;
using namespace tf_test;

namespace
{
    std::vector<std::string> pair_strings(const Trs &pairs)
    {
        std::vector<std::string> out;
        for (const auto &r : pairs.rules())
            out.push_back(to_string(r));
        return out;
    }
} // namespace

TEST(DependencyPairs, Division)
{
    Trs dps = dependency_pairs(division_trs());
    EXPECT_EQ(pair_strings(dps), (std::vector<std::string>{
                                     "minus#(s(x),s(y)) -> minus#(x,y)",
                                     "quot#(s(x),s(y)) -> quot#(minus(x,y),s(y))",
                                     "quot#(s(x),s(y)) -> minus#(x,y)",
                                 }));
    for (const auto &p : dps.rules())
    {
        EXPECT_TRUE(p.lhs.symbol().is_tuple());
        EXPECT_TRUE(p.rhs.symbol().is_tuple());
    }
}

TEST(DependencyPairs, NoDefinedSymbolsOnRhs)
{
    Trs r = parse_trs("(VAR x)(RULES f(x) -> g(x) g(a) -> b)");
    EXPECT_EQ(pair_strings(dependency_pairs(r)), (std::vector<std::string>{"f#(x) -> g#(x)"}));
    EXPECT_TRUE(dependency_pairs(parse_trs("(VAR x)(RULES f(x) -> x)")).empty());
}

TEST(Cap, ReplacesDefinedRootsOnly)
{
    Trs r = division_trs();
    VarSupply supply(100);
    Term t = app("quot#", {app("minus", {v(1, "x"), v(2, "y")}), app("s", {v(2, "y")})});
    Term c = cap(t, r, supply);
    ASSERT_TRUE(c.arg(0).is_var());
    EXPECT_GE(c.arg(0).var_id(), 100u);
    EXPECT_EQ(c.arg(1), app("s", {v(2, "y")}));
}

TEST(DependencyGraph, DivisionArcs)
{
    DpProblem p = initial_problem(division_trs());
    DependencyGraph g = estimate_dependency_graph(p);
    ASSERT_EQ(g.size(), 3u);
    // 0 = MINUS->MINUS, 1 = QUOT->QUOT, 2 = QUOT->MINUS
    EXPECT_EQ(g.successors[0], (std::vector<std::size_t>{0}));
    EXPECT_EQ(g.successors[1], (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(g.successors[2], (std::vector<std::size_t>{0}));

    auto sccs = scc_decompose(p, g);
    ASSERT_EQ(sccs.size(), 2u);
    EXPECT_EQ(pair_strings(sccs[0].pairs), (std::vector<std::string>{"minus#(s(x),s(y)) -> minus#(x,y)"}));
    EXPECT_EQ(pair_strings(sccs[1].pairs),
              (std::vector<std::string>{"quot#(s(x),s(y)) -> quot#(minus(x,y),s(y))"}));
    EXPECT_EQ(sccs[1].rules.size(), 4u);
}

TEST(DependencyGraph, NonUnifiableConstructorsCutArcs)
{
    // f(a) -> f(b): f#(b) does not unify with f#(a)
    Trs r = parse_trs("(VAR)(RULES f(a) -> f(b))");
    DpProblem p = initial_problem(r);
    ASSERT_EQ(p.pairs.size(), 1u);
    EXPECT_TRUE(estimate_dependency_graph(p).successors[0].empty());
    EXPECT_TRUE(scc_decompose(p).empty());
}

TEST(DependencyGraph, SharedVariablesAreRenamed)
{
    // f(x, x) -> f(a, b): REN makes the capped rhs linear, so f#(a,b) ~ f#(x',x'') unifies
    Trs r = parse_trs("(VAR x)(RULES f(x, x) -> f(a, b))");
    DpProblem p = initial_problem(r);
    // The estimate is an over-approximation through lhs non-linearity: f#(a,b) vs f#(x,x) fails to unify.
    EXPECT_TRUE(estimate_dependency_graph(p).successors[0].empty());

    Trs r2 = parse_trs("(VAR x y)(RULES g(x, y) -> g(y, y))");
    DpProblem p2 = initial_problem(r2);
    EXPECT_EQ(estimate_dependency_graph(p2).successors[0], (std::vector<std::size_t>{0}));
}

TEST(DependencyGraph, DefinedSubtermsAreCapped)
{
    // f(s(x)) -> f(g(x)), g(x) -> s(x): f#(g(x)) caps to f#(z) which unifies with f#(s(x))
    Trs r = parse_trs("(VAR x)(RULES f(s(x)) -> f(g(x)) g(x) -> s(x))");
    DpProblem p = initial_problem(r);
    ASSERT_EQ(p.pairs.size(), 2u);
    auto g = estimate_dependency_graph(p);
    EXPECT_TRUE(g.has_arc(0, 0));
    auto sccs = scc_decompose(p, g);
    ASSERT_EQ(sccs.size(), 1u);
    EXPECT_EQ(sccs[0].pairs.size(), 1u);
}

TEST(Scc, OrderedBySmallestIndexAndTrivialDropped)
{
    DpProblem p = initial_problem(division_if_trs());
    auto sccs = scc_decompose(p);
    ASSERT_EQ(sccs.size(), 3u);
    EXPECT_EQ(sccs[0].pairs.rules()[0].lhs.symbol().name(), "minus#");
    EXPECT_EQ(sccs[1].pairs.rules()[0].lhs.symbol().name(), "ge#");
    EXPECT_EQ(pair_strings(sccs[2].pairs), (std::vector<std::string>{
                                               "div#(x,y) -> if#(ge(x,y),x,y)",
                                               "if#(true,s(x),s(y)) -> div#(minus(x,y),s(y))",
                                           }));
}

TEST(Scc, RandomGraphsMatchReachabilityDefinition)
{
    std::mt19937_64 rng(3);
    for (int it = 0; it < 300; ++it)
    {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        DependencyGraph g;
        g.successors.resize(n);
        std::bernoulli_distribution arc(0.25);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (arc(rng))
                    g.successors[i].push_back(j);
        std::vector<Rule> rules;
        for (std::size_t i = 0; i < n; ++i)
            rules.push_back(Rule{app("p" + std::to_string(i), {}), app("q", {})});
        DpProblem p{Trs(rules), Trs()};

        // reachability closure
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (auto j : g.successors[i])
                reach[i][j] = true;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j])
                        reach[i][j] = true;

        auto sccs = scc_decompose(p, g);
        std::vector<int> comp(n, -1);
        for (std::size_t c = 0; c < sccs.size(); ++c)
            for (const auto &r : sccs[c].pairs.rules())
                for (std::size_t i = 0; i < n; ++i)
                    if (rules[i] == r)
                        comp[i] = static_cast<int>(c);
        for (std::size_t i = 0; i < n; ++i)
        {
            EXPECT_EQ(comp[i] >= 0, reach[i][i]);
            for (std::size_t j = 0; j < n; ++j)
                if (comp[i] >= 0 && comp[j] >= 0)
                    EXPECT_EQ(comp[i] == comp[j], reach[i][j] && reach[j][i]);
        }
    }
}
