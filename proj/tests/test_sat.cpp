#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace termfilter;
using namespace tf_test;

TEST(VarMap, NumberingAndBitWidth)
{
    Symbol f = sym("f", 2), g = sym("g", 1), a = sym("a", 0);
    std::vector<Symbol> sig{f, g, a};
    std::vector<Symbol> usable{g};
    VarMap vm(sig, 2, usable);
    EXPECT_EQ(vm.bit_width(), 2u);
    EXPECT_EQ(vm.bit(f, 1), 1);
    EXPECT_EQ(vm.bit(f, 2), 2);
    EXPECT_EQ(vm.bit(a, 2), 6);
    EXPECT_EQ(vm.list(f), 7);
    EXPECT_EQ(vm.arg(f, 1), 8);
    EXPECT_EQ(vm.arg(f, 2), 9);
    EXPECT_EQ(vm.list(g), 10);
    EXPECT_EQ(vm.arg(g, 1), 11);
    EXPECT_EQ(vm.list(a), 12);
    EXPECT_EQ(vm.strict(0), 13);
    EXPECT_EQ(vm.strict(1), 14);
    EXPECT_EQ(vm.usable(g), 15);
    EXPECT_EQ(vm.named_count(), 15);
    EXPECT_EQ(vm.fresh(), 16);
    EXPECT_EQ(vm.describe(8), "arg_f^1");
    EXPECT_THROW(vm.usable(f), std::out_of_range);

    std::vector<Symbol> one{a};
    EXPECT_EQ(VarMap(one, 0, {}).bit_width(), 1u);
    std::vector<Symbol> five{sym("s1", 0), sym("s2", 0), sym("s3", 0), sym("s4", 0), sym("s5", 0)};
    EXPECT_EQ(VarMap(five, 0, {}).bit_width(), 3u);
}

TEST(Bits, ExhaustiveComparisonUpToFourBits)
{
    for (std::size_t k = 1; k <= 4; ++k)
    {
        FormulaStore st;
        std::vector<Var> fb, gb;
        for (std::size_t i = 0; i < k; ++i)
        {
            fb.push_back(static_cast<Var>(i + 1));
            gb.push_back(static_cast<Var>(k + i + 1));
        }
        NodeId gt = bits_greater(st, fb, gb), eq = bits_equal(st, fb, gb);
        for (unsigned a = 0; a < (1u << k); ++a)
            for (unsigned b = 0; b < (1u << k); ++b)
            {
                unsigned mask = a | (b << k);
                EXPECT_EQ(eval_mask(st, gt, mask), a > b) << k << ": " << a << " " << b;
                EXPECT_EQ(eval_mask(st, eq, mask), a == b) << k << ": " << a << " " << b;
            }
    }
}

TEST(Lower, StrictModeRejectsEquivalenceAtoms)
{
    FormulaStore st;
    Symbol f = sym("f", 0), g = sym("g", 0);
    std::vector<Symbol> sig{f, g};
    VarMap vm(sig, 0, {});
    NodeId root = st.atom(Atom::po_eq(f, g));
    EXPECT_THROW(lower_atoms(st, root, vm, OrderMode::strict), std::logic_error);
    EXPECT_NO_THROW(lower_atoms(st, root, vm, OrderMode::quasi));
}

TEST(Lower, StructuralConstraint)
{
    Symbol f = sym("f", 2), c = sym("c", 0);
    std::vector<Symbol> sig{f, c};
    FormulaStore st;
    VarMap vm(sig, 0, {});
    Lowered low = lower_atoms(st, st.top(), vm, OrderMode::strict);
    // vars: f bit 1, c bit 2, list f 3, arg f 4,5, list c 6
    for (unsigned m = 0; m < 64; ++m)
    {
        bool list_f = m & 4, a1 = m & 8, a2 = m & 16, list_c = m & 32;
        bool expect = (list_f || (a1 != a2)) && list_c;
        EXPECT_EQ(eval_mask(st, low.structural, m), expect) << m;
    }
}

TEST(Tseitin, EquisatisfiableWithModelProjection)
{
    std::mt19937_64 rng(17);
    int sat = 0;
    for (int it = 0; it < 300; ++it)
    {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        FormulaStore st(FormulaStore::Options{it % 2 == 0, it % 3 != 0});
        NodeId root = random_formula(rng, st, n, 4);
        std::vector<NodeId> roots{root};
        Cnf cnf = tseitin_cnf(st, roots, static_cast<Var>(n + 1));
        bool satisfiable = false;
        for (unsigned m = 0; m < (1u << n); ++m)
            satisfiable |= eval_mask(st, root, m);
        SolveResult r = solve_internal(cnf);
        ASSERT_NE(r.status, SatStatus::unknown);
        ASSERT_EQ(r.status == SatStatus::sat, satisfiable) << st.dump(root);
        if (satisfiable)
        {
            ++sat;
            unsigned mask = 0;
            for (std::size_t i = 1; i <= n; ++i)
                mask |= r.model[i] ? 1u << (i - 1) : 0u;
            EXPECT_TRUE(eval_mask(st, root, mask));
            EXPECT_TRUE(cnf_holds(cnf, r.model));
        }
    }
    EXPECT_GT(sat, 50);
}

TEST(Dimacs, RoundTrip)
{
    Cnf cnf{5, {{1, -2}, {3}, {-4, 5, -1}, {}}};
    std::stringstream ss;
    std::vector<std::string> comments{"hello", "world"};
    write_dimacs(ss, cnf, comments);
    EXPECT_EQ(ss.str().rfind("c hello\nc world\np cnf 5 4\n", 0), 0u);
    Cnf back = read_dimacs(ss);
    EXPECT_EQ(back.num_vars, 5);
    EXPECT_EQ(back.clauses, cnf.clauses);
}

TEST(Dimacs, RejectsMalformed)
{
    std::stringstream bad1("p cnf 2 1\n1 3 0\n");
    EXPECT_THROW(read_dimacs(bad1), std::runtime_error);
    std::stringstream bad2("1 2 0\n");
    EXPECT_THROW(read_dimacs(bad2), std::runtime_error);
}

TEST(Decode, RanksFilteringStrictUsable)
{
    Symbol f = sym("f", 2), g = sym("g", 1), a = sym("a", 0);
    std::vector<Symbol> sig{f, g, a};
    std::vector<Symbol> usable{f};
    VarMap vm(sig, 2, usable);
    Model m(vm.named_count() + 1, false);
    // f rank 3, g rank 1, a rank 1
    m[vm.bit(f, 1)] = m[vm.bit(f, 2)] = true;
    m[vm.bit(g, 1)] = true;
    m[vm.bit(a, 1)] = true;
    m[vm.list(f)] = true;
    m[vm.arg(f, 2)] = true;
    m[vm.arg(g, 1)] = true; // g collapses to 1
    m[vm.list(a)] = true;
    m[vm.strict(1)] = true;
    m[vm.usable(f)] = true;
    Witness w = decode_model(m, vm);
    EXPECT_EQ(w.precedence.rank(f), 2u);
    EXPECT_EQ(w.precedence.rank(g), 1u);
    EXPECT_EQ(w.precedence.rank(a), 1u);
    EXPECT_EQ(w.filtering.at(f), Filter::keep_positions({2}));
    EXPECT_EQ(w.filtering.at(g), Filter::collapse_to(1));
    EXPECT_EQ(w.strict_pairs, (std::vector<std::size_t>{1}));
    EXPECT_EQ(w.usable, (std::vector<Symbol>{f}));

    m[vm.arg(g, 1)] = false;
    EXPECT_THROW(decode_model(m, vm), DecodeError);
}
