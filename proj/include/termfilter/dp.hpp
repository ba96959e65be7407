#pragma once

#include "termfilter/term.hpp"

#include <vector>

namespace termfilter
{

    /// "Is there an infinite R-chain of pairs from P?"
    struct DpProblem
    {
        Trs pairs;
        Trs rules;

        /// Symbols of P and R in first-occurrence order (pairs first).
        std::vector<Symbol> signature() const;
    };

    /// DP(R) in rule order, then leftmost-outermost rhs subterm order.
    Trs dependency_pairs(const Trs &rules);

    inline DpProblem initial_problem(const Trs &rules)
    {
        return DpProblem{dependency_pairs(rules), rules};
    }

    /// Adjacency lists over pair indices.
    struct DependencyGraph
    {
        std::vector<std::vector<std::size_t>> successors;

        bool has_arc(std::size_t from, std::size_t to) const;
        std::size_t size() const { return successors.size(); }
    };

    /// CAP replaces subterms with a root defined in R by fresh variables.
    Term cap(const Term &t, const Trs &rules, VarSupply &supply);

    /**
     * Over-approximates the dependency graph: an arc s->t => u->v exists
     * iff REN(CAP(t)) unifies with u.
     */
    DependencyGraph estimate_dependency_graph(const DpProblem &problem);

    /**
     * One sub-problem per non-trivial SCC, ordered by the smallest pair
     * index it contains. Pairs keep their relative order.
     */
    std::vector<DpProblem> scc_decompose(const DpProblem &problem, const DependencyGraph &graph);

    inline std::vector<DpProblem> scc_decompose(const DpProblem &problem)
    {
        return scc_decompose(problem, estimate_dependency_graph(problem));
    }

} // namespace termfilter
