#include "termfilter/dp.hpp"

#include <algorithm>
#include <functional>

namespace termfilter
{

    std::vector<Symbol> DpProblem::signature() const
    {
        return merge_signatures(pairs.signature(), rules.signature());
    }

    namespace
    {
        Term tuple_of(const Term &t)
        {
            std::vector<Term> args(t.args().begin(), t.args().end());
            return Term::app(t.symbol().tuple(), std::move(args));
        }
    } // namespace

    Trs dependency_pairs(const Trs &rules)
    {
        auto defined = defined_symbols(rules);
        auto is_def = [&](Symbol f)
        { return std::find(defined.begin(), defined.end(), f) != defined.end(); };

        std::vector<Rule> pairs;
        for (const auto &r : rules.rules())
        {
            std::vector<Term> subs;
            subterms(r.rhs, subs);
            for (const auto &u : subs)
                if (!u.is_var() && is_def(u.symbol()))
                    pairs.push_back(Rule{tuple_of(r.lhs), tuple_of(u)});
        }
        return Trs(std::move(pairs));
    }

    bool DependencyGraph::has_arc(std::size_t from, std::size_t to) const
    {
        const auto &succ = successors.at(from);
        return std::find(succ.begin(), succ.end(), to) != succ.end();
    }

    Term cap(const Term &t, const Trs &rules, VarSupply &supply)
    {
        if (t.is_var())
            return t;
        if (is_defined(rules, t.symbol()))
            return supply.fresh("cap");
        std::vector<Term> args;
        for (const auto &a : t.args())
            args.push_back(cap(a, rules, supply));
        return Term::app(t.symbol(), std::move(args));
    }

    DependencyGraph estimate_dependency_graph(const DpProblem &problem)
    {
        const auto &pairs = problem.pairs.rules();
        VarSupply supply;
        supply.reserve_above(problem.pairs.max_var_id());
        supply.reserve_above(problem.rules.max_var_id());

        DependencyGraph g;
        g.successors.resize(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i)
        {
            Term capped = rename_linear(cap(pairs[i].rhs, problem.rules, supply), supply);
            for (std::size_t j = 0; j < pairs.size(); ++j)
                if (unify(capped, pairs[j].lhs))
                    g.successors[i].push_back(j);
        }
        return g;
    }

    std::vector<DpProblem> scc_decompose(const DpProblem &problem, const DependencyGraph &graph)
    {
        // Tarjan
        const std::size_t n = graph.size();
        std::vector<int> index(n, -1), low(n, 0);
        std::vector<bool> on_stack(n, false);
        std::vector<std::size_t> stack;
        std::vector<std::vector<std::size_t>> components;
        int counter = 0;

        std::function<void(std::size_t)> connect = [&](std::size_t v)
        {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = true;
            for (std::size_t w : graph.successors[v])
            {
                if (index[w] < 0)
                {
                    connect(w);
                    low[v] = std::min(low[v], low[w]);
                }
                else if (on_stack[w])
                {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (low[v] == index[v])
            {
                std::vector<std::size_t> comp;
                std::size_t w;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                if (comp.size() > 1 || graph.has_arc(v, v))
                    components.push_back(std::move(comp));
            }
        };
        for (std::size_t v = 0; v < n; ++v)
            if (index[v] < 0)
                connect(v);

        std::sort(components.begin(), components.end(),
                  [](const auto &a, const auto &b)
                  { return a.front() < b.front(); });

        std::vector<DpProblem> out;
        for (const auto &comp : components)
        {
            std::vector<Rule> sub;
            for (std::size_t i : comp)
                sub.push_back(problem.pairs.rules()[i]);
            out.push_back(DpProblem{Trs(std::move(sub)), problem.rules});
        }
        return out;
    }

} // namespace termfilter
