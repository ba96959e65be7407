#pragma once

// Shared helpers for the test binaries: random instances and reference
// implementations written independently of the library code paths.

#include "termfilter/encoder.hpp"
#include "termfilter/order.hpp"
#include "termfilter/sat.hpp"
#include "termfilter/solver.hpp"
#include "termfilter/term.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tf_test
{
    using namespace termfilter;

    inline Term v(VarId id, const std::string &name) { return Term::var(id, name); }

    inline Term app(const std::string &f, std::vector<Term> args)
    {
        const std::size_t n = args.size();
        return Term::app(Symbol::intern(f, n), std::move(args));
    }

    inline Term cst(const std::string &f) { return app(f, {}); }

    inline Symbol sym(const std::string &f, std::size_t arity) { return Symbol::intern(f, arity); }

    // ------------------------------------------------------------------
    // Reference LPO over an explicit precedence relation.

    /// gt[i][j] is f_i > f_j; eq[i][j] is f_i ~ f_j (reflexive). Symbols are looked up by `index`.
    struct RefPrecedence
    {
        std::vector<Symbol> symbols;
        std::vector<std::vector<bool>> gt;
        std::vector<std::vector<bool>> eq;

        std::size_t index(Symbol f) const
        {
            for (std::size_t i = 0; i < symbols.size(); ++i)
                if (symbols[i] == f)
                    return i;
            throw std::logic_error("symbol not in reference precedence: " + f.name() + "/" + std::to_string(f.arity()));
        }
    };

    inline RefPrecedence ref_from_ranks(const std::vector<Symbol> &sig, const std::vector<unsigned> &rank, bool quasi)
    {
        RefPrecedence p{sig, {}, {}};
        const std::size_t n = sig.size();
        p.gt.assign(n, std::vector<bool>(n, false));
        p.eq.assign(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
            {
                p.gt[i][j] = rank[i] > rank[j];
                p.eq[i][j] = i == j || (quasi && rank[i] == rank[j]);
            }
        return p;
    }

    bool ref_gt(const RefPrecedence &p, const Term &s, const Term &t);

    inline bool ref_equiv(const RefPrecedence &p, const Term &s, const Term &t)
    {
        if (s.is_var() || t.is_var())
            return s.is_var() && t.is_var() && s.var_id() == t.var_id();
        if (s.args().size() != t.args().size() || !p.eq[p.index(s.symbol())][p.index(t.symbol())])
            return false;
        for (std::size_t i = 0; i < s.args().size(); ++i)
            if (!ref_equiv(p, s.arg(i), t.arg(i)))
                return false;
        return true;
    }

    inline bool ref_ge(const RefPrecedence &p, const Term &s, const Term &t) { return ref_equiv(p, s, t) || ref_gt(p, s, t); }

    inline bool ref_lex_gt(const RefPrecedence &p, const std::vector<Term> &ss, const std::vector<Term> &ts)
    {
        std::size_t i = 0;
        while (i < ss.size() && i < ts.size() && ref_equiv(p, ss[i], ts[i]))
            ++i;
        if (i == ts.size())
            return i < ss.size();
        if (i == ss.size())
            return false;
        return ref_gt(p, ss[i], ts[i]);
    }

    /// Textbook LPO: s > t iff some s_i >= t, or f > g and s > all t_j, or f ~ g, s > all t_j and args lex-greater.
    inline bool ref_gt(const RefPrecedence &p, const Term &s, const Term &t)
    {
        if (s.is_var())
            return false;
        for (const auto &si : s.args())
            if (ref_ge(p, si, t))
                return true;
        if (t.is_var())
            return false;
        for (const auto &tj : t.args())
            if (!ref_gt(p, s, tj))
                return false;
        const std::size_t f = p.index(s.symbol()), g = p.index(t.symbol());
        if (p.gt[f][g])
            return true;
        if (p.eq[f][g])
            return ref_lex_gt(p, std::vector<Term>(s.args().begin(), s.args().end()),
                              std::vector<Term>(t.args().begin(), t.args().end()));
        return false;
    }

    /// Reference argument filtering; filtered applications keep the symbol name with the reduced arity.
    inline Term ref_filter(const ArgumentFiltering &pi, const Term &t)
    {
        if (t.is_var())
            return t;
        const Filter &f = pi.at(t.symbol());
        if (f.collapse)
            return ref_filter(pi, t.arg(f.position - 1));
        std::vector<Term> args;
        for (std::size_t i : f.keep)
            args.push_back(ref_filter(pi, t.arg(i - 1)));
        const Symbol g = Symbol::intern(t.symbol().name(), args.size(), t.symbol().kind());
        return Term::app(g, std::move(args));
    }

    /// The signature of filtered terms: every symbol with every reachable reduced arity is mapped to its original.
    inline RefPrecedence ref_filtered_precedence(const std::vector<Symbol> &sig, const std::vector<unsigned> &rank,
                                                 bool quasi, const ArgumentFiltering &pi)
    {
        std::vector<Symbol> syms;
        std::vector<unsigned> ranks;
        for (std::size_t i = 0; i < sig.size(); ++i)
        {
            const Filter &f = pi.at(sig[i]);
            if (f.collapse)
                continue;
            syms.push_back(Symbol::intern(sig[i].name(), f.keep.size(), sig[i].kind()));
            ranks.push_back(rank[i]);
        }
        return ref_from_ranks(syms, ranks, quasi);
    }

    // ------------------------------------------------------------------
    // Enumeration of (rank, pi).

    inline std::vector<Filter> all_filters(std::size_t arity)
    {
        std::vector<Filter> out;
        for (std::size_t i = 1; i <= arity; ++i)
            out.push_back(Filter::collapse_to(i));
        for (unsigned mask = 0; mask < (1u << arity); ++mask)
        {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < arity; ++i)
                if (mask & (1u << i))
                    keep.push_back(i + 1);
            out.push_back(Filter::keep_positions(keep));
        }
        return out;
    }

    /// Calls fn(pi) for every argument filtering over sig; stops early when fn returns true.
    inline bool for_each_filtering(const std::vector<Symbol> &sig, const std::function<bool(const ArgumentFiltering &)> &fn)
    {
        std::vector<std::vector<Filter>> options;
        for (auto f : sig)
            options.push_back(all_filters(f.arity()));
        std::vector<std::size_t> pick(sig.size(), 0);
        while (true)
        {
            ArgumentFiltering pi;
            for (std::size_t i = 0; i < sig.size(); ++i)
                pi.set(sig[i], options[i][pick[i]]);
            if (fn(pi))
                return true;
            std::size_t i = 0;
            while (i < sig.size() && ++pick[i] == options[i].size())
                pick[i++] = 0;
            if (i == sig.size())
                return false;
        }
    }

    /// Calls fn(ranks) for every map sig -> {0..|sig|-1}; stops early when fn returns true.
    inline bool for_each_ranking(std::size_t n, const std::function<bool(const std::vector<unsigned> &)> &fn)
    {
        std::vector<unsigned> rank(n, 0);
        while (true)
        {
            if (fn(rank))
                return true;
            std::size_t i = 0;
            while (i < n && ++rank[i] == n)
                rank[i++] = 0;
            if (i == n)
                return false;
        }
    }

    inline Precedence to_precedence(const std::vector<Symbol> &sig, const std::vector<unsigned> &rank)
    {
        Precedence p;
        for (std::size_t i = 0; i < sig.size(); ++i)
            p.set_rank(sig[i], rank[i]);
        return p;
    }

    struct Inequality
    {
        Term lhs;
        Term rhs;
        bool strict;
    };

    inline std::string to_string(const Inequality &c)
    {
        return termfilter::to_string(c.lhs) + (c.strict ? " > " : " >= ") + termfilter::to_string(c.rhs);
    }

    /// Brute force: is there (rank, pi) making every inequality hold under the reference LPO on filtered terms?
    inline bool brute_force_orientable(const std::vector<Symbol> &sig, const std::vector<Inequality> &cs, OrderMode mode)
    {
        const bool quasi = mode == OrderMode::quasi;
        return for_each_filtering(sig, [&](const ArgumentFiltering &pi)
                                  {
            std::vector<std::pair<Term, Term>> filtered;
            for (const auto &c : cs)
                filtered.emplace_back(ref_filter(pi, c.lhs), ref_filter(pi, c.rhs));
            return for_each_ranking(sig.size(), [&](const std::vector<unsigned> &rank) {
                RefPrecedence p = ref_filtered_precedence(sig, rank, quasi, pi);
                for (std::size_t k = 0; k < cs.size(); ++k)
                {
                    bool ok = cs[k].strict ? ref_gt(p, filtered[k].first, filtered[k].second)
                                           : ref_ge(p, filtered[k].first, filtered[k].second);
                    if (!ok)
                        return false;
                }
                return true;
            }); });
    }

    // ------------------------------------------------------------------
    // Random instances.

    struct RandomSignature
    {
        std::vector<Symbol> symbols;
    };

    /// 1..max_symbols symbols with arities in 0..max_arity; at least one constant so ground terms exist.
    inline std::vector<Symbol> random_signature(std::mt19937_64 &rng, std::size_t max_symbols, std::size_t max_arity,
                                                const std::string &prefix = "f")
    {
        std::uniform_int_distribution<std::size_t> count(1, max_symbols), ar(0, max_arity);
        const std::size_t n = count(rng);
        std::vector<Symbol> sig;
        for (std::size_t i = 0; i < n; ++i)
        {
            std::size_t a = i == 0 ? 0 : ar(rng);
            sig.push_back(Symbol::intern(prefix + std::to_string(i) + "_" + std::to_string(a), a));
        }
        std::shuffle(sig.begin(), sig.end(), rng);
        return sig;
    }

    inline Term random_term(std::mt19937_64 &rng, const std::vector<Symbol> &sig, std::size_t depth,
                            std::size_t num_vars = 2)
    {
        static const char *names[] = {"x", "y", "z", "w"};
        std::uniform_int_distribution<std::size_t> pick_sym(0, sig.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_var(0, num_vars - 1);
        std::bernoulli_distribution use_var(depth == 0 ? 0.5 : 0.2);
        if (num_vars > 0 && use_var(rng))
        {
            std::size_t k = pick_var(rng);
            return Term::var(static_cast<VarId>(k + 1), names[k % 4]);
        }
        std::vector<Symbol> allowed;
        for (auto f : sig)
            if (depth > 0 || f.arity() == 0)
                allowed.push_back(f);
        if (allowed.empty())
        {
            std::size_t k = pick_var(rng);
            return Term::var(static_cast<VarId>(k + 1), names[k % 4]);
        }
        std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
        Symbol f = allowed[pick(rng)];
        std::vector<Term> args;
        for (std::size_t i = 0; i < f.arity(); ++i)
            args.push_back(random_term(rng, sig, depth - 1, num_vars));
        return Term::app(f, std::move(args));
    }

    /// Symbols occurring in the inequalities, in first-occurrence order.
    inline std::vector<Symbol> symbols_of(const std::vector<Inequality> &cs)
    {
        std::vector<Symbol> out;
        for (const auto &c : cs)
        {
            collect_symbols(c.lhs, out);
            collect_symbols(c.rhs, out);
        }
        return out;
    }

    // ------------------------------------------------------------------
    // The SAT path for a set of inequalities.

    struct SatOutcome
    {
        bool sat = false;
        Witness witness;
        Var vars = 0;
    };

    inline SatOutcome solve_inequalities(const std::vector<Symbol> &sig, const std::vector<Inequality> &cs,
                                         OrderMode mode, bool identity = false, bool propagate = true)
    {
        FormulaStore store;
        Encoder enc(store, Encoder::Options{mode, propagate, identity});
        std::vector<NodeId> parts;
        for (const auto &c : cs)
            parts.push_back(c.strict ? enc.gt(c.lhs, c.rhs) : enc.ge(c.lhs, c.rhs));
        NodeId root = store.conj(parts);
        VarMap vars(sig, 0, {});
        Lowered low = lower_atoms(store, root, vars, mode, identity);
        std::vector<NodeId> roots{low.root, low.structural};
        Cnf cnf = tseitin_cnf(store, roots, vars);
        SolveResult r = solve_internal(cnf);
        if (r.status == SatStatus::unknown)
            throw std::runtime_error("internal solver returned unknown without deadline");
        SatOutcome out;
        out.vars = cnf.num_vars;
        if (r.status == SatStatus::sat)
        {
            out.sat = true;
            out.witness = decode_model(r.model, vars);
        }
        return out;
    }

    // ------------------------------------------------------------------
    // Random propositional formulas over prop atoms 1..n.

    inline NodeId random_formula(std::mt19937_64 &rng, FormulaStore &store, std::size_t n, std::size_t depth)
    {
        std::uniform_int_distribution<std::size_t> pv(1, n);
        std::uniform_int_distribution<int> op(0, depth == 0 ? 0 : 7);
        switch (op(rng))
        {
        case 0:
        case 1:
        {
            NodeId a = store.atom(Atom::prop(pv(rng)));
            return std::bernoulli_distribution(0.3)(rng) ? store.negate(a) : a;
        }
        case 2:
            return store.negate(random_formula(rng, store, n, depth - 1));
        case 3:
        case 4:
        {
            std::vector<NodeId> kids;
            std::size_t k = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
            for (std::size_t i = 0; i < k; ++i)
                kids.push_back(random_formula(rng, store, n, depth - 1));
            return store.conj(kids);
        }
        case 5:
        {
            std::vector<NodeId> kids;
            std::size_t k = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
            for (std::size_t i = 0; i < k; ++i)
                kids.push_back(random_formula(rng, store, n, depth - 1));
            return store.disj(kids);
        }
        case 6:
            return store.implies(random_formula(rng, store, n, depth - 1), random_formula(rng, store, n, depth - 1));
        default:
            return store.iff(random_formula(rng, store, n, depth - 1), random_formula(rng, store, n, depth - 1));
        }
    }

    /// Evaluate a formula over prop atoms with the bits of `mask` (prop i is bit i-1).
    inline bool eval_mask(const FormulaStore &store, NodeId root, unsigned mask)
    {
        return store.eval(root, [&](const Atom &a)
                          {
            if (a.kind != AtomKind::prop)
                throw std::logic_error("non-prop atom in propositional formula");
            return ((mask >> (a.index - 1)) & 1u) != 0; });
    }

    /// Evaluate a CNF under a total assignment (index 0 unused).
    inline bool cnf_holds(const Cnf &cnf, const Model &m)
    {
        for (const auto &c : cnf.clauses)
        {
            bool sat = false;
            for (Lit l : c)
                if (m[std::abs(l)] == (l > 0))
                {
                    sat = true;
                    break;
                }
            if (!sat)
                return false;
        }
        return true;
    }

    // ------------------------------------------------------------------
    // Division, plain and with an if/ge helper.

    inline Trs division_trs()
    {
        return parse_trs(R"((VAR x y)
(RULES
  minus(x, 0) -> x
  minus(s(x), s(y)) -> minus(x, y)
  quot(0, s(y)) -> 0
  quot(s(x), s(y)) -> s(quot(minus(x, y), s(y)))
))");
    }

    inline Trs division_if_trs()
    {
        return parse_trs(R"((VAR x y)
(RULES
  minus(x, 0) -> x
  minus(s(x), s(y)) -> minus(x, y)
  ge(x, 0) -> true
  ge(0, s(y)) -> false
  ge(s(x), s(y)) -> ge(x, y)
  div(x, y) -> if(ge(x, y), x, y)
  if(true, s(x), s(y)) -> s(div(minus(x, y), s(y)))
  if(false, x, s(y)) -> 0
))");
    }

} // namespace tf_test
