#include "termfilter/usable.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace termfilter
{

    namespace
    {
        std::set<Symbol, SymbolLess> reachable_symbols(const Trs &pairs, const Trs &rules)
        {
            std::set<Symbol, SymbolLess> seen;
            std::vector<Symbol> work;
            for (const auto &p : pairs.rules())
                collect_symbols(p.rhs, work);
            while (!work.empty())
            {
                Symbol f = work.back();
                work.pop_back();
                if (!seen.insert(f).second)
                    continue;
                for (const auto &r : rules.rules_of(f))
                {
                    std::vector<Symbol> syms;
                    collect_symbols(r.rhs, syms);
                    for (auto g : syms)
                        if (!seen.count(g))
                            work.push_back(g);
                }
            }
            return seen;
        }

        /// R minus the rules of every symbol in `removed`, kept as a sorted symbol list.
        using Removed = std::vector<Symbol>;

        Removed with(Removed removed, Symbol f)
        {
            auto pos = std::lower_bound(removed.begin(), removed.end(), f, SymbolLess{});
            if (pos == removed.end() || *pos != f)
                removed.insert(pos, f);
            return removed;
        }

        bool contains(const Removed &removed, Symbol f)
        {
            return std::binary_search(removed.begin(), removed.end(), f, SymbolLess{});
        }

        struct RemovedLess
        {
            bool operator()(const Removed &a, const Removed &b) const
            {
                return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), SymbolLess{});
            }
        };
    } // namespace

    UsableSet usable_rules(const Trs &pairs, const Trs &rules)
    {
        auto seen = reachable_symbols(pairs, rules);
        UsableSet out;
        for (const auto &r : rules.rules())
            if (seen.count(r.lhs.symbol()))
                out.push_back(r);
        return out;
    }

    std::vector<Symbol> usable_symbols(const Trs &pairs, const Trs &rules)
    {
        auto seen = reachable_symbols(pairs, rules);
        std::vector<Symbol> out;
        for (auto f : defined_symbols(rules))
            if (seen.count(f))
                out.push_back(f);
        return out;
    }

    UsableSet usable_rules_mod_pi(const Trs &pairs, const Trs &rules, const ArgumentFiltering &pi)
    {
        const auto &all = rules.rules();
        std::vector<bool> used(all.size(), false);
        struct VisitLess
        {
            bool operator()(const std::pair<const void *, Removed> &a, const std::pair<const void *, Removed> &b) const
            {
                if (a.first != b.first)
                    return std::less<const void *>{}(a.first, b.first);
                return RemovedLess{}(a.second, b.second);
            }
        };
        std::set<std::pair<const void *, Removed>, VisitLess> visited;

        std::function<void(const Term &, const Removed &)> go = [&](const Term &t, const Removed &removed)
        {
            if (t.is_var())
                return;
            if (!visited.emplace(t.identity(), removed).second)
                return;
            const Symbol f = t.symbol();
            const Removed smaller = with(removed, f);
            if (!contains(removed, f))
            {
                for (std::size_t k = 0; k < all.size(); ++k)
                    if (all[k].lhs.symbol() == f)
                    {
                        used[k] = true;
                        go(all[k].rhs, smaller);
                    }
            }
            const Filter &flt = pi.at(f);
            for (std::size_t i = 1; i <= t.args().size(); ++i)
                if (flt.keeps(i))
                    go(t.arg(i - 1), smaller);
        };

        for (const auto &p : pairs.rules())
            go(p.rhs, {});

        UsableSet out;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (used[k])
                out.push_back(all[k]);
        return out;
    }

    namespace
    {
        class OmegaBuilder
        {
        public:
            OmegaBuilder(const Trs &rules, Encoder &enc) : rules_(rules), enc_(enc) {}

            NodeId term(const Term &t, const Removed &removed)
            {
                if (t.is_var())
                    return enc_.store().top();
                auto key = std::make_pair(t, removed);
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second;

                FormulaStore &store = enc_.store();
                const Symbol f = t.symbol();
                std::vector<NodeId> parts;
                const bool defined = !contains(removed, f) && is_defined(rules_, f);
                const Removed below = defined ? with(removed, f) : removed;
                if (defined)
                {
                    parts.push_back(enc_.atom(Atom::usable(f)));
                    for (const auto &r : rules_.rules_of(f))
                        parts.push_back(term(r.rhs, below));
                }
                for (std::size_t i = 1; i <= t.args().size(); ++i)
                {
                    NodeId kept = enc_.atom(Atom::arg_in(f, i));
                    if (store.is_false(kept))
                        continue;
                    parts.push_back(store.implies(kept, term(t.arg(i - 1), below)));
                }
                NodeId r = store.conj(std::move(parts));
                memo_.emplace(std::move(key), r);
                return r;
            }

        private:
            struct KeyLess
            {
                bool operator()(const std::pair<Term, Removed> &a, const std::pair<Term, Removed> &b) const
                {
                    if (a.first.identity() != b.first.identity())
                        return std::less<const void *>{}(a.first.identity(), b.first.identity());
                    return RemovedLess{}(a.second, b.second);
                }
            };

            const Trs &rules_;
            Encoder &enc_;
            std::map<std::pair<Term, Removed>, NodeId, KeyLess> memo_;
        };
    } // namespace

    NodeId omega_term(const Term &t, const Trs &rules, Encoder &enc)
    {
        return OmegaBuilder(rules, enc).term(t, {});
    }

    NodeId omega(const Trs &pairs, const Trs &rules, Encoder &enc)
    {
        FormulaStore &store = enc.store();
        OmegaBuilder builder(rules, enc);
        std::vector<NodeId> parts;
        for (const auto &p : pairs.rules())
            parts.push_back(builder.term(p.rhs, {}));
        for (auto f : usable_symbols(pairs, rules))
        {
            std::vector<NodeId> oriented;
            for (const auto &r : rules.rules_of(f))
                oriented.push_back(enc.ge(r.lhs, r.rhs));
            parts.push_back(store.implies(enc.atom(Atom::usable(f)), store.conj(std::move(oriented))));
        }
        return store.conj(std::move(parts));
    }

} // namespace termfilter
