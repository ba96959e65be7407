#include "termfilter/encoder.hpp"

#include "termfilter/usable.hpp"

#include <map>

namespace termfilter
{

    const char *to_string(ProcessorKind k)
    {
        return k == ProcessorKind::thm5 ? "thm5" : "thm12";
    }

    namespace
    {
        std::size_t mix(std::size_t h, std::size_t v)
        {
            return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        }

        std::size_t fact_hash(const Atom &a, bool value)
        {
            return mix(a.hash(), value ? 0x2545f491 : 0x4f6cdd1d);
        }
    } // namespace

    std::size_t Encoder::MemoHash::operator()(const MemoKey &k) const
    {
        std::size_t h = mix(std::hash<const void *>{}(k.s.identity()), std::hash<const void *>{}(k.t.identity()));
        return mix(mix(h, k.weak), k.context);
    }

    Encoder::Encoder(FormulaStore &store, Options opts) : store_(store), opts_(opts) {}

    Encoder::Assume::Assume(Encoder &enc, const Atom &a, bool value) : enc_(&enc), pushed_(false)
    {
        if (!enc.opts_.propagate || enc.known(a).has_value())
            return;
        enc.facts_.emplace_back(a, value);
        enc.context_hash_ += fact_hash(a, value);
        pushed_ = true;
    }

    Encoder::Assume::~Assume()
    {
        if (!pushed_)
            return;
        auto [a, value] = enc_->facts_.back();
        enc_->context_hash_ -= fact_hash(a, value);
        enc_->facts_.pop_back();
    }

    std::optional<bool> Encoder::fact(const Atom &a) const
    {
        for (auto it = facts_.rbegin(); it != facts_.rend(); ++it)
            if (it->first == a)
                return it->second;
        return std::nullopt;
    }

    std::optional<bool> Encoder::known(const Atom &a) const
    {
        if (opts_.identity_filtering)
        {
            if (a.kind == AtomKind::list || a.kind == AtomKind::arg_in)
                return true;
            if (a.kind == AtomKind::collapse)
                return false;
        }
        if (a.kind == AtomKind::po_gt && a.f == a.g)
            return false;
        if (a.kind == AtomKind::po_eq && a.f == a.g)
            return true;
        if (!opts_.propagate)
            return std::nullopt;

        if (auto v = fact(a))
            return v;
        switch (a.kind)
        {
        case AtomKind::po_gt:
            if (fact(Atom::po_gt(a.g, a.f)) == true)
                return false;
            if (opts_.mode == OrderMode::quasi && fact(Atom::po_eq(a.f, a.g)) == true)
                return false;
            break;
        case AtomKind::po_eq:
            if (fact(Atom::po_gt(a.f, a.g)) == true || fact(Atom::po_gt(a.g, a.f)) == true)
                return false;
            break;
        case AtomKind::list:
            if (a.f.arity() == 0)
                return true;
            for (std::size_t i = 1; i <= a.f.arity(); ++i)
                if (fact(Atom::collapse(a.f, i)) == true)
                    return false;
            break;
        case AtomKind::arg_in:
            for (std::size_t i = 1; i <= a.f.arity(); ++i)
                if (fact(Atom::collapse(a.f, i)) == true)
                    return i == a.index;
            break;
        case AtomKind::collapse:
            if (fact(Atom::list(a.f)) == true || fact(Atom::arg_in(a.f, a.index)) == false)
                return false;
            for (std::size_t i = 1; i <= a.f.arity(); ++i)
                if (i != a.index && fact(Atom::collapse(a.f, i)) == true)
                    return false;
            break;
        default:
            break;
        }
        return std::nullopt;
    }

    NodeId Encoder::atom(const Atom &a)
    {
        if (auto v = known(a))
            return store_.constant(*v);
        return store_.atom(a);
    }

    NodeId Encoder::gt(const Term &s, const Term &t)
    {
        if (s.is_var() || s == t)
            return store_.bottom();
        MemoKey key{s, t, false, context_hash_};
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        NodeId r = compare(s, t, false);
        memo_.emplace(std::move(key), r);
        return r;
    }

    NodeId Encoder::ge(const Term &s, const Term &t)
    {
        if (s == t)
            return store_.top();
        MemoKey key{s, t, true, context_hash_};
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        NodeId r = s.is_var() ? var_ge(s, t) : compare(s, t, true);
        memo_.emplace(std::move(key), r);
        return r;
    }

    // x >= x, and x >= g(..) through a collapsing chain of g.
    NodeId Encoder::var_ge(const Term &x, const Term &t)
    {
        if (t.is_var())
            return store_.constant(t.var_id() == x.var_id());
        std::vector<NodeId> parts;
        for (std::size_t j = 1; j <= t.args().size(); ++j)
        {
            Atom c = Atom::collapse(t.symbol(), j);
            NodeId cn = atom(c);
            if (store_.is_false(cn))
                continue;
            Assume as(*this, c);
            parts.push_back(store_.conj(cn, ge(x, t.arg(j - 1))));
        }
        return store_.disj(std::move(parts));
    }

    NodeId Encoder::compare(const Term &s, const Term &t, bool weak)
    {
        NodeId a = case_collapse_right(s, t, weak);
        NodeId b = case_same_shape(s, t, weak);
        NodeId c = case_subterm(s, t, weak);
        return store_.disj({a, b, c});
    }

    // pi(g) = j and s > t_j  (s >= t_j when weak)
    NodeId Encoder::case_collapse_right(const Term &s, const Term &t, bool weak)
    {
        if (t.is_var())
            return store_.bottom();
        std::vector<NodeId> parts;
        for (std::size_t j = 1; j <= t.args().size(); ++j)
        {
            Atom c = Atom::collapse(t.symbol(), j);
            NodeId cn = atom(c);
            if (store_.is_false(cn))
                continue;
            Assume as(*this, c);
            const Term &tj = t.arg(j - 1);
            parts.push_back(store_.conj(cn, weak ? ge(s, tj) : gt(s, tj)));
        }
        return store_.disj(std::move(parts));
    }

    // neither side collapses; s dominates every kept t_j and wins on precedence or lex
    NodeId Encoder::case_same_shape(const Term &s, const Term &t, bool weak)
    {
        if (t.is_var())
            return store_.bottom();
        const Symbol f = s.symbol(), g = t.symbol();

        NodeId list_f = atom(Atom::list(f));
        if (store_.is_false(list_f))
            return store_.bottom();
        Assume assume_f(*this, Atom::list(f));
        NodeId list_g = atom(Atom::list(g));
        if (store_.is_false(list_g))
            return store_.bottom();
        Assume assume_g(*this, Atom::list(g));

        NodeId prec;
        if (f == g)
        {
            prec = lex_same(f, s.args(), t.args(), 1, weak);
        }
        else if (opts_.mode == OrderMode::strict)
        {
            prec = atom(Atom::po_gt(f, g));
        }
        else
        {
            NodeId greater = atom(Atom::po_gt(f, g));
            Atom eq = Atom::po_eq(f, g);
            NodeId eqn = atom(eq);
            NodeId equal = store_.bottom();
            if (!store_.is_false(eqn))
            {
                Assume as(*this, eq);
                equal = store_.conj(eqn, lex_mixed(f, g, s.args(), t.args(), weak));
            }
            prec = store_.disj(greater, equal);
        }
        if (store_.is_false(prec))
            return store_.bottom();

        std::vector<NodeId> parts{list_f, list_g, prec};
        for (std::size_t j = 1; j <= t.args().size(); ++j)
        {
            Atom kept = Atom::arg_in(g, j);
            NodeId kn = atom(kept);
            if (store_.is_false(kn))
                continue;
            Assume as(*this, kept);
            NodeId body = gt(s, t.arg(j - 1));
            if (store_.is_false(body) && store_.is_true(kn))
                return store_.bottom();
            parts.push_back(store_.implies(kn, body));
        }
        return store_.conj(std::move(parts));
    }

    // pi(f) = i and s_i > t (>= when weak), or f is not collapsed and some kept s_i >= t
    NodeId Encoder::case_subterm(const Term &s, const Term &t, bool weak)
    {
        const Symbol f = s.symbol();
        std::vector<NodeId> parts;
        for (std::size_t i = 1; i <= s.args().size(); ++i)
        {
            Atom c = Atom::collapse(f, i);
            NodeId cn = atom(c);
            if (store_.is_false(cn))
                continue;
            Assume as(*this, c);
            const Term &si = s.arg(i - 1);
            parts.push_back(store_.conj(cn, weak ? ge(si, t) : gt(si, t)));
        }
        NodeId list_f = atom(Atom::list(f));
        if (!store_.is_false(list_f))
        {
            Assume as(*this, Atom::list(f));
            std::vector<NodeId> some;
            for (std::size_t i = 1; i <= s.args().size(); ++i)
            {
                Atom kept = Atom::arg_in(f, i);
                NodeId kn = atom(kept);
                if (store_.is_false(kn))
                    continue;
                Assume inner(*this, kept);
                some.push_back(store_.conj(kn, ge(s.arg(i - 1), t)));
            }
            parts.push_back(store_.conj(list_f, store_.disj(std::move(some))));
        }
        return store_.disj(std::move(parts));
    }

    NodeId Encoder::lex_same(Symbol f, std::span<const Term> ss, std::span<const Term> ts, std::size_t start,
                             bool weak)
    {
        if (start > ss.size())
            return store_.constant(weak);
        Atom kept = Atom::arg_in(f, start);
        NodeId kn = atom(kept);
        if (store_.is_false(kn))
            return lex_same(f, ss, ts, start + 1, weak);
        const Term &si = ss[start - 1];
        const Term &ti = ts[start - 1];

        NodeId strictly, weakly;
        {
            Assume as(*this, kept);
            strictly = gt(si, ti);
            weakly = ge(si, ti);
        }
        NodeId rest = lex_same(f, ss, ts, start + 1, weak);
        return store_.disj(store_.conj(kn, strictly), store_.conj(store_.implies(kn, weakly), rest));
    }

    NodeId Encoder::lex_mixed(Symbol f, Symbol g, std::span<const Term> ss, std::span<const Term> ts, bool weak)
    {
        const std::size_t n = ss.size(), m = ts.size();
        std::map<std::pair<std::size_t, std::size_t>, NodeId> memo;

        // lam(i, j): kept suffix of ss from i vs kept suffix of ts from j
        std::function<NodeId(std::size_t, std::size_t)> lam = [&](std::size_t i, std::size_t j) -> NodeId
        {
            if (auto it = memo.find({i, j}); it != memo.end())
                return it->second;
            NodeId r;
            if (i > n)
            {
                if (!weak)
                {
                    r = store_.bottom();
                }
                else
                {
                    std::vector<NodeId> none;
                    for (std::size_t k = j; k <= m; ++k)
                        none.push_back(store_.negate(atom(Atom::arg_in(g, k))));
                    r = store_.conj(std::move(none));
                }
            }
            else if (j > m)
            {
                if (weak)
                {
                    r = store_.top();
                }
                else
                {
                    std::vector<NodeId> any;
                    for (std::size_t k = i; k <= n; ++k)
                        any.push_back(atom(Atom::arg_in(f, k)));
                    r = store_.disj(std::move(any));
                }
            }
            else
            {
                NodeId af = atom(Atom::arg_in(f, i));
                NodeId ag = atom(Atom::arg_in(g, j));
                NodeId skip_left = store_.conj(store_.negate(af), lam(i + 1, j));
                NodeId skip_right = store_.conj({af, store_.negate(ag), lam(i, j + 1)});
                NodeId next = lam(i + 1, j + 1);
                NodeId here = store_.bottom();
                if (!store_.is_false(af) && !store_.is_false(ag))
                {
                    Assume a1(*this, Atom::arg_in(f, i));
                    Assume a2(*this, Atom::arg_in(g, j));
                    const Term &si = ss[i - 1];
                    const Term &tj = ts[j - 1];
                    here = store_.conj({af, ag, store_.disj(gt(si, tj), store_.conj(ge(si, tj), next))});
                }
                r = store_.disj({skip_left, skip_right, here});
            }
            memo.emplace(std::make_pair(i, j), r);
            return r;
        };
        return lam(1, 1);
    }

    // ---------------------------------------------------------------------

    RpEncoding encode_rp_formula(FormulaStore &store, const DpProblem &problem, const EncodingConfig &cfg)
    {
        const auto &pairs = problem.pairs.rules();
        UsableSet usable = usable_rules(problem.pairs, problem.rules);

        RpEncoding out;
        out.pair_count = pairs.size();
        out.signature = problem.pairs.signature();
        for (const auto &r : usable)
        {
            std::vector<Symbol> syms;
            collect_symbols(r.lhs, syms);
            collect_symbols(r.rhs, syms);
            out.signature = merge_signatures(out.signature, syms);
        }

        Encoder enc(store, Encoder::Options{cfg.mode, cfg.propagate, cfg.identity_filtering});

        NodeId usable_part;
        if (cfg.processor == ProcessorKind::thm5)
        {
            std::vector<NodeId> parts;
            for (const auto &r : usable)
                parts.push_back(enc.ge(r.lhs, r.rhs));
            usable_part = store.conj(std::move(parts));
        }
        else
        {
            usable_part = omega(problem.pairs, problem.rules, enc);
            out.usable_symbols = usable_symbols(problem.pairs, problem.rules);
        }

        std::vector<NodeId> weak, some, defs;
        for (std::size_t p = 0; p < pairs.size(); ++p)
        {
            weak.push_back(enc.ge(pairs[p].lhs, pairs[p].rhs));
            NodeId strict = store.atom(Atom::strict(p));
            some.push_back(strict);
            defs.push_back(store.iff(strict, enc.gt(pairs[p].lhs, pairs[p].rhs)));
        }

        std::vector<NodeId> all{usable_part, store.conj(std::move(weak)), store.disj(std::move(some))};
        all.insert(all.end(), defs.begin(), defs.end());
        out.root = store.conj(std::move(all));
        return out;
    }

} // namespace termfilter
