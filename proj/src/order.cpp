#include "termfilter/order.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace termfilter
{

    const char *to_string(OrderMode m)
    {
        return m == OrderMode::strict ? "lpo" : "qlpo";
    }

    unsigned Precedence::rank(Symbol f) const
    {
        auto it = rank_.find(f);
        if (it == rank_.end())
            throw std::out_of_range("precedence has no rank for '" + f.name() + "'");
        return it->second;
    }

    std::string Precedence::describe(std::span<const Symbol> signature) const
    {
        std::map<unsigned, std::vector<Symbol>, std::greater<>> groups;
        for (auto f : signature)
            if (contains(f))
                groups[rank(f)].push_back(f);
        std::ostringstream os;
        bool first = true;
        for (const auto &[r, syms] : groups)
        {
            if (!first)
                os << " > ";
            first = false;
            if (syms.size() == 1)
            {
                os << syms.front().name();
                continue;
            }
            os << '{';
            for (std::size_t i = 0; i < syms.size(); ++i)
                os << (i ? ", " : "") << syms[i].name();
            os << '}';
        }
        return os.str();
    }

    bool Filter::keeps(std::size_t i) const
    {
        if (collapse)
            return position == i;
        return std::find(keep.begin(), keep.end(), i) != keep.end();
    }

    std::string to_string(const Filter &f)
    {
        if (f.collapse)
            return std::to_string(f.position);
        std::string s = "[";
        for (std::size_t i = 0; i < f.keep.size(); ++i)
            s += (i ? "," : "") + std::to_string(f.keep[i]);
        return s + "]";
    }

    void ArgumentFiltering::set(Symbol f, Filter filter)
    {
        if (filter.collapse)
        {
            if (filter.position < 1 || filter.position > f.arity())
                throw std::invalid_argument("collapsing position out of range for '" + f.name() + "'");
        }
        else
        {
            for (std::size_t k = 0; k < filter.keep.size(); ++k)
            {
                std::size_t p = filter.keep[k];
                if (p < 1 || p > f.arity() || (k > 0 && filter.keep[k - 1] >= p))
                    throw std::invalid_argument("invalid kept positions for '" + f.name() + "'");
            }
        }
        map_[f] = std::move(filter);
    }

    const Filter &ArgumentFiltering::at(Symbol f) const
    {
        auto it = map_.find(f);
        if (it == map_.end())
            throw std::out_of_range("argument filtering does not cover '" + f.name() + "'");
        return it->second;
    }

    ArgumentFiltering ArgumentFiltering::identity(std::span<const Symbol> signature)
    {
        ArgumentFiltering pi;
        for (auto f : signature)
        {
            std::vector<std::size_t> all(f.arity());
            for (std::size_t i = 0; i < all.size(); ++i)
                all[i] = i + 1;
            pi.set(f, Filter::keep_positions(std::move(all)));
        }
        return pi;
    }

    std::string ArgumentFiltering::describe(std::span<const Symbol> signature) const
    {
        std::ostringstream os;
        for (auto f : signature)
            if (contains(f))
                os << "pi(" << f.name() << ") = " << to_string(at(f)) << '\n';
        return os.str();
    }

    Term apply_filtering(const ArgumentFiltering &pi, const Term &t)
    {
        if (t.is_var())
            return t;
        const Filter &flt = pi.at(t.symbol());
        if (flt.collapse)
            return apply_filtering(pi, t.arg(flt.position - 1));
        std::vector<Term> args;
        args.reserve(flt.keep.size());
        for (std::size_t p : flt.keep)
            args.push_back(apply_filtering(pi, t.arg(p - 1)));
        return Term::app(t.symbol(), std::move(args));
    }

    // ---------------------------------------------------------------------

    namespace
    {
        using MemoKey = std::tuple<const void *, const void *, int>;

        class PlainLpo
        {
        public:
            PlainLpo(const Precedence &prec, OrderMode mode) : prec_(prec), mode_(mode) {}

            bool equiv(const Term &s, const Term &t) const
            {
                if (s.is_var() || t.is_var())
                    return s.is_var() && t.is_var() && s.var_id() == t.var_id();
                if (s.args().size() != t.args().size() || !prec_.equivalent(s.symbol(), t.symbol(), mode_))
                    return false;
                for (std::size_t i = 0; i < s.args().size(); ++i)
                    if (!equiv(s.arg(i), t.arg(i)))
                        return false;
                return true;
            }

            bool ge(const Term &s, const Term &t) { return equiv(s, t) || gt(s, t); }

            bool gt(const Term &s, const Term &t)
            {
                if (s.is_var())
                    return false;
                MemoKey key{s.identity(), t.identity(), 0};
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second;
                bool result = compute_gt(s, t);
                memo_.emplace(key, result);
                return result;
            }

        private:
            bool compute_gt(const Term &s, const Term &t)
            {
                for (const auto &si : s.args())
                    if (ge(si, t))
                        return true;
                if (t.is_var())
                    return false;
                for (const auto &tj : t.args())
                    if (!gt(s, tj))
                        return false;
                Symbol f = s.symbol(), g = t.symbol();
                if (f != g && prec_.greater(f, g))
                    return true;
                return prec_.equivalent(f, g, mode_) && lex_gt(s.args(), t.args());
            }

            bool lex_gt(std::span<const Term> ss, std::span<const Term> ts)
            {
                for (std::size_t i = 0;; ++i)
                {
                    if (i == ss.size())
                        return false;
                    if (i == ts.size())
                        return true;
                    if (gt(ss[i], ts[i]))
                        return true;
                    if (!equiv(ss[i], ts[i]))
                        return false;
                }
            }

            const Precedence &prec_;
            OrderMode mode_;
            std::map<MemoKey, bool> memo_;
        };

        enum Rel
        {
            rel_gt = 1,
            rel_ge = 2
        };

        class FilteredLpo
        {
        public:
            FilteredLpo(const Precedence &prec, const ArgumentFiltering &pi, OrderMode mode)
                : prec_(prec), pi_(pi), mode_(mode)
            {
            }

            bool gt(const Term &s, const Term &t) { return memoized(s, t, rel_gt); }
            bool ge(const Term &s, const Term &t) { return memoized(s, t, rel_ge); }

        private:
            bool memoized(const Term &s, const Term &t, Rel rel)
            {
                MemoKey key{s.identity(), t.identity(), rel};
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second;
                bool result = rel == rel_gt ? compute_gt(s, t) : compute_ge(s, t);
                memo_.emplace(key, result);
                return result;
            }

            // x >=pi g(t..) iff pi(g) = j and x >=pi t_j;  x >=pi x
            bool var_ge(const Term &x, const Term &t)
            {
                if (t.is_var())
                    return t.var_id() == x.var_id();
                const Filter &ft = pi_.at(t.symbol());
                return ft.collapse && ge(x, t.arg(ft.position - 1));
            }

            bool compute_gt(const Term &s, const Term &t) { return s.is_var() ? false : compare(s, t, false); }

            bool compute_ge(const Term &s, const Term &t) { return s.is_var() ? var_ge(s, t) : compare(s, t, true); }

            bool compare(const Term &s, const Term &t, bool weak)
            {
                const Filter &fs = pi_.at(s.symbol());
                // case 2
                if (fs.collapse)
                {
                    const Term &si = s.arg(fs.position - 1);
                    if (weak ? ge(si, t) : gt(si, t))
                        return true;
                }
                else
                {
                    for (std::size_t i : fs.keep)
                        if (ge(s.arg(i - 1), t))
                            return true;
                }
                if (t.is_var())
                    return false;
                const Filter &ft = pi_.at(t.symbol());
                // case 1(a)
                if (ft.collapse)
                {
                    const Term &tj = t.arg(ft.position - 1);
                    return weak ? ge(s, tj) : gt(s, tj);
                }
                // case 1(b)
                if (fs.collapse)
                    return false;
                for (std::size_t j : ft.keep)
                    if (!gt(s, t.arg(j - 1)))
                        return false;
                Symbol f = s.symbol(), g = t.symbol();
                if (f != g && prec_.greater(f, g))
                    return true;
                if (!prec_.equivalent(f, g, mode_))
                    return false;
                return lex(s, fs.keep, t, ft.keep, weak);
            }

            bool lex(const Term &s, const std::vector<std::size_t> &is, const Term &t,
                     const std::vector<std::size_t> &js, bool weak)
            {
                for (std::size_t k = 0;; ++k)
                {
                    if (k == is.size())
                        return weak && k == js.size();
                    if (k == js.size())
                        return true;
                    const Term &sk = s.arg(is[k] - 1);
                    const Term &tk = t.arg(js[k] - 1);
                    if (gt(sk, tk))
                        return true;
                    if (!ge(sk, tk))
                        return false;
                }
            }

            const Precedence &prec_;
            const ArgumentFiltering &pi_;
            OrderMode mode_;
            std::map<MemoKey, bool> memo_;
        };
    } // namespace

    bool lpo_equivalent(const Precedence &prec, OrderMode mode, const Term &s, const Term &t)
    {
        return PlainLpo(prec, mode).equiv(s, t);
    }

    bool lpo_gt(const Precedence &prec, OrderMode mode, const Term &s, const Term &t)
    {
        return PlainLpo(prec, mode).gt(s, t);
    }

    bool lpo_ge(const Precedence &prec, OrderMode mode, const Term &s, const Term &t)
    {
        return PlainLpo(prec, mode).ge(s, t);
    }

    bool lpo_af_gt(const Precedence &prec, const ArgumentFiltering &pi, OrderMode mode, const Term &s,
                   const Term &t)
    {
        return FilteredLpo(prec, pi, mode).gt(s, t);
    }

    bool lpo_af_ge(const Precedence &prec, const ArgumentFiltering &pi, OrderMode mode, const Term &s,
                   const Term &t)
    {
        return FilteredLpo(prec, pi, mode).ge(s, t);
    }

} // namespace termfilter
