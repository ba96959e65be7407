#pragma once

#include "termfilter/term.hpp"

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace termfilter
{

    /**
     * strict: >_F is a strict order, ~ is syntactic identity.
     * quasi:  symbols of equal rank are equivalent.
     */
    enum class OrderMode
    {
        strict,
        quasi
    };

    const char *to_string(OrderMode m);

    /**
     * Precedence given by natural-number ranks: f >_F g iff rank(f) > rank(g).
     *
     * Equal ranks on distinct symbols mean "equivalent" in quasi mode and
     * "incomparable" in strict mode.
     */
    class Precedence
    {
    public:
        Precedence() = default;

        void set_rank(Symbol f, unsigned rank) { rank_[f] = rank; }
        unsigned rank(Symbol f) const;
        bool contains(Symbol f) const { return rank_.count(f) != 0; }

        bool greater(Symbol f, Symbol g) const { return rank(f) > rank(g); }
        bool equivalent(Symbol f, Symbol g, OrderMode mode) const
        {
            return f == g || (mode == OrderMode::quasi && rank(f) == rank(g));
        }

        /// Rank groups from highest to lowest, e.g. "QUOT# > MINUS# > {minus, s}".
        std::string describe(std::span<const Symbol> signature) const;

    private:
        std::unordered_map<Symbol, unsigned, SymbolHash> rank_;
    };

    /// pi(f): either collapse to one position or keep a sorted list of positions (1-based).
    struct Filter
    {
        bool collapse = false;
        std::size_t position = 0;
        std::vector<std::size_t> keep;

        static Filter collapse_to(std::size_t i) { return Filter{true, i, {}}; }
        static Filter keep_positions(std::vector<std::size_t> ps) { return Filter{false, 0, std::move(ps)}; }

        bool keeps(std::size_t i) const;

        friend bool operator==(const Filter &a, const Filter &b)
        {
            return a.collapse == b.collapse && a.position == b.position && a.keep == b.keep;
        }
    };

    std::string to_string(const Filter &f);

    class ArgumentFiltering
    {
    public:
        ArgumentFiltering() = default;

        /// Throws std::invalid_argument on positions outside 1..arity or unsorted lists.
        void set(Symbol f, Filter filter);
        const Filter &at(Symbol f) const;
        bool contains(Symbol f) const { return map_.count(f) != 0; }

        static ArgumentFiltering identity(std::span<const Symbol> signature);

        /// "pi(f) = ..." lines in signature order.
        std::string describe(std::span<const Symbol> signature) const;

    private:
        std::unordered_map<Symbol, Filter, SymbolHash> map_;
    };

    /// pi(t). Filtered applications keep their symbol with fewer arguments.
    Term apply_filtering(const ArgumentFiltering &pi, const Term &t);

    /// s ~ t: equal up to equivalent symbols, argumentwise.
    bool lpo_equivalent(const Precedence &prec, OrderMode mode, const Term &s, const Term &t);

    /// s >_LPO t on plain (possibly filtered) terms.
    bool lpo_gt(const Precedence &prec, OrderMode mode, const Term &s, const Term &t);

    /// s >=_LPO t, i.e. s >_LPO t or s ~ t.
    bool lpo_ge(const Precedence &prec, OrderMode mode, const Term &s, const Term &t);

    /// The induced order modulo pi, evaluated directly on unfiltered terms.
    bool lpo_af_gt(const Precedence &prec, const ArgumentFiltering &pi, OrderMode mode, const Term &s,
                   const Term &t);
    bool lpo_af_ge(const Precedence &prec, const ArgumentFiltering &pi, OrderMode mode, const Term &s,
                   const Term &t);

} // namespace termfilter
