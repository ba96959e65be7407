#pragma once

#include "termfilter/dp.hpp"
#include "termfilter/formula.hpp"
#include "termfilter/order.hpp"

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace termfilter
{

    enum class ProcessorKind
    {
        thm5,  ///< all usable rules U(P,R) weakly decreasing
        thm12  ///< only usable rules modulo the filtering
    };

    const char *to_string(ProcessorKind k);

    /**
     * Encoding session: builds tau(s > t) / tau(s >= t) over partial-order and
     * filtering atoms into a FormulaStore.
     *
     * With `propagate` on, the encoder tracks atoms that must hold on the
     * current branch of the top-down construction and replaces them (and
     * atoms they decide) by constants; branches whose guard becomes false
     * are not built at all. Results are memoised per (s, t, relation,
     * context). A session is single-threaded.
     */
    class Encoder
    {
    public:
        struct Options
        {
            OrderMode mode = OrderMode::strict;
            bool propagate = true;
            /// Pin pi to the identity: plain LPO without filtering.
            bool identity_filtering = false;
        };

        Encoder(FormulaStore &store, Options opts);

        FormulaStore &store() { return store_; }
        const Options &options() const { return opts_; }

        NodeId gt(const Term &s, const Term &t);
        NodeId ge(const Term &s, const Term &t);

        /// Lexicographic comparison for one symbol f from argument position `start` (1-based).
        NodeId lex_same(Symbol f, std::span<const Term> ss, std::span<const Term> ts, std::size_t start, bool weak);

        /// Lexicographic comparison between distinct equivalent symbols f ~ g (quasi mode).
        NodeId lex_mixed(Symbol f, Symbol g, std::span<const Term> ss, std::span<const Term> ts, bool weak);

        /// Atom node, folded to a constant when the current context decides it.
        NodeId atom(const Atom &a);

        /// Truth value of `a` implied by the current context, if any.
        std::optional<bool> known(const Atom &a) const;

        /// Scoped assumption: `a` holds with value `value` while alive.
        class Assume
        {
        public:
            Assume(Encoder &enc, const Atom &a, bool value = true);
            ~Assume();
            Assume(const Assume &) = delete;
            Assume &operator=(const Assume &) = delete;

        private:
            Encoder *enc_;
            bool pushed_;
        };

    private:
        NodeId compare(const Term &s, const Term &t, bool weak);
        NodeId case_collapse_right(const Term &s, const Term &t, bool weak);
        NodeId case_same_shape(const Term &s, const Term &t, bool weak);
        NodeId case_subterm(const Term &s, const Term &t, bool weak);
        NodeId var_ge(const Term &x, const Term &t);

        std::optional<bool> fact(const Atom &a) const;

        struct MemoKey
        {
            Term s;
            Term t;
            bool weak;
            std::size_t context;
            friend bool operator==(const MemoKey &a, const MemoKey &b)
            {
                return a.s.identity() == b.s.identity() && a.t.identity() == b.t.identity() && a.weak == b.weak &&
                       a.context == b.context;
            }
        };
        struct MemoHash
        {
            std::size_t operator()(const MemoKey &k) const;
        };

        FormulaStore &store_;
        Options opts_;
        std::vector<std::pair<Atom, bool>> facts_;
        std::size_t context_hash_ = 0;
        std::unordered_map<MemoKey, NodeId, MemoHash> memo_;
    };

    struct EncodingConfig
    {
        ProcessorKind processor = ProcessorKind::thm12;
        OrderMode mode = OrderMode::strict;
        bool propagate = true;
        bool identity_filtering = false;
    };

    struct RpEncoding
    {
        NodeId root;
        /// Symbols of P and of the classical usable rules, in order.
        std::vector<Symbol> signature;
        /// Symbols carrying a u_f atom (defined symbols of U(P,R)); empty for thm5.
        std::vector<Symbol> usable_symbols;
        std::size_t pair_count = 0;
    };

    /**
     * The reduction-pair constraint for (P, R):
     *   usable part /\ every pair weakly decreasing /\ some strict(p)
     *   /\ (strict(p) <-> tau(s_p > t_p)) for every pair p.
     * The usable part is all of U(P,R) weakly decreasing (thm5) or omega (thm12).
     */
    RpEncoding encode_rp_formula(FormulaStore &store, const DpProblem &problem, const EncodingConfig &cfg);

} // namespace termfilter
