#pragma once

#include "termfilter/encoder.hpp"
#include "termfilter/order.hpp"
#include "termfilter/term.hpp"

#include <vector>

namespace termfilter
{

    /// A subset of R, kept in R's rule order.
    using UsableSet = std::vector<Rule>;

    /// Classical usable rules U(P,R).
    UsableSet usable_rules(const Trs &pairs, const Trs &rules);

    /// Defined symbols of U(P,R) (roots of its left-hand sides), in R's signature order.
    std::vector<Symbol> usable_symbols(const Trs &pairs, const Trs &rules);

    /// Usable rules modulo an argument filtering, U_pi(P,R).
    UsableSet usable_rules_mod_pi(const Trs &pairs, const Trs &rules, const ArgumentFiltering &pi);

    /**
     * omega(P,R): every rhs of P forces u_f for the defined symbols it can
     * reach through kept argument positions, and each u_f demands that the
     * rules of f are weakly decreasing.
     */
    NodeId omega(const Trs &pairs, const Trs &rules, Encoder &enc);

    /// omega(t, R) for a single term (first conjunct family of omega(P,R)).
    NodeId omega_term(const Term &t, const Trs &rules, Encoder &enc);

} // namespace termfilter
