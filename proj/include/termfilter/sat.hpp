#pragma once

#include "termfilter/formula.hpp"
#include "termfilter/order.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace termfilter
{

    /// DIMACS-style variable: 1-based, literal sign is polarity.
    using Var = int;
    using Lit = int;

    /**
     * Numbering of propositional variables for one encoding.
     *
     * Order: precedence bits for each symbol (signature order, least
     * significant bit first), then list_f and arg_f^1..n per symbol, then
     * strict(p) per pair, then u_f per usable symbol, then definition
     * variables handed out by fresh().
     */
    class VarMap
    {
    public:
        VarMap(std::span<const Symbol> signature, std::size_t pair_count, std::span<const Symbol> usable_symbols);

        /// k = max(1, ceil(log2 |F|))
        std::size_t bit_width() const { return bits_; }
        const std::vector<Symbol> &signature() const { return signature_; }
        const std::vector<Symbol> &usable_symbols() const { return usable_; }
        std::size_t pair_count() const { return pair_count_; }

        /// Bit b of f's rank, b in 1..k (b = k is the most significant).
        Var bit(Symbol f, std::size_t b) const;
        Var list(Symbol f) const;
        Var arg(Symbol f, std::size_t i) const;
        Var strict(std::size_t pair) const;
        Var usable(Symbol f) const;

        bool has_symbol(Symbol f) const { return index_.count(f) != 0; }
        bool has_usable(Symbol f) const;

        Var fresh() { return ++count_; }
        Var count() const { return count_; }
        /// Variables that carry meaning (everything before the definition variables).
        Var named_count() const { return named_; }

        /// Human-readable name of a variable, for manifests.
        std::string describe(Var v) const;

    private:
        std::size_t symbol_index(Symbol f) const;

        std::vector<Symbol> signature_;
        std::vector<Symbol> usable_;
        std::unordered_map<Symbol, std::size_t, SymbolHash> index_;
        std::size_t bits_;
        std::size_t pair_count_;
        std::vector<Var> bit_base_, list_var_;
        Var strict_base_ = 0, usable_base_ = 0;
        Var named_ = 0;
        Var count_ = 0;
    };

    struct Lowered
    {
        NodeId root;
        /// Well-formedness of the filtering variables: not list_f -> exactly one arg_f^i.
        NodeId structural;
    };

    /**
     * Replace partial-order and filtering atoms by formulas over `prop`
     * atoms numbered by `vars`. po_eq in strict mode is an invariant
     * violation and throws std::logic_error.
     */
    Lowered lower_atoms(FormulaStore &store, NodeId root, const VarMap &vars, OrderMode mode,
                        bool identity_filtering = false);

    /// ||f > g||_k over the given bit variables (index 0 = least significant).
    NodeId bits_greater(FormulaStore &store, std::span<const Var> f, std::span<const Var> g);
    /// ||f ~ g||_k
    NodeId bits_equal(FormulaStore &store, std::span<const Var> f, std::span<const Var> g);

    struct Cnf
    {
        Var num_vars = 0;
        std::vector<std::vector<Lit>> clauses;
    };

    /**
     * Tseitin transformation of the conjunction of `roots` (formulas over
     * prop atoms only). One definition variable per distinct non-atom node;
     * fresh variables come from `vars`.
     */
    Cnf tseitin_cnf(const FormulaStore &store, std::span<const NodeId> roots, VarMap &vars);

    /// Tseitin without a VarMap: prop atoms must be numbered 1..first_free-1.
    Cnf tseitin_cnf(const FormulaStore &store, std::span<const NodeId> roots, Var first_free);

    void write_dimacs(std::ostream &os, const Cnf &cnf, std::span<const std::string> comments = {});
    Cnf read_dimacs(std::istream &is);

    /// Total assignment; index 0 unused.
    using Model = std::vector<bool>;

    class DecodeError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Witness
    {
        Precedence precedence;
        ArgumentFiltering filtering;
        std::vector<std::size_t> strict_pairs;
        std::vector<Symbol> usable;
    };

    /**
     * Read (precedence, filtering, strict pairs, usable symbols) off a
     * model. Ranks are compressed to 1..|F| preserving their order.
     * Throws DecodeError if a collapsed symbol does not have exactly one
     * argument selected.
     */
    Witness decode_model(const Model &model, const VarMap &vars);

} // namespace termfilter
