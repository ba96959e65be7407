#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace termfilter
{

    enum class SymbolKind : std::uint8_t
    {
        base,
        tuple
    };

    struct SymbolData
    {
        std::string name;
        std::size_t arity;
        SymbolKind kind;
    };

    /**
     * Handle to an interned function symbol.
     *
     * Symbols are interned process-wide on (name, arity, kind), so two
     * handles compare equal iff they denote the same symbol. Interned data
     * lives for the whole process and is never mutated.
     */
    class Symbol
    {
    public:
        Symbol() = default;

        static Symbol intern(std::string_view name, std::size_t arity, SymbolKind kind = SymbolKind::base);

        const std::string &name() const { return data_->name; }
        std::size_t arity() const { return data_->arity; }
        SymbolKind kind() const { return data_->kind; }
        bool is_tuple() const { return data_->kind == SymbolKind::tuple; }
        bool valid() const { return data_ != nullptr; }

        /// The tuple symbol F# marking calls to this (defined) symbol.
        Symbol tuple() const;

        friend bool operator==(Symbol a, Symbol b) { return a.data_ == b.data_; }
        friend bool operator!=(Symbol a, Symbol b) { return a.data_ != b.data_; }

        std::size_t hash() const { return std::hash<const void *>{}(data_); }

    private:
        explicit Symbol(const SymbolData *d) : data_(d) {}
        const SymbolData *data_ = nullptr;
    };

    /// Orders symbols by (name, arity, kind); stable across runs.
    struct SymbolLess
    {
        bool operator()(Symbol a, Symbol b) const;
    };

    struct SymbolHash
    {
        std::size_t operator()(Symbol s) const { return s.hash(); }
    };

    using VarId = std::uint32_t;

    class Term;

    struct TermNode
    {
        bool is_var;
        VarId var;
        std::string var_name;
        Symbol fun;
        std::vector<Term> args;
        std::size_t hash;
        std::size_t size;
    };

    /**
     * Immutable first-order term: a variable or a function application.
     *
     * Terms are cheap to copy (shared node). Well-formed terms have
     * args().size() == symbol().arity(); terms produced by argument
     * filtering keep the original symbol with fewer arguments.
     */
    class Term
    {
    public:
        Term() = default;

        static Term var(VarId id, std::string name);
        static Term app(Symbol f, std::vector<Term> args);

        bool is_var() const { return node_->is_var; }
        VarId var_id() const { return node_->var; }
        const std::string &var_name() const { return node_->var_name; }
        Symbol symbol() const { return node_->fun; }
        std::span<const Term> args() const { return node_->args; }
        const Term &arg(std::size_t i) const { return node_->args[i]; }
        std::size_t hash() const { return node_->hash; }
        std::size_t size() const { return node_->size; }
        bool valid() const { return node_ != nullptr; }
        const void *identity() const { return node_.get(); }

        friend bool operator==(const Term &a, const Term &b);
        friend bool operator!=(const Term &a, const Term &b) { return !(a == b); }

    private:
        std::shared_ptr<const TermNode> node_;
    };

    struct TermHash
    {
        std::size_t operator()(const Term &t) const { return t.hash(); }
    };

    std::string to_string(const Term &t);
    std::ostream &operator<<(std::ostream &os, const Term &t);

    /// Variables of t in left-to-right first-occurrence order.
    std::vector<VarId> variables(const Term &t);
    bool occurs(VarId v, const Term &t);
    VarId max_var_id(const Term &t);
    /// Symbols of t in pre-order first-occurrence order.
    void collect_symbols(const Term &t, std::vector<Symbol> &out);
    /// Subterms in pre-order (leftmost-outermost first).
    void subterms(const Term &t, std::vector<Term> &out);

    struct Rule
    {
        Term lhs;
        Term rhs;

        friend bool operator==(const Rule &a, const Rule &b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
    };

    std::string to_string(const Rule &r);

    /**
     * An ordered rewrite system together with its signature.
     *
     * The signature lists symbols in first-occurrence order; this order is
     * what the encoder uses to number propositional variables.
     */
    class Trs
    {
    public:
        Trs() = default;
        /// Signature is inferred from the rules; throws TrsError on arity clashes.
        explicit Trs(std::vector<Rule> rules);
        Trs(std::vector<Rule> rules, std::vector<Symbol> signature);

        const std::vector<Rule> &rules() const { return rules_; }
        const std::vector<Symbol> &signature() const { return signature_; }
        bool empty() const { return rules_.empty(); }
        std::size_t size() const { return rules_.size(); }

        /// Rls_R(f): rules whose lhs root is f.
        std::vector<Rule> rules_of(Symbol f) const;

        /// Largest variable id used by any rule.
        VarId max_var_id() const;

    private:
        std::vector<Rule> rules_;
        std::vector<Symbol> signature_;
    };

    /// Root symbols of left-hand sides (D_R) in signature order.
    std::vector<Symbol> defined_symbols(const Trs &trs);
    bool is_defined(const Trs &trs, Symbol f);

    /// Merge signatures preserving first-occurrence order.
    std::vector<Symbol> merge_signatures(std::span<const Symbol> a, std::span<const Symbol> b);

    // ---------------------------------------------------------------------
    // Substitutions and unification

    using Substitution = std::map<VarId, Term>;

    Term apply(const Substitution &sigma, const Term &t);

    /**
     * Most general unifier of s and t with occurs-check.
     *
     * The returned substitution is idempotent. Callers rename the terms
     * apart beforehand if their variables are meant to be distinct.
     */
    std::optional<Substitution> unify(const Term &s, const Term &t);

    /// Hands out variable ids that are unused by anything seen so far.
    class VarSupply
    {
    public:
        explicit VarSupply(VarId next = 0) : next_(next) {}
        void reserve_above(VarId v)
        {
            if (v >= next_)
                next_ = v + 1;
        }
        Term fresh(std::string_view hint = "z");
        VarId peek() const { return next_; }

    private:
        VarId next_;
    };

    /// Replace every variable occurrence by a distinct fresh variable.
    Term rename_linear(const Term &t, VarSupply &supply);

    // ---------------------------------------------------------------------
    // TPDB parsing

    class TrsError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            syntax,
            arity_mismatch,
            variable_lhs,
            unbound_rhs_variable,
            unsupported_block
        };

        TrsError(Kind kind, const std::string &msg, std::size_t line = 0, std::size_t column = 0);

        Kind kind() const { return kind_; }
        std::size_t line() const { return line_; }
        std::size_t column() const { return column_; }

    private:
        Kind kind_;
        std::size_t line_;
        std::size_t column_;
    };

    /// Parse a rewrite system in the legacy TPDB `.trs` format.
    Trs parse_trs(std::string_view text);

    /// Pretty print in the same format; parse_trs(print_trs(R)) reproduces R.
    std::string print_trs(const Trs &trs);

} // namespace termfilter
