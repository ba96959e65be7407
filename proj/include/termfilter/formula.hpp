#pragma once

#include "termfilter/term.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace termfilter
{

    enum class AtomKind : std::uint8_t
    {
        po_gt,    ///< f >_F g
        po_eq,    ///< f ~_F g (quasi mode only)
        list,     ///< list(pi(f)): pi does not collapse f
        arg_in,   ///< pi(f) contains i
        collapse, ///< pi(f) = i
        usable,   ///< u_f: the rules of f are usable
        strict,   ///< pair number `index` is strictly decreasing
        prop      ///< plain propositional variable `index`
    };

    struct Atom
    {
        AtomKind kind;
        Symbol f;
        Symbol g;
        std::size_t index = 0;

        static Atom po_gt(Symbol f, Symbol g) { return {AtomKind::po_gt, f, g, 0}; }
        /// Arguments are normalised so that po_eq(f,g) == po_eq(g,f).
        static Atom po_eq(Symbol f, Symbol g);
        static Atom list(Symbol f) { return {AtomKind::list, f, {}, 0}; }
        static Atom arg_in(Symbol f, std::size_t i) { return {AtomKind::arg_in, f, {}, i}; }
        static Atom collapse(Symbol f, std::size_t i) { return {AtomKind::collapse, f, {}, i}; }
        static Atom usable(Symbol f) { return {AtomKind::usable, f, {}, 0}; }
        static Atom strict(std::size_t pair) { return {AtomKind::strict, {}, {}, pair}; }
        static Atom prop(std::size_t var) { return {AtomKind::prop, {}, {}, var}; }

        friend bool operator==(const Atom &a, const Atom &b)
        {
            return a.kind == b.kind && a.f == b.f && a.g == b.g && a.index == b.index;
        }
        std::size_t hash() const;
    };

    struct AtomHash
    {
        std::size_t operator()(const Atom &a) const { return a.hash(); }
    };

    std::string to_string(const Atom &a);

    enum class NodeKind : std::uint8_t
    {
        top,
        bottom,
        atom,
        negation,
        conj,
        disj,
        implies,
        iff
    };

    using NodeId = std::uint32_t;

    struct FormulaNode
    {
        NodeKind kind;
        Atom atom;
        std::vector<NodeId> kids;
    };

    /**
     * Arena of formula nodes forming a DAG.
     *
     * With `share` on, structurally equal nodes are interned to the same id.
     * With `simplify` on, constructors fold constants, flatten nested
     * conjunctions/disjunctions, drop duplicates and detect a /\ ~a.
     * Node ids are only meaningful relative to their store.
     */
    class FormulaStore
    {
    public:
        struct Options
        {
            bool simplify = true;
            bool share = true;
        };

        FormulaStore() : FormulaStore(Options{}) {}
        explicit FormulaStore(Options opts);

        const Options &options() const { return opts_; }

        NodeId top() const { return 0; }
        NodeId bottom() const { return 1; }
        NodeId constant(bool b) const { return b ? top() : bottom(); }

        NodeId atom(const Atom &a);
        NodeId negate(NodeId a);
        NodeId conj(std::vector<NodeId> kids);
        NodeId disj(std::vector<NodeId> kids);
        NodeId conj(NodeId a, NodeId b) { return conj(std::vector<NodeId>{a, b}); }
        NodeId disj(NodeId a, NodeId b) { return disj(std::vector<NodeId>{a, b}); }
        NodeId implies(NodeId a, NodeId b);
        NodeId iff(NodeId a, NodeId b);

        const FormulaNode &node(NodeId id) const { return nodes_[id]; }
        std::size_t size() const { return nodes_.size(); }

        bool is_true(NodeId id) const { return nodes_[id].kind == NodeKind::top; }
        bool is_false(NodeId id) const { return nodes_[id].kind == NodeKind::bottom; }

        bool eval(NodeId root, const std::function<bool(const Atom &)> &assignment) const;

        /// Distinct nodes reachable from root (constants included).
        std::size_t dag_size(NodeId root) const;
        /// Nodes of the fully expanded tree; saturates at UINT64_MAX.
        std::uint64_t tree_size(NodeId root) const;

        /// Atoms reachable from root in first-visit order.
        std::vector<Atom> atoms(NodeId root) const;

        /**
         * Deterministic s-expression dump. Every shared non-leaf node is
         * printed once as "#k = (...)" in post-order and referenced as #k.
         */
        std::string dump(NodeId root) const;

    private:
        NodeId make(NodeKind kind, Atom atom, std::vector<NodeId> kids);
        NodeId nary(NodeKind kind, std::vector<NodeId> kids);

        struct Key
        {
            NodeKind kind;
            Atom atom;
            std::vector<NodeId> kids;
            friend bool operator==(const Key &a, const Key &b)
            {
                return a.kind == b.kind && a.atom == b.atom && a.kids == b.kids;
            }
        };
        struct KeyHash
        {
            std::size_t operator()(const Key &k) const;
        };

        Options opts_;
        std::vector<FormulaNode> nodes_;
        std::unordered_map<Key, NodeId, KeyHash> intern_;
    };

} // namespace termfilter
