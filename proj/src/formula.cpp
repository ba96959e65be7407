#include "termfilter/formula.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace termfilter
{

    namespace
    {
        std::size_t mix(std::size_t h, std::size_t v)
        {
            return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        }
    } // namespace

    Atom Atom::po_eq(Symbol f, Symbol g)
    {
        if (SymbolLess{}(g, f))
            std::swap(f, g);
        return {AtomKind::po_eq, f, g, 0};
    }

    std::size_t Atom::hash() const
    {
        std::size_t h = static_cast<std::size_t>(kind);
        h = mix(h, f.valid() ? f.hash() : 0);
        h = mix(h, g.valid() ? g.hash() : 0);
        return mix(h, index);
    }

    std::string to_string(const Atom &a)
    {
        switch (a.kind)
        {
        case AtomKind::po_gt:
            return a.f.name() + " > " + a.g.name();
        case AtomKind::po_eq:
            return a.f.name() + " = " + a.g.name();
        case AtomKind::list:
            return "list(" + a.f.name() + ")";
        case AtomKind::arg_in:
            return "pi(" + a.f.name() + ") has " + std::to_string(a.index);
        case AtomKind::collapse:
            return "pi(" + a.f.name() + ") = " + std::to_string(a.index);
        case AtomKind::usable:
            return "u(" + a.f.name() + ")";
        case AtomKind::strict:
            return "strict(" + std::to_string(a.index) + ")";
        case AtomKind::prop:
            return "v" + std::to_string(a.index);
        }
        return "?";
    }

    std::size_t FormulaStore::KeyHash::operator()(const Key &k) const
    {
        std::size_t h = mix(static_cast<std::size_t>(k.kind), k.atom.hash());
        for (NodeId id : k.kids)
            h = mix(h, id);
        return h;
    }

    FormulaStore::FormulaStore(Options opts) : opts_(opts)
    {
        nodes_.push_back(FormulaNode{NodeKind::top, {}, {}});
        nodes_.push_back(FormulaNode{NodeKind::bottom, {}, {}});
    }

    NodeId FormulaStore::make(NodeKind kind, Atom atom, std::vector<NodeId> kids)
    {
        if (opts_.share)
        {
            Key key{kind, atom, kids};
            auto it = intern_.find(key);
            if (it != intern_.end())
                return it->second;
            NodeId id = static_cast<NodeId>(nodes_.size());
            nodes_.push_back(FormulaNode{kind, atom, std::move(kids)});
            intern_.emplace(std::move(key), id);
            return id;
        }
        NodeId id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(FormulaNode{kind, atom, std::move(kids)});
        return id;
    }

    NodeId FormulaStore::atom(const Atom &a)
    {
        return make(NodeKind::atom, a, {});
    }

    NodeId FormulaStore::negate(NodeId a)
    {
        if (opts_.simplify)
        {
            if (is_true(a))
                return bottom();
            if (is_false(a))
                return top();
            if (nodes_[a].kind == NodeKind::negation)
                return nodes_[a].kids.front();
        }
        return make(NodeKind::negation, {}, {a});
    }

    NodeId FormulaStore::nary(NodeKind kind, std::vector<NodeId> kids)
    {
        const bool is_and = kind == NodeKind::conj;
        const NodeId unit = is_and ? top() : bottom();
        const NodeId zero = is_and ? bottom() : top();
        if (!opts_.simplify)
            return make(kind, {}, std::move(kids));

        std::vector<NodeId> flat;
        flat.reserve(kids.size());
        for (NodeId k : kids)
        {
            if (k == zero)
                return zero;
            if (k == unit)
                continue;
            if (nodes_[k].kind == kind)
                flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
            else
                flat.push_back(k);
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        for (NodeId k : flat)
            if (nodes_[k].kind == NodeKind::negation &&
                std::binary_search(flat.begin(), flat.end(), nodes_[k].kids.front()))
                return zero;
        if (flat.empty())
            return unit;
        if (flat.size() == 1)
            return flat.front();
        return make(kind, {}, std::move(flat));
    }

    NodeId FormulaStore::conj(std::vector<NodeId> kids)
    {
        return nary(NodeKind::conj, std::move(kids));
    }

    NodeId FormulaStore::disj(std::vector<NodeId> kids)
    {
        return nary(NodeKind::disj, std::move(kids));
    }

    NodeId FormulaStore::implies(NodeId a, NodeId b)
    {
        if (opts_.simplify)
        {
            if (is_true(a))
                return b;
            if (is_false(a) || is_true(b) || a == b)
                return top();
            if (is_false(b))
                return negate(a);
        }
        return make(NodeKind::implies, {}, {a, b});
    }

    NodeId FormulaStore::iff(NodeId a, NodeId b)
    {
        if (opts_.simplify)
        {
            if (a == b)
                return top();
            if (is_true(a))
                return b;
            if (is_true(b))
                return a;
            if (is_false(a))
                return negate(b);
            if (is_false(b))
                return negate(a);
            if (b < a)
                std::swap(a, b);
        }
        return make(NodeKind::iff, {}, {a, b});
    }

    bool FormulaStore::eval(NodeId root, const std::function<bool(const Atom &)> &assignment) const
    {
        std::unordered_map<NodeId, bool> memo;
        std::function<bool(NodeId)> go = [&](NodeId id) -> bool
        {
            const auto &n = nodes_[id];
            switch (n.kind)
            {
            case NodeKind::top:
                return true;
            case NodeKind::bottom:
                return false;
            case NodeKind::atom:
                return assignment(n.atom);
            default:
                break;
            }
            if (auto it = memo.find(id); it != memo.end())
                return it->second;
            bool v = false;
            switch (n.kind)
            {
            case NodeKind::negation:
                v = !go(n.kids[0]);
                break;
            case NodeKind::conj:
                v = std::all_of(n.kids.begin(), n.kids.end(), go);
                break;
            case NodeKind::disj:
                v = std::any_of(n.kids.begin(), n.kids.end(), go);
                break;
            case NodeKind::implies:
                v = !go(n.kids[0]) || go(n.kids[1]);
                break;
            case NodeKind::iff:
                v = go(n.kids[0]) == go(n.kids[1]);
                break;
            default:
                break;
            }
            memo.emplace(id, v);
            return v;
        };
        return go(root);
    }

    std::size_t FormulaStore::dag_size(NodeId root) const
    {
        std::unordered_set<NodeId> seen;
        std::vector<NodeId> stack{root};
        while (!stack.empty())
        {
            NodeId id = stack.back();
            stack.pop_back();
            if (!seen.insert(id).second)
                continue;
            for (NodeId k : nodes_[id].kids)
                stack.push_back(k);
        }
        return seen.size();
    }

    std::uint64_t FormulaStore::tree_size(NodeId root) const
    {
        constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
        std::unordered_map<NodeId, std::uint64_t> memo;
        std::function<std::uint64_t(NodeId)> go = [&](NodeId id) -> std::uint64_t
        {
            if (auto it = memo.find(id); it != memo.end())
                return it->second;
            std::uint64_t total = 1;
            for (NodeId k : nodes_[id].kids)
            {
                std::uint64_t sub = go(k);
                total = sub > cap - total ? cap : total + sub;
            }
            memo.emplace(id, total);
            return total;
        };
        return go(root);
    }

    std::vector<Atom> FormulaStore::atoms(NodeId root) const
    {
        std::vector<Atom> out;
        std::unordered_set<Atom, AtomHash> seen_atoms;
        std::unordered_set<NodeId> seen;
        std::function<void(NodeId)> go = [&](NodeId id)
        {
            if (!seen.insert(id).second)
                return;
            const auto &n = nodes_[id];
            if (n.kind == NodeKind::atom && seen_atoms.insert(n.atom).second)
                out.push_back(n.atom);
            for (NodeId k : n.kids)
                go(k);
        };
        go(root);
        return out;
    }

    std::string FormulaStore::dump(NodeId root) const
    {
        std::unordered_map<NodeId, std::size_t> fan_in;
        {
            std::unordered_set<NodeId> seen;
            std::function<void(NodeId)> count = [&](NodeId id)
            {
                for (NodeId k : nodes_[id].kids)
                {
                    ++fan_in[k];
                    if (seen.insert(k).second)
                        count(k);
                }
            };
            count(root);
        }

        std::ostringstream defs;
        std::unordered_map<NodeId, std::size_t> label;
        std::function<std::string(NodeId)> show = [&](NodeId id) -> std::string
        {
            const auto &n = nodes_[id];
            switch (n.kind)
            {
            case NodeKind::top:
                return "true";
            case NodeKind::bottom:
                return "false";
            case NodeKind::atom:
                return "[" + to_string(n.atom) + "]";
            default:
                break;
            }
            if (auto it = label.find(id); it != label.end())
                return "#" + std::to_string(it->second);
            const char *op = n.kind == NodeKind::negation ? "not"
                             : n.kind == NodeKind::conj   ? "and"
                             : n.kind == NodeKind::disj   ? "or"
                             : n.kind == NodeKind::implies ? "=>"
                                                           : "<=>";
            std::string body = std::string("(") + op;
            for (NodeId k : n.kids)
                body += " " + show(k);
            body += ")";
            if (fan_in[id] > 1)
            {
                std::size_t k = label.size() + 1;
                label.emplace(id, k);
                defs << "#" << k << " = " << body << '\n';
                return "#" + std::to_string(k);
            }
            return body;
        };
        std::string top_text = show(root);
        return defs.str() + top_text + '\n';
    }

} // namespace termfilter
