#include "termfilter/sat.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace termfilter
{

    VarMap::VarMap(std::span<const Symbol> signature, std::size_t pair_count, std::span<const Symbol> usable_symbols)
        : signature_(signature.begin(), signature.end()), usable_(usable_symbols.begin(), usable_symbols.end()),
          pair_count_(pair_count)
    {
        bits_ = 1;
        while ((std::size_t{1} << bits_) < signature_.size())
            ++bits_;
        for (std::size_t i = 0; i < signature_.size(); ++i)
            index_.emplace(signature_[i], i);

        Var next = 1;
        for (std::size_t i = 0; i < signature_.size(); ++i)
        {
            bit_base_.push_back(next);
            next += static_cast<Var>(bits_);
        }
        for (auto f : signature_)
        {
            list_var_.push_back(next);
            next += 1 + static_cast<Var>(f.arity());
        }
        strict_base_ = next;
        next += static_cast<Var>(pair_count_);
        usable_base_ = next;
        next += static_cast<Var>(usable_.size());
        named_ = next - 1;
        count_ = named_;
    }

    std::size_t VarMap::symbol_index(Symbol f) const
    {
        auto it = index_.find(f);
        if (it == index_.end())
            throw std::out_of_range("symbol '" + f.name() + "' is not in the encoding signature");
        return it->second;
    }

    Var VarMap::bit(Symbol f, std::size_t b) const
    {
        return bit_base_[symbol_index(f)] + static_cast<Var>(b) - 1;
    }

    Var VarMap::list(Symbol f) const
    {
        return list_var_[symbol_index(f)];
    }

    Var VarMap::arg(Symbol f, std::size_t i) const
    {
        if (i < 1 || i > f.arity())
            throw std::out_of_range("argument position out of range for '" + f.name() + "'");
        return list_var_[symbol_index(f)] + static_cast<Var>(i);
    }

    Var VarMap::strict(std::size_t pair) const
    {
        if (pair >= pair_count_)
            throw std::out_of_range("pair index out of range");
        return strict_base_ + static_cast<Var>(pair);
    }

    bool VarMap::has_usable(Symbol f) const
    {
        return std::find(usable_.begin(), usable_.end(), f) != usable_.end();
    }

    Var VarMap::usable(Symbol f) const
    {
        auto it = std::find(usable_.begin(), usable_.end(), f);
        if (it == usable_.end())
            throw std::out_of_range("no usable variable for '" + f.name() + "'");
        return usable_base_ + static_cast<Var>(it - usable_.begin());
    }

    std::string VarMap::describe(Var v) const
    {
        if (v < 1 || v > count_)
            return "?";
        if (v > named_)
            return "def";
        for (std::size_t i = 0; i < signature_.size(); ++i)
        {
            Var base = bit_base_[i];
            if (v >= base && v < base + static_cast<Var>(bits_))
                return signature_[i].name() + "_" + std::to_string(v - base + 1);
        }
        for (std::size_t i = 0; i < signature_.size(); ++i)
        {
            Var base = list_var_[i];
            if (v == base)
                return "list_" + signature_[i].name();
            if (v > base && v <= base + static_cast<Var>(signature_[i].arity()))
                return "arg_" + signature_[i].name() + "^" + std::to_string(v - base);
        }
        if (v >= strict_base_ && v < usable_base_)
            return "strict_" + std::to_string(v - strict_base_ + 1);
        return "u_" + usable_[v - usable_base_].name();
    }

    // ---------------------------------------------------------------------

    NodeId bits_greater(FormulaStore &store, std::span<const Var> f, std::span<const Var> g)
    {
        // (f_1 /\ ~g_1) at the bottom, then (f_k /\ ~g_k) \/ ((f_k <-> g_k) /\ rest)
        NodeId acc = store.conj(store.atom(Atom::prop(f[0])), store.negate(store.atom(Atom::prop(g[0]))));
        for (std::size_t b = 1; b < f.size(); ++b)
        {
            NodeId fb = store.atom(Atom::prop(f[b]));
            NodeId gb = store.atom(Atom::prop(g[b]));
            acc = store.disj(store.conj(fb, store.negate(gb)), store.conj(store.iff(fb, gb), acc));
        }
        return acc;
    }

    NodeId bits_equal(FormulaStore &store, std::span<const Var> f, std::span<const Var> g)
    {
        std::vector<NodeId> parts;
        for (std::size_t b = 0; b < f.size(); ++b)
            parts.push_back(store.iff(store.atom(Atom::prop(f[b])), store.atom(Atom::prop(g[b]))));
        return store.conj(std::move(parts));
    }

    namespace
    {
        std::vector<Var> bits_of(const VarMap &vars, Symbol f)
        {
            std::vector<Var> out;
            for (std::size_t b = 1; b <= vars.bit_width(); ++b)
                out.push_back(vars.bit(f, b));
            return out;
        }

        class Lowering
        {
        public:
            Lowering(FormulaStore &store, const VarMap &vars, OrderMode mode)
                : store_(store), vars_(vars), mode_(mode)
            {
            }

            NodeId lower(NodeId id)
            {
                if (auto it = memo_.find(id); it != memo_.end())
                    return it->second;
                const FormulaNode node = store_.node(id);
                NodeId r = id;
                switch (node.kind)
                {
                case NodeKind::top:
                case NodeKind::bottom:
                    break;
                case NodeKind::atom:
                    r = atom(node.atom);
                    break;
                case NodeKind::negation:
                    r = store_.negate(lower(node.kids[0]));
                    break;
                case NodeKind::conj:
                case NodeKind::disj:
                {
                    std::vector<NodeId> kids;
                    for (NodeId k : node.kids)
                        kids.push_back(lower(k));
                    r = node.kind == NodeKind::conj ? store_.conj(std::move(kids)) : store_.disj(std::move(kids));
                    break;
                }
                case NodeKind::implies:
                    r = store_.implies(lower(node.kids[0]), lower(node.kids[1]));
                    break;
                case NodeKind::iff:
                    r = store_.iff(lower(node.kids[0]), lower(node.kids[1]));
                    break;
                }
                memo_.emplace(id, r);
                return r;
            }

        private:
            NodeId prop(Var v) { return store_.atom(Atom::prop(static_cast<std::size_t>(v))); }

            NodeId atom(const Atom &a)
            {
                switch (a.kind)
                {
                case AtomKind::po_gt:
                {
                    auto key = std::make_pair(a.f.hash(), a.g.hash());
                    if (auto it = gt_memo_.find(key); it != gt_memo_.end())
                        return it->second;
                    NodeId r = bits_greater(store_, bits_of(vars_, a.f), bits_of(vars_, a.g));
                    gt_memo_.emplace(key, r);
                    return r;
                }
                case AtomKind::po_eq:
                    if (mode_ == OrderMode::strict && a.f != a.g)
                        throw std::logic_error("equivalence atom " + to_string(a) + " in strict-mode encoding");
                    return bits_equal(store_, bits_of(vars_, a.f), bits_of(vars_, a.g));
                case AtomKind::list:
                    return prop(vars_.list(a.f));
                case AtomKind::arg_in:
                    return prop(vars_.arg(a.f, a.index));
                case AtomKind::collapse:
                    return store_.conj(store_.negate(prop(vars_.list(a.f))), prop(vars_.arg(a.f, a.index)));
                case AtomKind::usable:
                    return prop(vars_.usable(a.f));
                case AtomKind::strict:
                    return prop(vars_.strict(a.index));
                case AtomKind::prop:
                    return store_.atom(a);
                }
                return store_.atom(a);
            }

            FormulaStore &store_;
            const VarMap &vars_;
            OrderMode mode_;
            std::unordered_map<NodeId, NodeId> memo_;
            std::map<std::pair<std::size_t, std::size_t>, NodeId> gt_memo_;
        };
    } // namespace

    Lowered lower_atoms(FormulaStore &store, NodeId root, const VarMap &vars, OrderMode mode, bool identity_filtering)
    {
        Lowering lowering(store, vars, mode);
        Lowered out;
        out.root = lowering.lower(root);

        auto prop = [&](Var v)
        { return store.atom(Atom::prop(static_cast<std::size_t>(v))); };
        std::vector<NodeId> structural;
        for (auto f : vars.signature())
        {
            const std::size_t n = f.arity();
            NodeId list = prop(vars.list(f));
            if (identity_filtering)
            {
                structural.push_back(list);
                for (std::size_t i = 1; i <= n; ++i)
                    structural.push_back(prop(vars.arg(f, i)));
                continue;
            }
            std::vector<NodeId> exactly_one;
            std::vector<NodeId> at_least;
            for (std::size_t i = 1; i <= n; ++i)
                at_least.push_back(prop(vars.arg(f, i)));
            exactly_one.push_back(store.disj(std::move(at_least)));
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j)
                    exactly_one.push_back(store.disj(store.negate(prop(vars.arg(f, i))),
                                                     store.negate(prop(vars.arg(f, j)))));
            structural.push_back(store.implies(store.negate(list), store.conj(std::move(exactly_one))));
        }
        out.structural = store.conj(std::move(structural));
        return out;
    }

    // ---------------------------------------------------------------------

    namespace
    {
        class TseitinBuilder
        {
        public:
            TseitinBuilder(const FormulaStore &store, std::function<Var()> fresh) : store_(store), fresh_(std::move(fresh))
            {
            }

            Lit literal(NodeId id)
            {
                const auto &n = store_.node(id);
                switch (n.kind)
                {
                case NodeKind::top:
                    return true_lit();
                case NodeKind::bottom:
                    return -true_lit();
                case NodeKind::atom:
                    if (n.atom.kind != AtomKind::prop)
                        throw std::logic_error("unlowered atom " + to_string(n.atom) + " reached CNF conversion");
                    note(static_cast<Var>(n.atom.index));
                    return static_cast<Lit>(n.atom.index);
                case NodeKind::negation:
                    return -literal(n.kids[0]);
                default:
                    break;
                }
                if (auto it = defs_.find(id); it != defs_.end())
                    return it->second;

                std::vector<Lit> kids;
                for (NodeId k : n.kids)
                    kids.push_back(literal(k));
                Var v = fresh_var();
                defs_.emplace(id, v);
                switch (n.kind)
                {
                case NodeKind::conj:
                {
                    std::vector<Lit> back{v};
                    for (Lit c : kids)
                    {
                        add({-v, c});
                        back.push_back(-c);
                    }
                    add(std::move(back));
                    break;
                }
                case NodeKind::disj:
                {
                    std::vector<Lit> fwd{-v};
                    for (Lit c : kids)
                    {
                        add({v, -c});
                        fwd.push_back(c);
                    }
                    add(std::move(fwd));
                    break;
                }
                case NodeKind::implies:
                    add({-v, -kids[0], kids[1]});
                    add({v, kids[0]});
                    add({v, -kids[1]});
                    break;
                case NodeKind::iff:
                    add({-v, -kids[0], kids[1]});
                    add({-v, kids[0], -kids[1]});
                    add({v, kids[0], kids[1]});
                    add({v, -kids[0], -kids[1]});
                    break;
                default:
                    break;
                }
                return v;
            }

            void assert_root(NodeId id) { add({literal(id)}); }

            Cnf finish()
            {
                cnf_.num_vars = max_var_;
                return std::move(cnf_);
            }

        private:
            Var fresh_var()
            {
                Var v = fresh_();
                note(v);
                return v;
            }

            void note(Var v) { max_var_ = std::max(max_var_, v); }

            Lit true_lit()
            {
                if (!true_var_)
                {
                    true_var_ = fresh_var();
                    add({true_var_});
                }
                return true_var_;
            }

            void add(std::vector<Lit> clause)
            {
                std::sort(clause.begin(), clause.end(), [](Lit a, Lit b)
                          { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
                clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
                for (std::size_t i = 1; i < clause.size(); ++i)
                    if (clause[i] == -clause[i - 1])
                        return;
                cnf_.clauses.push_back(std::move(clause));
            }

            const FormulaStore &store_;
            std::function<Var()> fresh_;
            std::unordered_map<NodeId, Var> defs_;
            Var true_var_ = 0;
            Var max_var_ = 0;
            Cnf cnf_;
        };
    } // namespace

    Cnf tseitin_cnf(const FormulaStore &store, std::span<const NodeId> roots, VarMap &vars)
    {
        TseitinBuilder builder(store, [&vars]
                               { return vars.fresh(); });
        for (NodeId r : roots)
            builder.assert_root(r);
        Cnf cnf = builder.finish();
        cnf.num_vars = std::max(cnf.num_vars, vars.count());
        return cnf;
    }

    Cnf tseitin_cnf(const FormulaStore &store, std::span<const NodeId> roots, Var first_free)
    {
        Var next = first_free;
        TseitinBuilder builder(store, [&next]
                               { return next++; });
        for (NodeId r : roots)
            builder.assert_root(r);
        Cnf cnf = builder.finish();
        cnf.num_vars = std::max(cnf.num_vars, next - 1);
        return cnf;
    }

    void write_dimacs(std::ostream &os, const Cnf &cnf, std::span<const std::string> comments)
    {
        for (const auto &c : comments)
            os << "c " << c << '\n';
        os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
        for (const auto &clause : cnf.clauses)
        {
            for (Lit l : clause)
                os << l << ' ';
            os << "0\n";
        }
    }

    Cnf read_dimacs(std::istream &is)
    {
        Cnf cnf;
        std::string line;
        bool header = false;
        std::size_t expected = 0;
        std::vector<Lit> current;
        while (std::getline(is, line))
        {
            if (line.empty() || line[0] == 'c' || line[0] == '%')
                continue;
            std::istringstream ls(line);
            if (line[0] == 'p')
            {
                std::string p, fmt;
                ls >> p >> fmt >> cnf.num_vars >> expected;
                if (fmt != "cnf" || !ls)
                    throw std::runtime_error("malformed DIMACS header: " + line);
                header = true;
                continue;
            }
            if (!header)
                throw std::runtime_error("DIMACS clause before header");
            Lit l;
            while (ls >> l)
            {
                if (l == 0)
                {
                    cnf.clauses.push_back(std::move(current));
                    current.clear();
                }
                else
                {
                    if (std::abs(l) > cnf.num_vars)
                        throw std::runtime_error("DIMACS literal out of range: " + std::to_string(l));
                    current.push_back(l);
                }
            }
        }
        if (!current.empty())
            cnf.clauses.push_back(std::move(current));
        if (!header)
            throw std::runtime_error("missing DIMACS header");
        if (cnf.clauses.size() != expected)
            throw std::runtime_error("DIMACS clause count does not match header");
        return cnf;
    }

    // ---------------------------------------------------------------------

    Witness decode_model(const Model &model, const VarMap &vars)
    {
        auto value = [&](Var v)
        { return static_cast<std::size_t>(v) < model.size() && model[v]; };

        Witness w;
        std::map<Symbol, unsigned, SymbolLess> raw;
        std::set<unsigned> values;
        for (auto f : vars.signature())
        {
            unsigned r = 0;
            for (std::size_t b = vars.bit_width(); b >= 1; --b)
                r = (r << 1) | (value(vars.bit(f, b)) ? 1u : 0u);
            raw[f] = r;
            values.insert(r);
        }
        std::vector<unsigned> dense(values.begin(), values.end());
        for (auto f : vars.signature())
        {
            auto pos = std::lower_bound(dense.begin(), dense.end(), raw[f]) - dense.begin();
            w.precedence.set_rank(f, static_cast<unsigned>(pos) + 1);

            std::vector<std::size_t> kept;
            for (std::size_t i = 1; i <= f.arity(); ++i)
                if (value(vars.arg(f, i)))
                    kept.push_back(i);
            if (value(vars.list(f)))
            {
                w.filtering.set(f, Filter::keep_positions(std::move(kept)));
            }
            else
            {
                if (kept.size() != 1)
                    throw DecodeError("model selects " + std::to_string(kept.size()) +
                                      " arguments for collapsed symbol '" + f.name() + "'");
                w.filtering.set(f, Filter::collapse_to(kept.front()));
            }
        }
        for (std::size_t p = 0; p < vars.pair_count(); ++p)
            if (value(vars.strict(p)))
                w.strict_pairs.push_back(p);
        for (auto f : vars.usable_symbols())
            if (value(vars.usable(f)))
                w.usable.push_back(f);
        return w;
    }

} // namespace termfilter
