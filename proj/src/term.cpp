#include "termfilter/term.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace termfilter
{

    namespace
    {
        struct InternKey
        {
            std::string name;
            std::size_t arity;
            SymbolKind kind;
            bool operator<(const InternKey &o) const
            {
                return std::tie(name, arity, kind) < std::tie(o.name, o.arity, o.kind);
            }
        };

        std::mutex &intern_mutex()
        {
            static std::mutex m;
            return m;
        }

        std::map<InternKey, std::unique_ptr<SymbolData>> &intern_table()
        {
            static std::map<InternKey, std::unique_ptr<SymbolData>> table;
            return table;
        }

        std::size_t mix(std::size_t h, std::size_t v)
        {
            return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        }
    } // namespace

    Symbol Symbol::intern(std::string_view name, std::size_t arity, SymbolKind kind)
    {
        std::lock_guard lock(intern_mutex());
        auto &table = intern_table();
        InternKey key{std::string(name), arity, kind};
        auto it = table.find(key);
        if (it == table.end())
            it = table.emplace(key, std::make_unique<SymbolData>(SymbolData{std::string(name), arity, kind})).first;
        return Symbol(it->second.get());
    }

    Symbol Symbol::tuple() const
    {
        return intern(name() + "#", arity(), SymbolKind::tuple);
    }

    bool SymbolLess::operator()(Symbol a, Symbol b) const
    {
        return std::make_tuple(a.name(), a.arity(), a.kind()) < std::make_tuple(b.name(), b.arity(), b.kind());
    }

    Term Term::var(VarId id, std::string name)
    {
        Term t;
        t.node_ = std::make_shared<const TermNode>(
            TermNode{true, id, std::move(name), Symbol{}, {}, mix(0x51ed27, id), 1});
        return t;
    }

    Term Term::app(Symbol f, std::vector<Term> args)
    {
        std::size_t h = mix(0x7a3c9, f.hash());
        std::size_t size = 1;
        for (const auto &a : args)
        {
            h = mix(h, a.hash());
            size += a.size();
        }
        Term t;
        t.node_ = std::make_shared<const TermNode>(TermNode{false, 0, {}, f, std::move(args), h, size});
        return t;
    }

    bool operator==(const Term &a, const Term &b)
    {
        if (a.node_ == b.node_)
            return true;
        if (a.hash() != b.hash() || a.is_var() != b.is_var())
            return false;
        if (a.is_var())
            return a.var_id() == b.var_id();
        if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
            return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
            if (a.arg(i) != b.arg(i))
                return false;
        return true;
    }

    namespace
    {
        void print_term(std::ostream &os, const Term &t)
        {
            if (t.is_var())
            {
                os << t.var_name();
                return;
            }
            os << t.symbol().name();
            if (t.args().empty())
                return;
            os << '(';
            for (std::size_t i = 0; i < t.args().size(); ++i)
            {
                if (i)
                    os << ',';
                print_term(os, t.arg(i));
            }
            os << ')';
        }
    } // namespace

    std::string to_string(const Term &t)
    {
        std::ostringstream os;
        print_term(os, t);
        return os.str();
    }

    std::ostream &operator<<(std::ostream &os, const Term &t)
    {
        print_term(os, t);
        return os;
    }

    std::string to_string(const Rule &r)
    {
        return to_string(r.lhs) + " -> " + to_string(r.rhs);
    }

    std::vector<VarId> variables(const Term &t)
    {
        std::vector<VarId> out;
        std::function<void(const Term &)> go = [&](const Term &u)
        {
            if (u.is_var())
            {
                if (std::find(out.begin(), out.end(), u.var_id()) == out.end())
                    out.push_back(u.var_id());
                return;
            }
            for (const auto &a : u.args())
                go(a);
        };
        go(t);
        return out;
    }

    bool occurs(VarId v, const Term &t)
    {
        if (t.is_var())
            return t.var_id() == v;
        for (const auto &a : t.args())
            if (occurs(v, a))
                return true;
        return false;
    }

    VarId max_var_id(const Term &t)
    {
        if (t.is_var())
            return t.var_id();
        VarId m = 0;
        for (const auto &a : t.args())
            m = std::max(m, max_var_id(a));
        return m;
    }

    void collect_symbols(const Term &t, std::vector<Symbol> &out)
    {
        if (t.is_var())
            return;
        if (std::find(out.begin(), out.end(), t.symbol()) == out.end())
            out.push_back(t.symbol());
        for (const auto &a : t.args())
            collect_symbols(a, out);
    }

    void subterms(const Term &t, std::vector<Term> &out)
    {
        out.push_back(t);
        if (t.is_var())
            return;
        for (const auto &a : t.args())
            subterms(a, out);
    }

    // ---------------------------------------------------------------------

    Trs::Trs(std::vector<Rule> rules) : rules_(std::move(rules))
    {
        for (const auto &r : rules_)
        {
            collect_symbols(r.lhs, signature_);
            collect_symbols(r.rhs, signature_);
        }
        std::unordered_map<std::string, Symbol> by_name;
        for (auto f : signature_)
        {
            auto [it, fresh] = by_name.emplace(f.name(), f);
            if (!fresh && it->second != f)
                throw TrsError(TrsError::Kind::arity_mismatch,
                               "symbol '" + f.name() + "' used with inconsistent arities");
        }
    }

    Trs::Trs(std::vector<Rule> rules, std::vector<Symbol> signature)
        : rules_(std::move(rules)), signature_(std::move(signature))
    {
    }

    std::vector<Rule> Trs::rules_of(Symbol f) const
    {
        std::vector<Rule> out;
        for (const auto &r : rules_)
            if (!r.lhs.is_var() && r.lhs.symbol() == f)
                out.push_back(r);
        return out;
    }

    VarId Trs::max_var_id() const
    {
        VarId m = 0;
        for (const auto &r : rules_)
            m = std::max({m, termfilter::max_var_id(r.lhs), termfilter::max_var_id(r.rhs)});
        return m;
    }

    std::vector<Symbol> defined_symbols(const Trs &trs)
    {
        std::vector<Symbol> out;
        for (auto f : trs.signature())
            if (is_defined(trs, f))
                out.push_back(f);
        return out;
    }

    bool is_defined(const Trs &trs, Symbol f)
    {
        for (const auto &r : trs.rules())
            if (!r.lhs.is_var() && r.lhs.symbol() == f)
                return true;
        return false;
    }

    std::vector<Symbol> merge_signatures(std::span<const Symbol> a, std::span<const Symbol> b)
    {
        std::vector<Symbol> out(a.begin(), a.end());
        for (auto f : b)
            if (std::find(out.begin(), out.end(), f) == out.end())
                out.push_back(f);
        return out;
    }

    // ---------------------------------------------------------------------

    Term apply(const Substitution &sigma, const Term &t)
    {
        if (sigma.empty())
            return t;
        if (t.is_var())
        {
            auto it = sigma.find(t.var_id());
            return it == sigma.end() ? t : it->second;
        }
        std::vector<Term> args;
        args.reserve(t.args().size());
        bool changed = false;
        for (const auto &a : t.args())
        {
            args.push_back(termfilter::apply(sigma, a));
            changed |= args.back().identity() != a.identity();
        }
        return changed ? Term::app(t.symbol(), std::move(args)) : t;
    }

    std::optional<Substitution> unify(const Term &s, const Term &t)
    {
        Substitution sigma;
        std::vector<std::pair<Term, Term>> work{{s, t}};
        while (!work.empty())
        {
            auto [a, b] = work.back();
            work.pop_back();
            a = termfilter::apply(sigma, a);
            b = termfilter::apply(sigma, b);
            if (a == b)
                continue;
            if (!a.is_var() && b.is_var())
                std::swap(a, b);
            if (a.is_var())
            {
                if (occurs(a.var_id(), b))
                    return std::nullopt;
                Substitution single{{a.var_id(), b}};
                for (auto &[v, u] : sigma)
                    u = termfilter::apply(single, u);
                sigma.emplace(a.var_id(), b);
                continue;
            }
            if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
                return std::nullopt;
            for (std::size_t i = 0; i < a.args().size(); ++i)
                work.emplace_back(a.arg(i), b.arg(i));
        }
        return sigma;
    }

    Term VarSupply::fresh(std::string_view hint)
    {
        VarId id = next_++;
        return Term::var(id, std::string(hint) + "_" + std::to_string(id));
    }

    Term rename_linear(const Term &t, VarSupply &supply)
    {
        if (t.is_var())
            return supply.fresh(t.var_name());
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto &a : t.args())
            args.push_back(rename_linear(a, supply));
        return Term::app(t.symbol(), std::move(args));
    }

    // ---------------------------------------------------------------------

    TrsError::TrsError(Kind kind, const std::string &msg, std::size_t line, std::size_t column)
        : std::runtime_error(line ? msg + " at " + std::to_string(line) + ":" + std::to_string(column) : msg),
          kind_(kind), line_(line), column_(column)
    {
    }

    namespace
    {
        enum class Tok
        {
            lparen,
            rparen,
            comma,
            arrow,
            ident,
            end
        };

        struct Token
        {
            Tok kind;
            std::string text;
            std::size_t line;
            std::size_t column;
        };

        class Lexer
        {
        public:
            explicit Lexer(std::string_view text) : text_(text) {}

            Token next()
            {
                skip_space();
                Token tok{Tok::end, {}, line_, col_};
                if (pos_ >= text_.size())
                    return tok;
                char c = text_[pos_];
                if (c == '(' || c == ')' || c == ',')
                {
                    advance();
                    tok.kind = c == '(' ? Tok::lparen : c == ')' ? Tok::rparen : Tok::comma;
                    tok.text = std::string(1, c);
                    return tok;
                }
                if (text_.substr(pos_, 2) == "->")
                {
                    advance();
                    advance();
                    tok.kind = Tok::arrow;
                    tok.text = "->";
                    return tok;
                }
                std::size_t start = pos_;
                while (pos_ < text_.size() && !is_delim(text_[pos_]) && text_.substr(pos_, 2) != "->")
                    advance();
                tok.kind = Tok::ident;
                tok.text = std::string(text_.substr(start, pos_ - start));
                return tok;
            }

            /// Skip the body of a block whose opening paren and keyword were consumed.
            void skip_balanced()
            {
                int depth = 1;
                while (pos_ < text_.size())
                {
                    char c = text_[pos_];
                    advance();
                    if (c == '(')
                        ++depth;
                    else if (c == ')' && --depth == 0)
                        return;
                }
                throw TrsError(TrsError::Kind::syntax, "unterminated block", line_, col_);
            }

        private:
            static bool is_delim(char c)
            {
                return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',';
            }

            void skip_space()
            {
                while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                    advance();
            }

            void advance()
            {
                if (text_[pos_] == '\n')
                {
                    ++line_;
                    col_ = 1;
                }
                else
                {
                    ++col_;
                }
                ++pos_;
            }

            std::string_view text_;
            std::size_t pos_ = 0;
            std::size_t line_ = 1;
            std::size_t col_ = 1;
        };

        class Parser
        {
        public:
            explicit Parser(std::string_view text) : lex_(text) { shift(); }

            Trs parse()
            {
                std::vector<Rule> rules;
                bool seen_rules = false;
                while (cur_.kind != Tok::end)
                {
                    expect(Tok::lparen, "'('");
                    if (cur_.kind != Tok::ident)
                        fail("expected block keyword");
                    Token kw = cur_;
                    if (kw.text == "VAR")
                    {
                        shift();
                        while (cur_.kind == Tok::ident)
                        {
                            vars_.insert(cur_.text);
                            shift();
                        }
                        expect(Tok::rparen, "')' closing VAR block");
                    }
                    else if (kw.text == "RULES")
                    {
                        if (seen_rules)
                            fail("duplicate RULES block");
                        seen_rules = true;
                        shift();
                        while (cur_.kind != Tok::rparen)
                        {
                            if (cur_.kind == Tok::end)
                                fail("unterminated RULES block");
                            rules.push_back(parse_rule());
                        }
                        shift();
                    }
                    else if (kw.text == "COMMENT")
                    {
                        lex_.skip_balanced();
                        shift();
                    }
                    else if (kw.text == "STRATEGY" || kw.text == "THEORY")
                    {
                        throw TrsError(TrsError::Kind::unsupported_block,
                                       "unsupported block (" + kw.text + " ...)", kw.line, kw.column);
                    }
                    else
                    {
                        throw TrsError(TrsError::Kind::syntax, "unknown block (" + kw.text + " ...)",
                                       kw.line, kw.column);
                    }
                }
                return Trs(std::move(rules));
            }

        private:
            Rule parse_rule()
            {
                rule_vars_.clear();
                Token at = cur_;
                Term lhs = parse_term();
                if (lhs.is_var())
                    throw TrsError(TrsError::Kind::variable_lhs, "left-hand side is a variable", at.line,
                                   at.column);
                expect(Tok::arrow, "'->'");
                Token rhs_at = cur_;
                Term rhs = parse_term();
                auto lvars = variables(lhs);
                for (VarId v : variables(rhs))
                    if (std::find(lvars.begin(), lvars.end(), v) == lvars.end())
                        throw TrsError(TrsError::Kind::unbound_rhs_variable,
                                       "right-hand side variable does not occur in left-hand side",
                                       rhs_at.line, rhs_at.column);
                return Rule{lhs, rhs};
            }

            Term parse_term()
            {
                if (cur_.kind != Tok::ident)
                    fail("expected term");
                Token name = cur_;
                shift();
                if (vars_.count(name.text))
                {
                    if (cur_.kind == Tok::lparen)
                        throw TrsError(TrsError::Kind::syntax, "variable '" + name.text + "' applied to arguments",
                                       name.line, name.column);
                    auto it = rule_vars_.find(name.text);
                    if (it == rule_vars_.end())
                        it = rule_vars_.emplace(name.text, next_var_++).first;
                    return Term::var(it->second, name.text);
                }
                std::vector<Term> args;
                if (cur_.kind == Tok::lparen)
                {
                    shift();
                    if (cur_.kind != Tok::rparen)
                    {
                        args.push_back(parse_term());
                        while (cur_.kind == Tok::comma)
                        {
                            shift();
                            args.push_back(parse_term());
                        }
                    }
                    expect(Tok::rparen, "')' or ','");
                }
                const std::size_t arity = args.size();
                auto it = arity_.find(name.text);
                if (it == arity_.end())
                {
                    arity_.emplace(name.text, arity);
                }
                else if (it->second != arity)
                {
                    throw TrsError(TrsError::Kind::arity_mismatch,
                                   "symbol '" + name.text + "' used with arity " + std::to_string(arity) +
                                       " but first used with arity " + std::to_string(it->second),
                                   name.line, name.column);
                }
                return Term::app(Symbol::intern(name.text, arity), std::move(args));
            }

            void shift() { cur_ = lex_.next(); }

            void expect(Tok kind, const char *what)
            {
                if (cur_.kind != kind)
                    fail(std::string("expected ") + what);
                shift();
            }

            [[noreturn]] void fail(const std::string &msg)
            {
                std::string found = cur_.kind == Tok::end ? "end of input" : "'" + cur_.text + "'";
                throw TrsError(TrsError::Kind::syntax, msg + ", found " + found, cur_.line, cur_.column);
            }

            Lexer lex_;
            Token cur_;
            std::set<std::string> vars_;
            std::map<std::string, VarId> rule_vars_;
            std::map<std::string, std::size_t> arity_;
            VarId next_var_ = 0;
        };
    } // namespace

    Trs parse_trs(std::string_view text)
    {
        return Parser(text).parse();
    }

    std::string print_trs(const Trs &trs)
    {
        std::ostringstream os;
        std::vector<std::string> names;
        for (const auto &r : trs.rules())
            for (const auto &t : {r.lhs, r.rhs})
            {
                std::vector<Term> subs;
                subterms(t, subs);
                for (const auto &u : subs)
                    if (u.is_var() && std::find(names.begin(), names.end(), u.var_name()) == names.end())
                        names.push_back(u.var_name());
            }
        os << "(VAR";
        for (const auto &n : names)
            os << ' ' << n;
        os << ")\n(RULES\n";
        for (const auto &r : trs.rules())
            os << "  " << to_string(r) << '\n';
        os << ")\n";
        return os.str();
    }

} // namespace termfilter
