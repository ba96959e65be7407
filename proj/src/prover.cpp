#include "termfilter/prover.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace termfilter
{

    const char *to_string(Verdict::Kind k)
    {
        switch (k)
        {
        case Verdict::Kind::terminating:
            return "YES";
        case Verdict::Kind::maybe:
            return "MAYBE";
        case Verdict::Kind::timeout:
            return "TIMEOUT";
        }
        return "?";
    }

    std::string check_witness(const DpProblem &problem, const Precedence &prec, const ArgumentFiltering &pi,
                              OrderMode mode, const std::vector<std::size_t> &strict, const UsableSet &usable)
    {
        const auto &pairs = problem.pairs.rules();
        if (strict.empty())
            return "no pair is strictly decreasing";
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (!lpo_af_ge(prec, pi, mode, pairs[p].lhs, pairs[p].rhs))
                return "pair " + to_string(pairs[p]) + " is not weakly decreasing";
        for (std::size_t p : strict)
            if (p >= pairs.size() || !lpo_af_gt(prec, pi, mode, pairs[p].lhs, pairs[p].rhs))
                return "pair " + (p < pairs.size() ? to_string(pairs[p]) : std::to_string(p)) +
                       " is not strictly decreasing";
        for (const auto &r : usable)
            if (!lpo_af_ge(prec, pi, mode, r.lhs, r.rhs))
                return "usable rule " + to_string(r) + " is not weakly decreasing";
        return {};
    }

    namespace
    {
        struct Session
        {
            const ProverConfig &cfg;
            Deadline deadline;
            std::size_t encodings = 0;
        };

        bool expired(const Deadline &deadline)
        {
            return deadline && std::chrono::steady_clock::now() >= *deadline;
        }

        void emit_dimacs(const ProverConfig &cfg, std::size_t index, const Cnf &cnf, const VarMap &vars,
                         const DpProblem &problem)
        {
            namespace fs = std::filesystem;
            fs::create_directories(cfg.emit_dimacs_dir);
            const std::string stem = "problem-" + std::to_string(index);
            std::vector<std::string> comments{"termfilter " + std::string(to_string(cfg.processor)) + " " +
                                              to_string(cfg.mode)};
            for (const auto &r : problem.pairs.rules())
                comments.push_back("pair " + to_string(r));
            std::ofstream out(fs::path(cfg.emit_dimacs_dir) / (stem + ".cnf"));
            write_dimacs(out, cnf, comments);
            std::ofstream map(fs::path(cfg.emit_dimacs_dir) / (stem + ".map"));
            for (Var v = 1; v <= vars.named_count(); ++v)
                map << v << ' ' << vars.describe(v) << '\n';
            map << "# variables " << vars.named_count() + 1 << ".." << cnf.num_vars << " are definitions\n";
        }

        RpOutcome run_processor(const DpProblem &problem, Session &session)
        {
            const ProverConfig &cfg = session.cfg;
            RpOutcome out;
            out.result = problem;
            if (problem.pairs.empty())
                return out;

            FormulaStore store(FormulaStore::Options{cfg.simplify, cfg.share});
            EncodingConfig ecfg{cfg.processor, cfg.mode, cfg.propagate, false};
            RpEncoding enc = encode_rp_formula(store, problem, ecfg);
            if (cfg.dump_formula)
                out.formula_dump = store.dump(enc.root);

            VarMap vars(enc.signature, enc.pair_count, enc.usable_symbols);
            Lowered lowered = lower_atoms(store, enc.root, vars, cfg.mode);
            std::vector<NodeId> roots{lowered.root, lowered.structural};
            Cnf cnf = tseitin_cnf(store, roots, vars);
            out.stats = EncodingStats{store.dag_size(enc.root), cnf.num_vars, cnf.clauses.size()};
            if (!cfg.emit_dimacs_dir.empty())
                emit_dimacs(cfg, ++session.encodings, cnf, vars, problem);

            SolveResult res = solve(cnf, cfg.solver, session.deadline);
            out.status = res.status;
            if (res.status != SatStatus::sat)
                return out;

            Witness w = decode_model(res.model, vars);
            const std::size_t n = problem.pairs.size();
            while (cfg.maximize_strict && w.strict_pairs.size() < n && !expired(session.deadline))
            {
                Cnf more = cnf;
                std::vector<Lit> grow;
                for (std::size_t p = 0; p < n; ++p)
                {
                    if (std::find(w.strict_pairs.begin(), w.strict_pairs.end(), p) != w.strict_pairs.end())
                        more.clauses.push_back({vars.strict(p)});
                    else
                        grow.push_back(vars.strict(p));
                }
                more.clauses.push_back(grow);
                SolveResult again = solve(more, cfg.solver, session.deadline);
                if (again.status != SatStatus::sat)
                    break;
                w = decode_model(again.model, vars);
            }

            UsableSet usable = cfg.processor == ProcessorKind::thm5
                                   ? usable_rules(problem.pairs, problem.rules)
                                   : usable_rules_mod_pi(problem.pairs, problem.rules, w.filtering);
            std::string failure = check_witness(problem, w.precedence, w.filtering, cfg.mode, w.strict_pairs, usable);
            if (!failure.empty())
                throw VerificationError("decoded model fails oracle replay: " + failure);

            std::vector<Rule> kept, removed;
            for (std::size_t p = 0; p < n; ++p)
            {
                const Rule &r = problem.pairs.rules()[p];
                if (std::find(w.strict_pairs.begin(), w.strict_pairs.end(), p) != w.strict_pairs.end())
                    removed.push_back(r);
                else
                    kept.push_back(r);
            }
            out.progress = true;
            out.result = DpProblem{Trs(std::move(kept)), problem.rules};
            out.witness = RpWitness{vars.signature(), w.precedence, w.filtering, std::move(removed), std::move(usable)};
            return out;
        }

        Deadline deadline_for(const ProverConfig &cfg)
        {
            if (!cfg.timeout_seconds)
                return std::nullopt;
            return std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(*cfg.timeout_seconds));
        }
    } // namespace

    RpOutcome reduction_pair_processor(const DpProblem &problem, const ProverConfig &cfg, Deadline deadline)
    {
        Session session{cfg, deadline};
        return run_processor(problem, session);
    }

    Verdict prove(const Trs &rules, const ProverConfig &cfg)
    {
        Session session{cfg, deadline_for(cfg)};
        Verdict verdict;
        std::vector<DpProblem> work{initial_problem(rules)};

        while (!work.empty())
        {
            DpProblem problem = std::move(work.back());
            work.pop_back();
            if (problem.pairs.empty())
                continue;
            if (expired(session.deadline))
            {
                verdict.kind = Verdict::Kind::timeout;
                verdict.reason = "time limit reached";
                return verdict;
            }

            auto subs = scc_decompose(problem);
            const bool unchanged = subs.size() == 1 && subs.front().pairs.rules() == problem.pairs.rules();
            if (!unchanged)
            {
                verdict.proof.push_back(ProofStep{ProofStep::Kind::dependency_graph, problem, subs, std::nullopt, {}, {}});
                for (auto it = subs.rbegin(); it != subs.rend(); ++it)
                    work.push_back(std::move(*it));
                continue;
            }

            RpOutcome outcome = run_processor(problem, session);
            if (!outcome.progress)
            {
                if (outcome.status == SatStatus::unknown && expired(session.deadline))
                {
                    verdict.kind = Verdict::Kind::timeout;
                    verdict.reason = "time limit reached";
                }
                else
                {
                    verdict.kind = Verdict::Kind::maybe;
                    verdict.reason = "no reduction pair orients the problem with pairs:";
                    for (const auto &r : problem.pairs.rules())
                        verdict.reason += "\n  " + to_string(r);
                }
                return verdict;
            }
            verdict.proof.push_back(ProofStep{ProofStep::Kind::reduction_pair, problem, {outcome.result},
                                              outcome.witness, outcome.stats, std::move(outcome.formula_dump)});
            work.push_back(std::move(outcome.result));
        }
        verdict.kind = Verdict::Kind::terminating;
        return verdict;
    }

    namespace
    {
        void print_pairs(std::ostream &os, const Trs &pairs, const char *indent)
        {
            for (const auto &r : pairs.rules())
                os << indent << to_string(r) << '\n';
        }
    } // namespace

    std::string format_proof(const Verdict &verdict, const ProverConfig &cfg)
    {
        std::ostringstream os;
        os << to_string(verdict.kind) << '\n';
        os << "order: " << (cfg.mode == OrderMode::strict ? "strict LPO" : "quasi LPO")
           << ", processor: " << to_string(cfg.processor) << "\n\n";

        std::size_t n = 0;
        for (const auto &step : verdict.proof)
        {
            ++n;
            if (step.kind == ProofStep::Kind::dependency_graph)
            {
                os << n << ". Dependency graph processor on\n";
                print_pairs(os, step.input.pairs, "     ");
                os << "   yields " << step.outputs.size() << " SCC(s)";
                if (step.outputs.empty())
                    os << " (no cycles)";
                os << '\n';
                for (std::size_t k = 0; k < step.outputs.size(); ++k)
                {
                    os << "   [" << k + 1 << "]\n";
                    print_pairs(os, step.outputs[k].pairs, "     ");
                }
                os << '\n';
                continue;
            }
            const RpWitness &w = *step.witness;
            os << n << ". Reduction pair processor on\n";
            print_pairs(os, step.input.pairs, "     ");
            os << "   argument filtering:\n";
            std::istringstream filt(w.filtering.describe(w.signature));
            for (std::string line; std::getline(filt, line);)
                os << "     " << line << '\n';
            os << "   precedence: " << w.precedence.describe(w.signature) << '\n';
            os << "   strictly decreasing (removed):\n";
            for (const auto &r : w.removed)
                os << "     " << to_string(r) << '\n';
            os << "   usable rules (weakly decreasing):";
            if (w.usable.empty())
                os << " none";
            os << '\n';
            for (const auto &r : w.usable)
                os << "     " << to_string(r) << '\n';
            os << "   encoding: " << step.stats.formula_nodes << " formula nodes, " << step.stats.cnf_vars
               << " variables, " << step.stats.cnf_clauses << " clauses\n";
            if (!step.formula_dump.empty())
                os << "   formula:\n" << step.formula_dump;
            os << '\n';
        }
        if (!verdict.reason.empty())
            os << verdict.reason << '\n';
        return os.str();
    }

} // namespace termfilter
