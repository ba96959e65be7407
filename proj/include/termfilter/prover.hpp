#pragma once

#include "termfilter/dp.hpp"
#include "termfilter/encoder.hpp"
#include "termfilter/order.hpp"
#include "termfilter/solver.hpp"
#include "termfilter/usable.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace termfilter
{

    struct ProverConfig
    {
        ProcessorKind processor = ProcessorKind::thm12;
        OrderMode mode = OrderMode::strict;
        SolverChoice solver;
        std::optional<double> timeout_seconds;

        /// Re-solve to grow the set of strictly decreasing pairs until it is maximal.
        bool maximize_strict = true;

        // encoding optimisations
        bool simplify = true;
        bool propagate = true;
        bool share = true;

        /// Write every CNF (plus a variable manifest) into this directory when non-empty.
        std::string emit_dimacs_dir;
        /// Keep an s-expression dump of each encoded formula in the proof.
        bool dump_formula = false;
    };

    struct EncodingStats
    {
        std::size_t formula_nodes = 0;
        Var cnf_vars = 0;
        std::size_t cnf_clauses = 0;
    };

    struct RpWitness
    {
        std::vector<Symbol> signature;
        Precedence precedence;
        ArgumentFiltering filtering;
        std::vector<Rule> removed;
        /// Rules that had to be weakly decreasing: U(P,R) or U_pi(P,R).
        UsableSet usable;
    };

    struct RpOutcome
    {
        bool progress = false;
        SatStatus status = SatStatus::unknown;
        DpProblem result;
        std::optional<RpWitness> witness;
        EncodingStats stats;
        std::string formula_dump;
    };

    /// Raised when a decoded model fails oracle replay; never yields a proof.
    class VerificationError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    /**
     * Replays a witness through the order oracle: every pair weakly
     * decreasing, `strict` pairs strictly decreasing (at least one), and
     * every rule in `usable` weakly decreasing. Returns a description of the
     * first failure, or an empty string.
     */
    std::string check_witness(const DpProblem &problem, const Precedence &prec, const ArgumentFiltering &pi,
                              OrderMode mode, const std::vector<std::size_t> &strict, const UsableSet &usable);

    /**
     * Encode, solve, decode and verify one reduction-pair step.
     * No progress on an empty P, UNSAT, or an unknown solver answer.
     */
    RpOutcome reduction_pair_processor(const DpProblem &problem, const ProverConfig &cfg,
                                       Deadline deadline = std::nullopt);

    struct ProofStep
    {
        enum class Kind
        {
            dependency_graph,
            reduction_pair
        };

        Kind kind;
        DpProblem input;
        std::vector<DpProblem> outputs;
        std::optional<RpWitness> witness;
        EncodingStats stats;
        std::string formula_dump;
    };

    struct Verdict
    {
        enum class Kind
        {
            terminating,
            maybe,
            timeout
        };

        Kind kind = Kind::maybe;
        std::string reason;
        std::vector<ProofStep> proof;
    };

    const char *to_string(Verdict::Kind k);

    /**
     * Starts from (DP(R), R); splits by the estimated dependency graph and
     * applies the reduction pair processor to each SCC, re-splitting after
     * every successful step. Terminating iff every sub-problem is emptied.
     */
    Verdict prove(const Trs &rules, const ProverConfig &cfg);

    /// Plain-text proof: filtering per symbol, precedence chains, removed pairs, usable rules.
    std::string format_proof(const Verdict &verdict, const ProverConfig &cfg);

} // namespace termfilter
