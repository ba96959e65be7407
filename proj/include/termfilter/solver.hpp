#pragma once

#include "termfilter/sat.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace termfilter
{

    enum class SatStatus
    {
        sat,
        unsat,
        unknown
    };

    const char *to_string(SatStatus s);

    struct SolveResult
    {
        SatStatus status = SatStatus::unknown;
        /// Total assignment when status == sat; index 0 unused.
        Model model;
    };

    using Deadline = std::optional<std::chrono::steady_clock::time_point>;

    /**
     * Conflict-driven clause learning over two watched literals:
     * first-UIP learning, activity-based branching with phase saving
     * (initial phase false) and Luby restarts. Deterministic for a given
     * CNF. The deadline is polled at every restart and every 256 conflicts.
     */
    SolveResult solve_internal(const Cnf &cnf, Deadline deadline = std::nullopt);

    class SolverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /**
     * Run `command <file.cnf>` and parse the SAT-competition output
     * ("s SATISFIABLE" / "s UNSATISFIABLE" / "s UNKNOWN" and "v" lines).
     * A run that exceeds the deadline yields unknown. Crashes or
     * unparseable output throw SolverError.
     */
    SolveResult solve_external(const Cnf &cnf, const std::string &command, Deadline deadline = std::nullopt);

    /// Parse competition-format solver output for a CNF with num_vars variables.
    SolveResult parse_solver_output(const std::string &output, Var num_vars);

    struct SolverChoice
    {
        /// Empty means the internal solver.
        std::string external_command;

        bool internal() const { return external_command.empty(); }
    };

    SolveResult solve(const Cnf &cnf, const SolverChoice &choice, Deadline deadline = std::nullopt);

} // namespace termfilter
