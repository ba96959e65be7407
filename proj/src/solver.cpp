#include "termfilter/solver.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace termfilter
{

    const char *to_string(SatStatus s)
    {
        switch (s)
        {
        case SatStatus::sat:
            return "SAT";
        case SatStatus::unsat:
            return "UNSAT";
        case SatStatus::unknown:
            return "UNKNOWN";
        }
        return "?";
    }

    namespace
    {
        // Internal literal: 2*(var-1) + (negative ? 1 : 0).
        inline int to_internal(Lit l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }
        inline int var_of(int x) { return x >> 1; }
        inline int negate(int x) { return x ^ 1; }

        double luby(double y, int x)
        {
            int size = 1, seq = 0;
            while (size < x + 1)
            {
                ++seq;
                size = 2 * size + 1;
            }
            while (size - 1 != x)
            {
                size = (size - 1) >> 1;
                --seq;
                x = x % size;
            }
            double r = 1;
            for (int i = 0; i < seq; ++i)
                r *= y;
            return r;
        }

        class Cdcl
        {
        public:
            explicit Cdcl(const Cnf &cnf) : n_(cnf.num_vars)
            {
                value_.assign(n_, -1);
                level_.assign(n_, 0);
                reason_.assign(n_, -1);
                activity_.assign(n_, 0.0);
                phase_.assign(n_, 0);
                seen_.assign(n_, 0);
                heap_index_.assign(n_, -1);
                watches_.resize(2 * static_cast<std::size_t>(n_));
                for (int v = 0; v < n_; ++v)
                    heap_insert(v);

                for (const auto &clause : cnf.clauses)
                {
                    std::vector<int> c;
                    for (Lit l : clause)
                        c.push_back(to_internal(l));
                    std::sort(c.begin(), c.end());
                    c.erase(std::unique(c.begin(), c.end()), c.end());
                    bool tautology = false;
                    for (std::size_t i = 1; i < c.size(); ++i)
                        tautology |= c[i] == negate(c[i - 1]);
                    if (tautology)
                        continue;
                    if (!add_input(std::move(c)))
                    {
                        ok_ = false;
                        return;
                    }
                }
            }

            SolveResult run(Deadline deadline)
            {
                SolveResult result;
                if (!ok_ || propagate() >= 0)
                {
                    result.status = SatStatus::unsat;
                    return result;
                }
                for (int restart = 0;; ++restart)
                {
                    if (expired(deadline))
                        return result;
                    const long budget = static_cast<long>(luby(2, restart) * 100);
                    SatStatus s = search(budget, deadline);
                    if (s == SatStatus::unsat)
                    {
                        result.status = s;
                        return result;
                    }
                    if (s == SatStatus::sat)
                    {
                        result.status = s;
                        result.model.assign(static_cast<std::size_t>(n_) + 1, false);
                        for (int v = 0; v < n_; ++v)
                            result.model[v + 1] = value_[v] == 1;
                        return result;
                    }
                    if (timed_out_)
                        return result;
                    backtrack(0);
                }
            }

        private:
            static bool expired(Deadline deadline)
            {
                return deadline && std::chrono::steady_clock::now() >= *deadline;
            }

            int lit_value(int x) const
            {
                int v = value_[var_of(x)];
                return v < 0 ? -1 : (v ^ (x & 1));
            }

            int decision_level() const { return static_cast<int>(trail_lim_.size()); }

            void enqueue(int x, int reason)
            {
                int v = var_of(x);
                value_[v] = (x & 1) ? 0 : 1;
                level_[v] = decision_level();
                reason_[v] = reason;
                trail_.push_back(x);
            }

            bool add_input(std::vector<int> c)
            {
                if (c.empty())
                    return false;
                if (c.size() == 1)
                {
                    int val = lit_value(c[0]);
                    if (val == 0)
                        return false;
                    if (val < 0)
                        enqueue(c[0], -1);
                    return true;
                }
                attach(std::move(c));
                return true;
            }

            int attach(std::vector<int> c)
            {
                int idx = static_cast<int>(clauses_.size());
                watches_[c[0]].push_back(idx);
                watches_[c[1]].push_back(idx);
                clauses_.push_back(std::move(c));
                return idx;
            }

            /// Returns the index of a conflicting clause, or -1.
            int propagate()
            {
                while (qhead_ < trail_.size())
                {
                    int p = trail_[qhead_++];
                    int false_lit = negate(p);
                    auto &ws = watches_[false_lit];
                    std::size_t i = 0, j = 0;
                    while (i < ws.size())
                    {
                        int ci = ws[i++];
                        auto &c = clauses_[ci];
                        if (c[0] == false_lit)
                            std::swap(c[0], c[1]);
                        if (lit_value(c[0]) == 1)
                        {
                            ws[j++] = ci;
                            continue;
                        }
                        bool moved = false;
                        for (std::size_t k = 2; k < c.size(); ++k)
                            if (lit_value(c[k]) != 0)
                            {
                                std::swap(c[1], c[k]);
                                watches_[c[1]].push_back(ci);
                                moved = true;
                                break;
                            }
                        if (moved)
                            continue;
                        ws[j++] = ci;
                        if (lit_value(c[0]) == 0)
                        {
                            while (i < ws.size())
                                ws[j++] = ws[i++];
                            ws.resize(j);
                            qhead_ = trail_.size();
                            return ci;
                        }
                        enqueue(c[0], ci);
                    }
                    ws.resize(j);
                }
                return -1;
            }

            void analyze(int confl, std::vector<int> &learnt, int &back_level)
            {
                learnt.assign(1, -1);
                int path = 0;
                int p = -1;
                std::size_t index = trail_.size();
                do
                {
                    const auto &c = clauses_[confl];
                    for (std::size_t k = (p < 0 ? 0 : 1); k < c.size(); ++k)
                    {
                        int q = c[k];
                        int v = var_of(q);
                        if (seen_[v] || level_[v] == 0)
                            continue;
                        bump(v);
                        seen_[v] = 1;
                        if (level_[v] >= decision_level())
                            ++path;
                        else
                            learnt.push_back(q);
                    }
                    while (!seen_[var_of(trail_[--index])])
                    {
                    }
                    p = trail_[index];
                    confl = reason_[var_of(p)];
                    seen_[var_of(p)] = 0;
                    --path;
                } while (path > 0);
                learnt[0] = negate(p);

                back_level = 0;
                std::size_t max_i = 1;
                for (std::size_t k = 1; k < learnt.size(); ++k)
                {
                    int lv = level_[var_of(learnt[k])];
                    if (lv > back_level)
                    {
                        back_level = lv;
                        max_i = k;
                    }
                }
                if (learnt.size() > 1)
                    std::swap(learnt[1], learnt[max_i]);
                for (std::size_t k = 1; k < learnt.size(); ++k)
                    seen_[var_of(learnt[k])] = 0;
            }

            void backtrack(int lvl)
            {
                if (decision_level() <= lvl)
                    return;
                for (std::size_t k = trail_.size(); k-- > static_cast<std::size_t>(trail_lim_[lvl]);)
                {
                    int v = var_of(trail_[k]);
                    phase_[v] = static_cast<char>(value_[v]);
                    value_[v] = -1;
                    reason_[v] = -1;
                    if (heap_index_[v] < 0)
                        heap_insert(v);
                }
                trail_.resize(trail_lim_[lvl]);
                trail_lim_.resize(lvl);
                qhead_ = trail_.size();
            }

            SatStatus search(long budget, Deadline deadline)
            {
                long conflicts = 0;
                std::vector<int> learnt;
                for (;;)
                {
                    int confl = propagate();
                    if (confl >= 0)
                    {
                        ++conflicts;
                        if (decision_level() == 0)
                            return SatStatus::unsat;
                        int back_level = 0;
                        analyze(confl, learnt, back_level);
                        backtrack(back_level);
                        if (learnt.size() == 1)
                            enqueue(learnt[0], -1);
                        else
                            enqueue(learnt[0], attach(learnt));
                        decay();
                        if ((conflicts & 255) == 0 && expired(deadline))
                        {
                            timed_out_ = true;
                            return SatStatus::unknown;
                        }
                        continue;
                    }
                    if (conflicts >= budget)
                        return SatStatus::unknown;
                    int v = pick_branch();
                    if (v < 0)
                        return SatStatus::sat;
                    trail_lim_.push_back(static_cast<int>(trail_.size()));
                    enqueue(2 * v + (phase_[v] == 1 ? 0 : 1), -1);
                }
            }

            int pick_branch()
            {
                while (!heap_.empty())
                {
                    int v = heap_pop();
                    if (value_[v] < 0)
                        return v;
                }
                return -1;
            }

            void bump(int v)
            {
                activity_[v] += var_inc_;
                if (activity_[v] > 1e100)
                {
                    for (double &a : activity_)
                        a *= 1e-100;
                    var_inc_ *= 1e-100;
                }
                if (heap_index_[v] >= 0)
                    sift_up(heap_index_[v]);
            }

            void decay() { var_inc_ /= 0.95; }

            // max-heap on activity, ties broken by lower variable index
            bool before(int a, int b) const
            {
                return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
            }

            void heap_insert(int v)
            {
                heap_index_[v] = static_cast<int>(heap_.size());
                heap_.push_back(v);
                sift_up(heap_index_[v]);
            }

            int heap_pop()
            {
                int top = heap_.front();
                heap_index_[top] = -1;
                int last = heap_.back();
                heap_.pop_back();
                if (!heap_.empty())
                {
                    heap_[0] = last;
                    heap_index_[last] = 0;
                    sift_down(0);
                }
                return top;
            }

            void sift_up(int i)
            {
                int v = heap_[i];
                while (i > 0)
                {
                    int parent = (i - 1) / 2;
                    if (!before(v, heap_[parent]))
                        break;
                    heap_[i] = heap_[parent];
                    heap_index_[heap_[i]] = i;
                    i = parent;
                }
                heap_[i] = v;
                heap_index_[v] = i;
            }

            void sift_down(int i)
            {
                int v = heap_[i];
                const int size = static_cast<int>(heap_.size());
                for (;;)
                {
                    int child = 2 * i + 1;
                    if (child >= size)
                        break;
                    if (child + 1 < size && before(heap_[child + 1], heap_[child]))
                        ++child;
                    if (!before(heap_[child], v))
                        break;
                    heap_[i] = heap_[child];
                    heap_index_[heap_[i]] = i;
                    i = child;
                }
                heap_[i] = v;
                heap_index_[v] = i;
            }

            int n_;
            bool ok_ = true;
            bool timed_out_ = false;
            std::vector<std::vector<int>> clauses_;
            std::vector<std::vector<int>> watches_;
            std::vector<int> value_, level_, reason_;
            std::vector<double> activity_;
            std::vector<char> phase_, seen_;
            std::vector<int> trail_, trail_lim_;
            std::size_t qhead_ = 0;
            std::vector<int> heap_, heap_index_;
            double var_inc_ = 1.0;
        };
    } // namespace

    SolveResult solve_internal(const Cnf &cnf, Deadline deadline)
    {
        return Cdcl(cnf).run(deadline);
    }

    SolveResult parse_solver_output(const std::string &output, Var num_vars)
    {
        SolveResult result;
        bool have_status = false;
        std::vector<Lit> values;
        std::istringstream is(output);
        std::string line;
        while (std::getline(is, line))
        {
            if (line.rfind("s ", 0) == 0)
            {
                std::string status = line.substr(2);
                status.erase(status.find_last_not_of(" \t\r") + 1);
                if (status == "SATISFIABLE")
                    result.status = SatStatus::sat;
                else if (status == "UNSATISFIABLE")
                    result.status = SatStatus::unsat;
                else if (status == "UNKNOWN")
                    result.status = SatStatus::unknown;
                else
                    throw SolverError("unrecognised solver status line: " + line);
                have_status = true;
            }
            else if (line.rfind("v ", 0) == 0 || line == "v")
            {
                std::istringstream ls(line.substr(1));
                Lit l;
                while (ls >> l)
                    if (l != 0)
                        values.push_back(l);
                if (!ls.eof())
                    throw SolverError("malformed value line: " + line);
            }
        }
        if (!have_status)
            throw SolverError("solver output has no status line");
        if (result.status == SatStatus::sat)
        {
            result.model.assign(static_cast<std::size_t>(num_vars) + 1, false);
            std::vector<bool> seen(static_cast<std::size_t>(num_vars) + 1, false);
            for (Lit l : values)
            {
                if (std::abs(l) > num_vars)
                    throw SolverError("value line mentions unknown variable " + std::to_string(l));
                result.model[std::abs(l)] = l > 0;
                seen[std::abs(l)] = true;
            }
            for (Var v = 1; v <= num_vars; ++v)
                if (!seen[v])
                    throw SolverError("model omits variable " + std::to_string(v));
        }
        return result;
    }

    SolveResult solve_external(const Cnf &cnf, const std::string &command, Deadline deadline)
    {
        namespace fs = std::filesystem;
        static int counter = 0;
        fs::path file = fs::temp_directory_path() /
                        ("termfilter-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".cnf");
        {
            std::ofstream out(file);
            if (!out)
                throw SolverError("cannot write " + file.string());
            write_dimacs(out, cnf);
        }

        std::string cmd = command + " '" + file.string() + "'";
        if (deadline)
        {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0)
            {
                fs::remove(file);
                return {};
            }
            cmd = "timeout " + std::to_string(static_cast<double>(left.count()) / 1000.0) + " " + cmd;
        }
        cmd += " 2>/dev/null";

        FILE *pipe = ::popen(cmd.c_str(), "r");
        if (!pipe)
        {
            fs::remove(file);
            throw SolverError("cannot start external solver: " + command);
        }
        std::string output;
        std::array<char, 4096> buf{};
        std::size_t got;
        while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
            output.append(buf.data(), got);
        int status = ::pclose(pipe);
        fs::remove(file);

        if (WIFEXITED(status) && WEXITSTATUS(status) == 124 && deadline)
            return {};
        if (WIFSIGNALED(status))
            throw SolverError("external solver terminated by signal " + std::to_string(WTERMSIG(status)));
        // Competition solvers exit with 10 (SAT) / 20 (UNSAT); anything else must still print a status.
        return parse_solver_output(output, cnf.num_vars);
    }

    SolveResult solve(const Cnf &cnf, const SolverChoice &choice, Deadline deadline)
    {
        if (choice.internal())
            return solve_internal(cnf, deadline);
        return solve_external(cnf, choice.external_command, deadline);
    }

} // namespace termfilter
