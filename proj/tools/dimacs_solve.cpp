// Stand-alone DIMACS solver speaking the competition output format.
// Used to exercise the external solver backend.
#include "termfilter/solver.hpp"

#include <fstream>
#include <iostream>

using namespace termfilter;

int main(int argc, char **argv)
{
    if (argc != 2)
    {
        std::cerr << "usage: dimacs_solve <file.cnf>\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    if (!in)
    {
        std::cerr << "dimacs_solve: cannot read " << argv[1] << '\n';
        return 1;
    }
    Cnf cnf = read_dimacs(in);
    SolveResult r = solve_internal(cnf);
    switch (r.status)
    {
    case SatStatus::sat:
        std::cout << "s SATISFIABLE\nv";
        for (Var v = 1; v <= cnf.num_vars; ++v)
            std::cout << ' ' << (r.model[v] ? v : -v);
        std::cout << " 0\n";
        return 10;
    case SatStatus::unsat:
        std::cout << "s UNSATISFIABLE\n";
        return 20;
    case SatStatus::unknown:
        std::cout << "s UNKNOWN\n";
        return 0;
    }
    return 0;
}
