#include "termfilter/prover.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace termfilter;

namespace
{
    constexpr int exit_error = 3;

    int exit_code(Verdict::Kind k)
    {
        switch (k)
        {
        case Verdict::Kind::terminating:
            return 0;
        case Verdict::Kind::maybe:
            return 1;
        case Verdict::Kind::timeout:
            return 2;
        }
        return exit_error;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Termination prover for term rewrite systems (dependency pairs, LPO with argument filtering via SAT)"};
    std::string file;
    std::string order = "lpo";
    std::string processor = "thm12";
    std::string solver = "internal";
    std::optional<double> timeout;
    std::string dimacs_dir;
    bool proof = false;
    bool dump = false;

    app.add_option("file", file, "input system in TPDB .trs format")->required();
    app.add_option("--order", order, "lpo (strict precedence) or qlpo (quasi-precedence)")
        ->check(CLI::IsMember({"lpo", "qlpo"}));
    app.add_option("--processor", processor, "thm5 (classical usable rules) or thm12 (usable rules modulo filtering)")
        ->check(CLI::IsMember({"thm5", "thm12"}));
    app.add_option("--solver", solver, "internal or external:<command>");
    app.add_option("--timeout", timeout, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
    app.add_option("--emit-dimacs", dimacs_dir, "write every CNF and a variable manifest into this directory");
    app.add_flag("--proof", proof, "print the proof");
    app.add_flag("--dump-formula", dump, "print each propositional formula before lowering");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_error;
    }

    ProverConfig cfg;
    cfg.mode = order == "qlpo" ? OrderMode::quasi : OrderMode::strict;
    cfg.processor = processor == "thm5" ? ProcessorKind::thm5 : ProcessorKind::thm12;
    cfg.timeout_seconds = timeout;
    cfg.emit_dimacs_dir = dimacs_dir;
    cfg.dump_formula = dump;
    if (solver.rfind("external:", 0) == 0)
    {
        cfg.solver.external_command = solver.substr(9);
        if (cfg.solver.external_command.empty())
        {
            std::cerr << "termfilter: --solver external: needs a command\n";
            return exit_error;
        }
    }
    else if (solver != "internal")
    {
        std::cerr << "termfilter: unknown solver '" << solver << "'\n";
        return exit_error;
    }

    std::ifstream in(file);
    if (!in)
    {
        std::cerr << "termfilter: cannot read " << file << '\n';
        return exit_error;
    }
    std::stringstream text;
    text << in.rdbuf();

    try
    {
        Trs trs = parse_trs(text.str());
        Verdict verdict = prove(trs, cfg);
        if (proof)
        {
            std::cout << format_proof(verdict, cfg);
        }
        else
        {
            std::cout << to_string(verdict.kind) << '\n';
            if (dump)
                for (const auto &step : verdict.proof)
                    if (!step.formula_dump.empty())
                        std::cout << step.formula_dump;
        }
        return exit_code(verdict.kind);
    }
    catch (const TrsError &e)
    {
        std::cerr << file;
        if (e.line())
            std::cerr << ':' << e.line() << ':' << e.column();
        std::cerr << ": " << e.what() << '\n';
    }
    catch (const std::exception &e)
    {
        std::cerr << "termfilter: " << e.what() << '\n';
    }
    return exit_error;
}
