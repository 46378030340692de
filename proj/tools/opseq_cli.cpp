#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "opseq/commands.hpp"
#include "opseq/error.hpp"
#include "opseq/io.hpp"

using namespace opseq;

namespace {

int emit(const CommandResult& r)
{
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"opseq: spectral sequences of towers of operad algebras"};
    app.require_subcommand(1);

    std::string file;
    auto* verify = app.add_subcommand("verify", "check the tower document against all axioms");
    verify->add_option("file", file, "tower document")->required();

    int r_max = 16;
    std::string route = "derivation";
    auto* pages = app.add_subcommand("pages", "compute pages until stabilization or --rmax");
    pages->add_option("file", file, "tower document")->required();
    pages->add_option("--rmax", r_max, "last page to compute")->check(CLI::Range(1, 64));
    pages->add_option("--route", route, "derivation, cycles or both")->check(CLI::IsMember({"derivation", "cycles", "both"}));

    auto* converge = app.add_subcommand("converge", "abutment: H, filtration, gr, gamma");
    converge->add_option("file", file, "tower document")->required();

    std::string format = "ascii", grading = "paper";
    auto* chart = app.add_subcommand("chart", "page chart");
    chart->add_option("file", file, "tower document")->required();
    chart->add_option("--format", format, "ascii or svg")->check(CLI::IsMember({"ascii", "svg"}));
    chart->add_option("--grading", grading, "paper or reindexed")->check(CLI::IsMember({"paper", "reindexed"}));

    std::string name, out, torsion;
    GenParams gp;
    auto* gen = app.add_subcommand("gen", "generate a tower document");
    gen->add_option("name", name, "filtered_dga, bockstein, bicomplex or random")->required();
    gen->add_option("--seed", gp.seed, "generator seed");
    gen->add_option("--out", out, "output file (default stdout)");
    gen->add_option("--ring", gp.ring, "F<p>, Q or Z");
    gen->add_option("--operad", gp.operad, "filtered_dga: comm or assoc");
    gen->add_option("--q", gp.q, "bockstein: the prime q");
    gen->add_option("--torsion", gp.torsion, "bockstein: torsion orders q^s")->delimiter(',');
    gen->add_option("--degree", gp.degree, "bockstein: degree of the torsion classes");
    gen->add_option("--free", gp.free, "bockstein: free rank in degree 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (*verify)
        return emit(cmd_verify(file));
    if (*pages)
        return emit(cmd_pages(file, r_max, route));
    if (*converge)
        return emit(cmd_converge(file));
    if (*chart)
        return emit(cmd_chart(file, format, grading));

    try {
        std::string doc = serialize_tower(gen_example(name, gp));
        if (out.empty()) {
            std::cout << doc;
            return 0;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return exit_usage;
        }
        f << doc;
        return f.good() ? 0 : exit_usage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }
}
