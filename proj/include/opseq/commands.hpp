#pragma once

#include <string>
#include <vector>

#include "opseq/chart.hpp"
#include "opseq/couple.hpp"

namespace opseq {

enum ExitCode : int { exit_ok = 0, exit_parse = 2, exit_axiom = 3, exit_mismatch = 4, exit_usage = 1 };

struct CommandResult {
    int exit_code = exit_ok;
    std::string out;
    std::string err;
};

CommandResult cmd_verify(const std::string& path);
/// route: derivation, cycles or both.
CommandResult cmd_pages(const std::string& path, int r_max, const std::string& route);
CommandResult cmd_converge(const std::string& path);
/// format: ascii or svg; grading: paper or reindexed.
CommandResult cmd_chart(const std::string& path, const std::string& format, const std::string& grading);

/// Same as the commands above on an in-memory tower (no parse step).
CommandResult verify_report(const AlgebraTower& t);
CommandResult pages_report(const AlgebraTower& t, int r_max, const std::string& route);
CommandResult converge_report(const AlgebraTower& t);

struct GenParams {
    std::uint64_t seed = 1;
    std::string ring;                 // empty: generator default
    std::string operad = "comm";      // filtered_dga: comm or assoc
    long q = 2;                       // bockstein prime
    std::vector<long> torsion{4};     // bockstein: orders q^s
    long degree = 0;                  // bockstein: degree of the torsion classes
    int free = 1;                     // bockstein: free rank in degree 0
};

/// filtered_dga, bockstein, bicomplex, random. Throws Error(invalid_argument).
AlgebraTower gen_example(const std::string& name, const GenParams& params);

} // namespace opseq
