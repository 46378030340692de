#include "opseq/commands.hpp"

#include <fstream>
#include <functional>
#include <optional>

#include <fmt/core.h>

#include "opseq/convergence.hpp"
#include "opseq/error.hpp"
#include "opseq/generators.hpp"
#include "opseq/io.hpp"

namespace opseq {

namespace {

std::string header(const AlgebraTower& t)
{
    return fmt::format("tower: ring {}, window [{},{}], policy {}, operad {} (arity cap {})\n", t.ring().name(), t.p_min, t.p_max,
                       policy_name(t.policy), t.A.operad.name, t.A.operad.arity_cap);
}

std::string matrix_text(const Ring& ring, const Matrix& m)
{
    std::string s = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r)
            s += "; ";
        for (std::size_t c = 0; c < m.cols(); ++c)
            s += (c ? " " : "") + ring.format(m(r, c));
    }
    return s + "]";
}

std::string page_text(const Page& page)
{
    std::string s = page.infinity ? "E^inf\n" : fmt::format("E^{} ({})\n", page.r, route_name(page.route));
    bool any = false;
    for (const auto& [b, e] : page.E) {
        if (e.is_zero())
            continue;
        s += fmt::format("  ({},{}) {}\n", b.p, b.q, group_label(e.orders()));
        any = true;
    }
    if (!any)
        s += "  zero\n";
    if (page.infinity)
        return s;
    for (const auto& [b, m] : page.d) {
        if (m.rows() == 0 || m.cols() == 0 || m.is_zero())
            continue;
        Bidegree t = b + page.d_shift();
        s += fmt::format("  d_{}: ({},{}) -> ({},{}) {}\n", page.r, b.p, b.q, t.p, t.q, matrix_text(page.ring, m));
    }
    return s;
}

/// Runs the parse step; on failure fills the result with exit code 2.
std::optional<AlgebraTower> load(const std::string& path, CommandResult& res)
{
    try {
        return read_tower_file(path);
    } catch (const DocumentError& e) {
        res.exit_code = exit_parse;
        res.err = fmt::format("parse error: {}\n", e.what());
    } catch (const Error& e) {
        res.exit_code = exit_parse;
        res.err = fmt::format("parse error: {}\n", e.what());
    }
    return std::nullopt;
}

/// Core computations report axiom failures as exceptions; map those to exit 3.
CommandResult guarded(const std::function<CommandResult()>& body)
{
    try {
        return body();
    } catch (const Error& e) {
        CommandResult res;
        res.exit_code = exit_axiom;
        res.err = fmt::format("violation: {}: {}\n", errc_name(e.code()), e.what());
        return res;
    }
}

} // namespace

CommandResult verify_report(const AlgebraTower& t)
{
    return guarded([&] {
        CommandResult res;
        res.out = header(t);
        std::vector<std::pair<const char*, std::function<CheckReport()>>> checks{
            {"check_operad", [&] { return check_operad(t.A.operad); }},
            {"check_complex A", [&] { return check_complex(t.A.carrier); }},
            {"check_complex C", [&] { return check_complex(t.C.carrier); }},
            {"check_chain_map i", [&] { return check_chain_map(t.i, t.A.carrier, t.A.carrier); }},
            {"check_chain_map j", [&] { return check_chain_map(t.j, t.A.carrier, t.C.carrier); }},
            {"check_algebra A", [&] { return check_algebra(t.A); }},
            {"check_algebra C", [&] { return check_algebra(t.C); }},
            {"check_tower", [&] { return check_tower(t); }},
        };
        for (const auto& [name, run] : checks) {
            CheckReport r = run();
            res.out += fmt::format("{}: {}\n", name, r.ok() ? "ok" : "FAIL " + r.to_string());
            if (!r.ok()) {
                res.exit_code = exit_axiom;
                res.err = fmt::format("violation: {}\n", r.to_string());
                return res;
            }
        }
        res.out += "verdict: ok\n";
        return res;
    });
}

CommandResult pages_report(const AlgebraTower& t, int r_max, const std::string& route)
{
    if (route != "derivation" && route != "cycles" && route != "both")
        return {exit_usage, "", "unknown route " + route + "\n"};
    CommandResult v = verify_report(t);
    if (v.exit_code != exit_ok)
        return v;
    return guarded([&] {
        CommandResult res;
        res.out = header(t);
        SpectralOptions opt;
        opt.r_max = r_max;
        opt.route = route == "cycles" ? Route::cycles : Route::derivation;
        opt.cross_check = route == "both";
        SpectralSequence ss = compute_spectral_sequence(t, opt);
        bool mismatch = false;
        for (std::size_t n = 0; n < ss.pages.size(); ++n) {
            res.out += page_text(ss.pages[n]);
            if (opt.cross_check) {
                const CheckReport& c = ss.cross_checks[n];
                res.out += fmt::format("  cross-check against {}: {}\n", route_name(ss.alternate[n].route), c.ok() ? "ok" : "MISMATCH " + c.to_string());
                mismatch = mismatch || !c.ok();
            }
        }
        if (ss.stabilization.certified)
            res.out += fmt::format("stable at r={}\n", ss.stabilization.r0);
        else
            res.out += fmt::format("not certified stable: {}\n", ss.stabilization.certificate);
        if (ss.e_infinity_exact)
            res.out += page_text(ss.e_infinity);
        if (mismatch) {
            res.exit_code = exit_mismatch;
            res.err = "cross-check mismatch between routes\n";
        }
        return res;
    });
}

CommandResult converge_report(const AlgebraTower& t)
{
    CommandResult v = verify_report(t);
    if (v.exit_code != exit_ok)
        return v;
    return guarded([&] {
        CommandResult res;
        res.out = header(t);
        BoundedBelow bb = bounded_below(t);
        res.out += fmt::format("bounded below: {} ({})\n", bb.certified ? "yes" : "no", bb.note);
        Page einf = e_infinity_page(t);
        if (t.policy != ExtensionPolicy::constant_above) {
            res.out += "colimit unsupported; E^inf only\n";
            res.out += page_text(einf);
            return res;
        }
        ConvergenceData cd = colimit(t);
        associated_graded(t, cd);
        for (const auto& [q, h] : cd.H) {
            res.out += fmt::format("H_{} = {}\n", q, group_label(h.orders()));
            Matrix below = t.a_boundaries({t.p_max, q});
            for (long p = t.p_min; p <= t.p_max; ++p) {
                Subquotient f = subquotient(h.ambient_rank(), cd.filtration.at({p, q}),
                                            below.rows() == 0 ? Matrix(h.ambient_rank(), 0) : below, cd.ring);
                res.out += fmt::format("  F_{} = {}  gr = {}\n", p, group_label(f.orders()), group_label(cd.graded.at({p, q}).orders()));
            }
        }
        GammaMap g = gamma_map(t, cd, einf);
        std::string verdict = g.isomorphism() ? "isomorphism" : g.injective() ? "injective, not surjective" : "not injective";
        res.out += fmt::format("gamma: {}\n", verdict);
        OperadAlgebra action = page_action(t, einf);
        CheckReport m = check_gamma_multiplicative(cd, g, action);
        res.out += fmt::format("gamma multiplicative: {}\n", m.ok() ? "ok" : "FAIL " + m.to_string());
        if (!m.ok() || !g.isomorphism()) {
            res.exit_code = exit_axiom;
            res.err = "abutment check failed\n";
        }
        return res;
    });
}

CommandResult cmd_verify(const std::string& path)
{
    CommandResult res;
    auto t = load(path, res);
    return t ? verify_report(*t) : res;
}

CommandResult cmd_pages(const std::string& path, int r_max, const std::string& route)
{
    CommandResult res;
    auto t = load(path, res);
    return t ? pages_report(*t, r_max, route) : res;
}

CommandResult cmd_converge(const std::string& path)
{
    CommandResult res;
    auto t = load(path, res);
    return t ? converge_report(*t) : res;
}

CommandResult cmd_chart(const std::string& path, const std::string& format, const std::string& grading)
{
    if (format != "ascii" && format != "svg")
        return {exit_usage, "", "unknown format " + format + "\n"};
    if (grading != "paper" && grading != "reindexed")
        return {exit_usage, "", "unknown grading " + grading + "\n"};
    CommandResult res;
    auto t = load(path, res);
    if (!t)
        return res;
    CommandResult v = verify_report(*t);
    if (v.exit_code != exit_ok)
        return v;
    return guarded([&] {
        CommandResult out;
        ChartDocument doc = make_chart(compute_spectral_sequence(*t), grading == "paper" ? Grading::paper : Grading::reindexed);
        out.out = format == "ascii" ? chart_ascii(doc) : chart_svg(doc);
        return out;
    });
}

AlgebraTower gen_example(const std::string& name, const GenParams& params)
{
    auto ring_or = [&](const char* fallback) { return Ring::parse(params.ring.empty() ? fallback : params.ring); };
    if (name == "filtered_dga") {
        if (params.operad != "comm" && params.operad != "assoc")
            throw Error(Errc::invalid_argument, "filtered_dga supports the operads comm and assoc");
        RandomAlgebraOptions opt;
        opt.commutative = params.operad == "comm";
        return filtered_tower(random_filtered_algebra(params.seed, ring_or("Q"), opt));
    }
    if (name == "random") {
        RandomAlgebraOptions opt;
        opt.commutative = params.seed % 2 == 1;
        return filtered_tower(random_filtered_algebra(params.seed, ring_or("F2"), opt));
    }
    if (name == "bicomplex")
        return filtered_tower(random_bicomplex_algebra(params.seed, ring_or("Z")));
    if (name == "bockstein") {
        if (params.q != 2 && params.q != 3 && params.q != 5 && params.q != 7)
            throw Error(Errc::invalid_argument, "bockstein: q must be a small prime");
        BocksteinSpec spec;
        spec.q = params.q;
        spec.seed = params.seed;
        if (params.free > 0)
            spec.free = {{0, params.free}};
        for (long order : params.torsion) {
            int s = 0;
            long v = order;
            while (v > 1 && v % params.q == 0) {
                v /= params.q;
                ++s;
            }
            if (v != 1 || s == 0 || s > 6)
                throw Error(Errc::invalid_argument, fmt::format("bockstein: torsion order {} is not a power q^s with 1 <= s <= 6", order));
            spec.torsion.push_back({params.degree, s});
        }
        return bockstein_tower(spec);
    }
    throw Error(Errc::invalid_argument, "unknown generator " + name + " (filtered_dga, bockstein, bicomplex, random)");
}

} // namespace opseq
