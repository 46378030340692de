#include "opseq/chart.hpp"

#include <algorithm>
#include <map>

#include <fmt/core.h>

namespace opseq {

const char* grading_name(Grading g) { return g == Grading::paper ? "paper" : "reindexed"; }

std::string group_label(const std::vector<Integer>& orders)
{
    ChartCell c;
    for (const auto& o : orders) {
        if (o == 0)
            ++c.free_rank;
        else
            c.torsion.push_back(o);
    }
    std::sort(c.torsion.begin(), c.torsion.end(), std::greater<>());
    return c.label();
}

std::string ChartCell::label() const
{
    if (free_rank == 0 && torsion.empty())
        return ".";
    std::string s = free_rank > 0 || torsion.empty() ? std::to_string(free_rank) : "";
    if (!torsion.empty()) {
        s += '[';
        for (std::size_t k = 0; k < torsion.size(); ++k)
            s += (k ? "," : "") + torsion[k].get_str();
        s += ']';
    }
    return s;
}

namespace {

std::pair<long, long> place(Bidegree b, Grading g) { return {b.p, g == Grading::paper ? b.q : b.q - b.p}; }

} // namespace

ChartPage chart_page(const Page& page, Grading g)
{
    ChartPage out;
    out.r = page.r;
    out.infinity = page.infinity;
    for (const auto& [b, e] : page.E) {
        if (e.is_zero())
            continue;
        ChartCell c;
        std::tie(c.x, c.y) = place(b, g);
        for (const auto& o : e.orders()) {
            if (o == 0)
                ++c.free_rank;
            else
                c.torsion.push_back(o);
        }
        std::sort(c.torsion.begin(), c.torsion.end(), std::greater<>());
        out.cells.push_back(std::move(c));
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const ChartCell& a, const ChartCell& b) {
        return std::pair(a.x, a.y) < std::pair(b.x, b.y);
    });
    if (!page.infinity) {
        for (const auto& [b, m] : page.d) {
            if (m.rows() == 0 || m.cols() == 0 || m.is_zero())
                continue;
            Bidegree t = b + page.d_shift();
            if (page.size(b) == 0 || page.size(t) == 0)
                continue;
            ChartArrow a;
            std::tie(a.x0, a.y0) = place(b, g);
            std::tie(a.x1, a.y1) = place(t, g);
            out.arrows.push_back(a);
        }
    }
    return out;
}

ChartDocument make_chart(const SpectralSequence& ss, Grading g)
{
    ChartDocument doc;
    doc.grading = g;
    for (const auto& p : ss.pages)
        doc.pages.push_back(chart_page(p, g));
    if (ss.e_infinity_exact)
        doc.pages.push_back(chart_page(ss.e_infinity, g));
    bool first = true;
    auto widen = [&](long x, long y) {
        if (first) {
            doc.x_min = doc.x_max = x;
            doc.y_min = doc.y_max = y;
            first = false;
        }
        doc.x_min = std::min(doc.x_min, x);
        doc.x_max = std::max(doc.x_max, x);
        doc.y_min = std::min(doc.y_min, y);
        doc.y_max = std::max(doc.y_max, y);
    };
    // The grid spans the window and every q with a chain group.
    const AlgebraTower& t = ss.tower;
    for (long q : t.q_values()) {
        for (long p = t.p_min; p <= t.p_max; ++p) {
            auto [x, y] = place({p, q}, g);
            widen(x, y);
        }
    }
    return doc;
}

std::string chart_ascii(const ChartDocument& doc)
{
    std::string out;
    for (const auto& page : doc.pages) {
        std::map<std::pair<long, long>, std::string> labels;
        std::size_t width = 1;
        for (const auto& c : page.cells) {
            labels[{c.x, c.y}] = c.label();
            width = std::max(width, labels[{c.x, c.y}].size());
        }
        std::size_t ywidth = std::max(fmt::format("{}", doc.y_min).size(), fmt::format("{}", doc.y_max).size());
        out += page.infinity ? std::string("E^inf") : fmt::format("E^{}", page.r);
        out += fmt::format(" ({} grading)\n", grading_name(doc.grading));
        for (long y = doc.y_max; y >= doc.y_min; --y) {
            out += fmt::format("{:>{}} |", y, ywidth);
            for (long x = doc.x_min; x <= doc.x_max; ++x) {
                auto it = labels.find({x, y});
                out += fmt::format(" {:>{}}", it == labels.end() ? "." : it->second, width);
            }
            out += '\n';
        }
        out += std::string(ywidth, ' ') + " +" + std::string((width + 1) * std::size_t(doc.x_max - doc.x_min + 1), '-') + '\n';
        out += std::string(ywidth + 2, ' ');
        for (long x = doc.x_min; x <= doc.x_max; ++x)
            out += fmt::format(" {:>{}}", x, width);
        out += '\n';
        for (const auto& a : page.arrows) {
            if (page.infinity)
                continue;
            out += fmt::format("d_{}: ({},{}) -> ({},{})\n", page.r, a.x0, a.y0, a.x1, a.y1);
        }
        out += '\n';
    }
    return out;
}

// Fixed template: one <g class="page"> per page stacked vertically; each page
// has a title <text>, one <rect class="cell"> and <text class="label"> per
// nonzero cell, axis tick labels, and one <line class="arrow"> per arrow.
std::string chart_svg(const ChartDocument& doc)
{
    constexpr long cell = 48, margin = 40, title = 24;
    long cols = doc.x_max - doc.x_min + 1, rows = doc.y_max - doc.y_min + 1;
    long page_w = margin + cols * cell + 8, page_h = title + rows * cell + margin;
    long height = page_h * long(doc.pages.size());
    auto cx = [&](long x) { return margin + (x - doc.x_min) * cell + cell / 2; };
    auto cy = [&](long top, long y) { return top + title + (doc.y_max - y) * cell + cell / 2; };

    std::string s;
    s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
                     "data-grading=\"{}\">\n",
                     page_w, height, page_w, height, grading_name(doc.grading));
    s += "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
         "<path d=\"M0,0 L8,4 L0,8 z\"/></marker></defs>\n";
    for (std::size_t k = 0; k < doc.pages.size(); ++k) {
        const auto& page = doc.pages[k];
        long top = page_h * long(k);
        std::string name = page.infinity ? "inf" : std::to_string(page.r);
        s += fmt::format("<g class=\"page\" data-r=\"{}\">\n", name);
        s += fmt::format("<text class=\"title\" x=\"{}\" y=\"{}\">E^{}</text>\n", margin, top + title - 6, name);
        for (long x = doc.x_min; x <= doc.x_max; ++x)
            s += fmt::format("<text class=\"tick\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", cx(x),
                             top + title + rows * cell + 16, x);
        for (long y = doc.y_min; y <= doc.y_max; ++y)
            s += fmt::format("<text class=\"tick\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", margin - 6, cy(top, y) + 4, y);
        for (const auto& c : page.cells) {
            s += fmt::format("<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                             cx(c.x) - cell / 2 + 2, cy(top, c.y) - cell / 2 + 2, cell - 4, cell - 4);
            s += fmt::format("<text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" data-p=\"{}\" data-q=\"{}\">{}</text>\n",
                             cx(c.x), cy(top, c.y) + 4, c.x, c.y, c.label());
        }
        for (const auto& a : page.arrows)
            s += fmt::format("<line class=\"arrow\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" marker-end=\"url(#head)\"/>\n",
                             cx(a.x0), cy(top, a.y0), cx(a.x1), cy(top, a.y1));
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace opseq
