#pragma once

#include <string>
#include <vector>

#include "opseq/spectral.hpp"

namespace opseq {

/// paper: cells at (p,q). reindexed: D_{p,q} = A_{p,p+q}, cells at (p, q-p).
enum class Grading { paper, reindexed };

const char* grading_name(Grading g);

/// "2[4,2]" for Z^2 + Z/4 + Z/2 from normal-form orders (0 = free); "." for zero.
std::string group_label(const std::vector<Integer>& orders);

struct ChartCell {
    long x = 0;
    long y = 0;
    std::size_t free_rank = 0;
    std::vector<Integer> torsion; // descending

    std::string label() const;
};

struct ChartArrow {
    long x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct ChartPage {
    int r = 1;
    bool infinity = false;
    std::vector<ChartCell> cells;   // nonzero cells only, sorted by (x,y)
    std::vector<ChartArrow> arrows; // nonzero d_r blocks
};

struct ChartDocument {
    Grading grading = Grading::paper;
    long x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    std::vector<ChartPage> pages;
};

ChartPage chart_page(const Page& page, Grading g);
/// Pages of the sequence followed by E^∞ when it was computed exactly.
ChartDocument make_chart(const SpectralSequence& ss, Grading g);

std::string chart_ascii(const ChartDocument& doc);
std::string chart_svg(const ChartDocument& doc);

} // namespace opseq
