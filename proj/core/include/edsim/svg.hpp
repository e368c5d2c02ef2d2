#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edsim/stats.hpp"
#include "edsim/types.hpp"

namespace edsim {

// Stable fill palette, one entry per intervention.
std::string_view intervention_color(InterventionKind kind);

std::string svg_escape(std::string_view text);

struct BoxGlyph {
    std::string label;  // x-axis label under the box
    CellSummary stats;
    std::string fill;   // CSS color
};

// Standalone SVG document: title, y-axis with ticks, one box-and-whisker
// glyph per entry, outlier dots. Bytes are a pure function of the inputs.
std::string render_box_plot(const std::string& title,
                            const std::vector<BoxGlyph>& glyphs);

}  // namespace edsim
