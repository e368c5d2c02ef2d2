#include "edsim/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "edsim/errors.hpp"

namespace edsim {

std::string_view intervention_color(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::none: return "#9aa0a6";
        case InterventionKind::support: return "#4c9f70";
        case InterventionKind::reset_insight: return "#c2571a";
        case InterventionKind::health_advice: return "#3a7ca5";
        case InterventionKind::modeling_civility: return "#8e5aa8";
        case InterventionKind::rules_civility: return "#c0a030";
        case InterventionKind::informing_banned: return "#b04a5a";
    }
    return "#9aa0a6";
}

std::string svg_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

namespace {

// Fixed two-decimal pixel coordinates keep the emitted bytes stable.
std::string px(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::string tick_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", value);
    return buffer;
}

}  // namespace

std::string render_box_plot(const std::string& title,
                            const std::vector<BoxGlyph>& glyphs) {
    if (glyphs.empty()) throw ReportError("box plot with no glyphs");

    constexpr double kMarginLeft = 70.0;
    constexpr double kMarginRight = 20.0;
    constexpr double kPlotTop = 48.0;
    constexpr double kPlotBottom = 368.0;
    constexpr double kHeight = 420.0;
    constexpr double kSlot = 110.0;
    constexpr double kBoxHalf = 26.0;

    double lo = glyphs.front().stats.whisker_low;
    double hi = glyphs.front().stats.whisker_high;
    for (const BoxGlyph& glyph : glyphs) {
        lo = std::min(lo, glyph.stats.whisker_low);
        hi = std::max(hi, glyph.stats.whisker_high);
        for (double outlier : glyph.stats.outliers) {
            lo = std::min(lo, outlier);
            hi = std::max(hi, outlier);
        }
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = (hi - lo) * 0.06;
    lo -= pad;
    hi += pad;

    const double width = kMarginLeft + kSlot * static_cast<double>(glyphs.size()) +
                         kMarginRight;
    auto y_of = [&](double value) {
        return kPlotBottom - (value - lo) / (hi - lo) * (kPlotBottom - kPlotTop);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) +
           "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " + px(width) + " " +
           px(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(kHeight) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + px(width / 2) +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           svg_escape(title) + "</text>\n";

    // y axis with five ticks
    svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(kPlotTop) + "\" x2=\"" +
           px(kMarginLeft) + "\" y2=\"" + px(kPlotBottom) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double value = lo + (hi - lo) * static_cast<double>(i) / 4.0;
        const double y = y_of(value);
        svg += "<line x1=\"" + px(kMarginLeft - 4) + "\" y1=\"" + px(y) + "\" x2=\"" +
               px(kMarginLeft) + "\" y2=\"" + px(y) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(y) + "\" x2=\"" +
               px(width - kMarginRight) + "\" y2=\"" + px(y) +
               "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(kMarginLeft - 8) + "\" y=\"" + px(y + 3.5) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" +
               tick_label(value) + "</text>\n";
    }

    for (std::size_t i = 0; i < glyphs.size(); ++i) {
        const BoxGlyph& glyph = glyphs[i];
        const CellSummary& s = glyph.stats;
        const double cx = kMarginLeft + kSlot * (static_cast<double>(i) + 0.5);

        // whisker stem and caps
        svg += "<line x1=\"" + px(cx) + "\" y1=\"" + px(y_of(s.whisker_low)) +
               "\" x2=\"" + px(cx) + "\" y2=\"" + px(y_of(s.whisker_high)) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        for (double w : {s.whisker_low, s.whisker_high}) {
            svg += "<line x1=\"" + px(cx - kBoxHalf / 2) + "\" y1=\"" + px(y_of(w)) +
                   "\" x2=\"" + px(cx + kBoxHalf / 2) + "\" y2=\"" + px(y_of(w)) +
                   "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        }

        // interquartile box and median bar
        svg += "<rect x=\"" + px(cx - kBoxHalf) + "\" y=\"" + px(y_of(s.q3)) +
               "\" width=\"" + px(kBoxHalf * 2) + "\" height=\"" +
               px(y_of(s.q1) - y_of(s.q3)) + "\" fill=\"" + svg_escape(glyph.fill) +
               "\" fill-opacity=\"0.75\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<line x1=\"" + px(cx - kBoxHalf) + "\" y1=\"" + px(y_of(s.median)) +
               "\" x2=\"" + px(cx + kBoxHalf) + "\" y2=\"" + px(y_of(s.median)) +
               "\" stroke=\"#111111\" stroke-width=\"2\"/>\n";

        for (double outlier : s.outliers) {
            svg += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(y_of(outlier)) +
                   "\" r=\"2.5\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        }

        svg += "<text x=\"" + px(cx) + "\" y=\"" + px(kPlotBottom + 18) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
               svg_escape(glyph.label) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace edsim
