#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "edsim/errors.hpp"
#include "edsim/report.hpp"
#include "edsim/score_store.hpp"
#include "edsim/svg.hpp"
#include "fixture_runs.hpp"
#include "helpers.hpp"

using namespace edsim;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 1e-9;

void check_report_rows(const fs::path& report_csv,
                       const std::vector<test::ExpectedEffectRow>& expected) {
    std::vector<std::string> lines = test::split_lines(test::read_file(report_csv));
    REQUIRE(lines.size() == expected.size() + 1);
    CHECK(lines[0] ==
          "group,med_s_none,mean_diff,max_diff,max_intervention,min_diff,min_intervention");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const std::vector<std::string> fields = test::csv_fields(lines[i + 1]);
        REQUIRE(fields.size() == 7);
        const test::ExpectedEffectRow& row = expected[i];
        CHECK(fields[0] == row.group);
        CHECK(std::abs(std::stod(fields[1]) - row.med_s_none) <= kTol);
        CHECK(std::abs(std::stod(fields[2]) - row.mean_diff) <= kTol);
        CHECK(std::abs(std::stod(fields[3]) - row.max_diff) <= kTol);
        CHECK(fields[4] == row.max_intervention);
        CHECK(std::abs(std::stod(fields[5]) - row.min_diff) <= kTol);
        CHECK(fields[6] == row.min_intervention);
    }
}

CellSummary glyph_stats(double median, double q1, double q3, double lo, double hi) {
    CellSummary s;
    s.cell_key = "twitter/c/none/m@v1";
    s.n = 5;
    s.median = median;
    s.q1 = q1;
    s.q3 = q3;
    s.whisker_low = lo;
    s.whisker_high = hi;
    return s;
}

}  // namespace

TEST_CASE("each intervention has a distinct stable fill color") {
    std::set<std::string> colors;
    for (InterventionKind kind : kAllInterventions) {
        std::string color(intervention_color(kind));
        CHECK(color.size() == 7);
        CHECK(color[0] == '#');
        colors.insert(color);
    }
    CHECK(colors.size() == kAllInterventions.size());
    CHECK(intervention_color(InterventionKind::support) ==
          intervention_color(InterventionKind::support));
}

TEST_CASE("svg text escaping covers the five reserved characters") {
    CHECK(svg_escape("a & b < c > d \" e ' f") ==
          "a &amp; b &lt; c &gt; d &quot; e &apos; f");
    CHECK(svg_escape("plain") == "plain");
    CHECK(svg_escape("") == "");
}

TEST_CASE("box plots are deterministic documents with one glyph per box") {
    std::vector<BoxGlyph> glyphs = {
        {"none", glyph_stats(0.5, 0.4, 0.6, 0.3, 0.7), "#9aa0a6"},
        {"support", glyph_stats(0.7, 0.6, 0.8, 0.5, 0.9), "#4c9f70"},
    };
    glyphs[1].stats.outliers = {0.1};

    const std::string svg = render_box_plot("demo & test", glyphs);
    CHECK(svg == render_box_plot("demo & test", glyphs));
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(svg.find("demo &amp; test") != std::string::npos);
    CHECK(svg.find(">none</text>") != std::string::npos);
    CHECK(svg.find(">support</text>") != std::string::npos);
    CHECK(svg.find("fill=\"#4c9f70\"") != std::string::npos);

    // one interquartile rect per glyph (plus the background rect)
    std::size_t rects = 0;
    for (std::size_t at = svg.find("<rect"); at != std::string::npos;
         at = svg.find("<rect", at + 1)) {
        ++rects;
    }
    CHECK(rects == 3);
    CHECK(svg.find("<circle") != std::string::npos);  // the outlier dot

    CHECK_THROWS_AS(render_box_plot("empty", {}), ReportError);
}

TEST_CASE("a flat distribution still renders with a widened axis") {
    std::vector<BoxGlyph> glyphs = {
        {"none", glyph_stats(0.2, 0.2, 0.2, 0.2, 0.2), "#9aa0a6"}};
    const std::string svg = render_box_plot("flat", glyphs);
    CHECK(svg.find("NaN") == std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("report cut slugs round-trip") {
    for (ReportCut cut : {ReportCut::cross_model, ReportCut::cross_platform,
                          ReportCut::cross_community}) {
        auto back = report_cut_from_slug(report_cut_slug(cut));
        REQUIRE(back.has_value());
        CHECK(*back == cut);
    }
    CHECK(!report_cut_from_slug("cross_everything").has_value());
}

TEST_CASE("the model-comparison cut reproduces its expected table") {
    test::TempDir dir;
    test::make_fixture_run(1, dir.path());
    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_model, {});

    CHECK(bundle.group_count == 4);
    CHECK(bundle.conversations_scored == 140);
    CHECK(bundle.conversations_excluded == 0);
    CHECK(bundle.directory == dir.path() / "reports" / "cross_model");
    check_report_rows(bundle.directory / "report.csv", test::expected_rows(1));

    for (const char* name : {"report.csv", "cells.csv", "summary.md"}) {
        CHECK(fs::exists(bundle.directory / name));
    }
    // '@' is not filename-safe, so the slug flattens it
    CHECK(fs::exists(bundle.directory / "boxplot_Mistral_v1.svg"));
    CHECK(fs::exists(bundle.directory / "boxplot_GPT3.5-turbo_v1.svg"));
    CHECK(bundle.table_text.find("| Mistral@v1 | 0.613 | ") != std::string::npos);
    CHECK(bundle.table_text.find(" (support) | ") != std::string::npos);
    CHECK(bundle.table_text.find(" (reset insight) |") != std::string::npos);
}

TEST_CASE("the platform-comparison cut reproduces its expected table") {
    test::TempDir dir;
    test::make_fixture_run(2, dir.path());
    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_platform, {});

    CHECK(bundle.group_count == 6);
    CHECK(bundle.conversations_scored == 210);
    check_report_rows(bundle.directory / "report.csv", test::expected_rows(2));

    // Group labels hold commas, so the filename slug flattens them.
    CHECK(fs::exists(bundle.directory / "boxplot_Twitter__keto_recipes.svg"));
    CHECK(fs::exists(bundle.directory / "boxplot_ED_Forum__ED_exp.svg"));
}

TEST_CASE("the community-comparison cut reproduces its expected table") {
    test::TempDir dir;
    test::make_fixture_run(3, dir.path());
    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_community, {});

    CHECK(bundle.group_count == 7);
    CHECK(bundle.conversations_scored == 245);
    check_report_rows(bundle.directory / "report.csv", test::expected_rows(3));
    CHECK(fs::exists(bundle.directory / "boxplot_Keto_transition.svg"));

    const std::string summary = test::read_file(bundle.directory / "summary.md");
    CHECK(summary.find("cross_community") != std::string::npos);
    CHECK(summary.find("- platform: Twitter") != std::string::npos);
    CHECK(summary.find("- model: Mistral@v1") != std::string::npos);
    CHECK(summary.find("- scorer: lexicon") != std::string::npos);
    CHECK(summary.find("- conversations scored: 245") != std::string::npos);
}

TEST_CASE("cells.csv lists one five-number row per cell") {
    test::TempDir dir;
    test::make_fixture_run(1, dir.path());
    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_model, {});

    std::vector<std::string> lines =
        test::split_lines(test::read_file(bundle.directory / "cells.csv"));
    REQUIRE(lines.size() == 1 + 4 * 7);
    CHECK(lines[0] ==
          "group,intervention,cell_key,n,median,q1,q3,whisker_low,whisker_high,outliers");

    const std::vector<std::string> first = test::csv_fields(lines[1]);
    REQUIRE(first.size() == 10);
    CHECK(first[0] == "Mistral@v1");
    CHECK(first[1] == "none");
    CHECK(first[2] == "twitter/keto_recipes/none/Mistral@v1");
    CHECK(first[3] == "5");
    CHECK(std::abs(std::stod(first[4]) - 0.613) <= kTol);
    // replicates are the median +/- 0.02 fan, so the extremes are the whiskers
    CHECK(std::abs(std::stod(first[7]) - 0.593) <= kTol);
    CHECK(std::abs(std::stod(first[8]) - 0.633) <= kTol);
    CHECK(first[9].empty());

    // q1 <= median <= q3 on every row
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = test::csv_fields(lines[i]);
        REQUIRE(fields.size() == 10);
        const double q1 = std::stod(fields[5]);
        const double median = std::stod(fields[4]);
        const double q3 = std::stod(fields[6]);
        CHECK(q1 <= median);
        CHECK(median <= q3);
        CHECK(std::stod(fields[7]) <= q1);
        CHECK(q3 <= std::stod(fields[8]));
    }
}

TEST_CASE("identical inputs give byte-identical bundles") {
    test::TempDir dir;
    test::make_fixture_run(3, dir.path());
    ReportBundle first = build_report(dir.path(), ReportCut::cross_community, {});

    std::map<std::string, std::string> bytes;
    for (const auto& entry : fs::directory_iterator(first.directory)) {
        bytes[entry.path().filename().string()] = test::read_file(entry.path());
    }
    REQUIRE(bytes.size() == 3 + 7);

    ReportBundle second = build_report(dir.path(), ReportCut::cross_community, {});
    CHECK(second.group_count == first.group_count);
    for (const auto& [name, content] : bytes) {
        CHECK(test::read_file(first.directory / name) == content);
    }
}

TEST_CASE("score-store row order does not affect the bundle") {
    test::TempDir dir;
    test::make_fixture_run(1, dir.path());
    ReportBundle before = build_report(dir.path(), ReportCut::cross_model, {});
    const std::string report_before = test::read_file(before.directory / "report.csv");
    const std::string cells_before = test::read_file(before.directory / "cells.csv");

    const fs::path store = score_store_path(dir.path(), "lexicon");
    std::vector<ConversationScore> scores = read_score_store(store);
    std::shuffle(scores.begin(), scores.end(), std::mt19937(7));
    write_score_store(store, scores);

    ReportBundle after = build_report(dir.path(), ReportCut::cross_model, {});
    CHECK(test::read_file(after.directory / "report.csv") == report_before);
    CHECK(test::read_file(after.directory / "cells.csv") == cells_before);
}

TEST_CASE("filters pin the controlled variables") {
    test::TempDir dir;
    test::make_fixture_run(2, dir.path());

    // cross_community on the reddit rows of the platform-comparison store
    ReportFilters filters;
    filters.platform = PlatformId::reddit;
    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_community, filters);
    CHECK(bundle.group_count == 2);

    std::vector<std::string> lines =
        test::split_lines(test::read_file(bundle.directory / "report.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(test::csv_fields(lines[1])[0] == "comments");
    CHECK(test::csv_fields(lines[2])[0] == "eat X cal");

    // cross_model pinned to the second twitter community
    ReportFilters ed;
    ed.platform = PlatformId::twitter;
    ed.community_id = "ed_twitter";
    ReportBundle ed_bundle = build_report(dir.path(), ReportCut::cross_model, ed);
    CHECK(ed_bundle.group_count == 1);
    std::vector<std::string> ed_lines =
        test::split_lines(test::read_file(ed_bundle.directory / "report.csv"));
    const std::vector<std::string> row = test::csv_fields(ed_lines.at(1));
    CHECK(row[0] == "Mistral@v1");
    CHECK(std::abs(std::stod(row[1]) - 0.613) <= kTol);
    CHECK(std::abs(std::stod(row[2]) - 0.121) <= kTol);

    // pinning a community that is not in the run fails loudly
    ReportFilters unknown;
    unknown.community_id = "no_such_community";
    CHECK_THROWS_AS(build_report(dir.path(), ReportCut::cross_model, unknown),
                    ReportError);
}

TEST_CASE("a missing baseline cell is reported by name") {
    test::TempDir dir;
    test::make_fixture_run(1, dir.path());
    const fs::path store = score_store_path(dir.path(), "lexicon");
    std::vector<ConversationScore> scores = read_score_store(store);
    scores.erase(std::remove_if(scores.begin(), scores.end(),
                                [](const ConversationScore& s) {
                                    return s.cell_key ==
                                           "twitter/keto_recipes/none/LLaMA3@v1";
                                }),
                 scores.end());
    write_score_store(store, scores);

    try {
        build_report(dir.path(), ReportCut::cross_model, {});
        FAIL("expected ReportError");
    } catch (const ReportError& e) {
        CHECK(std::string(e.what()).find("twitter/keto_recipes/none/LLaMA3@v1") !=
              std::string::npos);
    }
}

TEST_CASE("reporting needs a run directory and a score store") {
    test::TempDir dir;
    CHECK_THROWS_AS(build_report(dir.path() / "nope", ReportCut::cross_model, {}),
                    IoError);

    // run.json without scores
    test::make_fixture_run(1, dir.path());
    fs::remove(score_store_path(dir.path(), "lexicon"));
    CHECK_THROWS_AS(build_report(dir.path(), ReportCut::cross_model, {}), IoError);
}

TEST_CASE("failed replicates in the manifest surface as exclusions") {
    test::TempDir dir;
    test::make_fixture_run(1, dir.path());

    Manifest manifest;
    manifest.put(Manifest::key("twitter/keto_recipes/none/Mistral@v1", 99),
                 ManifestEntry{ReplicateStatus::failed, "0000000000000000"});
    manifest.put(Manifest::key("twitter/keto_recipes/support/Mistral@v1", 98),
                 ManifestEntry{ReplicateStatus::failed, "0000000000000000"});
    manifest.put(Manifest::key("twitter/keto_recipes/support/Mistral@v1", 0),
                 ManifestEntry{ReplicateStatus::complete, "0000000000000000"});
    manifest.save(dir.path() / "manifest.json");

    ReportBundle bundle = build_report(dir.path(), ReportCut::cross_model, {});
    CHECK(bundle.conversations_excluded == 2);
    const std::string summary = test::read_file(bundle.directory / "summary.md");
    CHECK(summary.find("failed conversations excluded: 2") != std::string::npos);
}
