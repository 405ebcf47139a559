#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlyap/config.hpp"
#include "mlyap/csv.hpp"
#include "mlyap/svg.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace mlyap;

TEST_CASE("config parses sections, scalars, arrays and comments") {
    const std::string text = R"(# experiment
[model]
model = ou_quadratic
a = 1.0        ; trailing comment
sigma = 1

[mc]
t = 30
n_paths = 1000
p_grid = -0.5 0 0.25 0.375
)";
    const ConfigFile cfg = ConfigFile::parse_text(text);
    CHECK(cfg.has_section("model"));
    CHECK(cfg.get_string("model", "model") == "ou_quadratic");
    CHECK(cfg.get_double("model", "a") == 1.0);
    CHECK(cfg.get_int("mc", "n_paths") == 1000);
    CHECK(cfg.get_double("mc", "missing", 7.5) == 7.5);
    const Vector pg = cfg.get_array("mc", "p_grid");
    CHECK(pg.size() == 4);
    CHECK(pg[3] == 0.375);
}

TEST_CASE("config errors carry line numbers") {
    try {
        ConfigFile::parse_text("[model]\nmodel ou\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line_number == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
        const ConfigFile cfg = ConfigFile::parse_text("[mc]\nt = fast\n");
        cfg.get_double("mc", "t");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line_number == 2);
    }
    CHECK_THROWS_AS(ConfigFile::parse_text("key = 1\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[unterminated\n"), ConfigError);
}

TEST_CASE("missing lookups throw and dump round-trips") {
    const ConfigFile cfg = ConfigFile::parse_text("[model]\nmodel = langevin\n");
    CHECK_THROWS_AS(cfg.get_string("model", "nope"), ConfigError);
    CHECK_THROWS_AS(cfg.get_string("nothing", "x"), ConfigError);
    const ConfigFile again = ConfigFile::parse_text(cfg.dump());
    CHECK(again.get_string("model", "model") == "langevin");
}

TEST_CASE("csv formatting is deterministic and exact") {
    CsvTable t({"a", "b"});
    t.begin_row().cell(0.1).cell(std::string("x"));
    t.begin_row().cell(1.0 / 3.0).cell(2L);
    const std::string s1 = t.str();
    CHECK(s1.substr(0, 4) == "a,b\n");
    CHECK(s1.find("0.10000000000000001") != std::string::npos);  // %.17g round-trips
    CsvTable t2({"a", "b"});
    t2.begin_row().cell(0.1).cell(std::string("x"));
    t2.begin_row().cell(1.0 / 3.0).cell(2L);
    CHECK(t2.str() == s1);
}

TEST_CASE("svg plot writes a well-formed polyline file") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "mlyap_test_plot.svg";
    const Vector x = Vector::LinSpaced(20, 0.0, 1.0);
    Vector y(20);
    for (int i = 0; i < 20; ++i) y[i] = std::sin(x[i]);
    svg_line_plot(path.string(), "demo", x, {y}, {"sin"});
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") == 0);
    CHECK(content.find("<polyline") != std::string::npos);
    CHECK(content.find("</svg>") != std::string::npos);
    fs::remove(path);
}
