#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "tribilliard/cli.hpp"
#include "tribilliard/expr.hpp"
#include "tribilliard/serialize.hpp"
#include "tribilliard/svg.hpp"
#include "tribilliard/trajectory_io.hpp"

using namespace tribilliard;
namespace fs = std::filesystem;

namespace {
const double kAlphaRef = pi * std::sqrt(3.0) / 6.0;

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tribilliard_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(std::vector<const char*> args) {
  args.insert(args.begin(), "tribilliard");
  return cli_dispatch(static_cast<int>(args.size()), args.data());
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}
}  // namespace

TEST_CASE("expression evaluation") {
  SECTION("values") {
    CHECK(eval_expr("pi*sqrt(3)/6") == pi * std::sqrt(3.0) / 6.0);
    CHECK(eval_expr("1/sqrt(2)") == 1.0 / std::sqrt(2.0));
    CHECK(eval_expr("(1+2)*3") == 9.0);
    CHECK(eval_expr("-2e-3 + 1") == 1.0 - 2e-3);
    CHECK(eval_expr(" 2 * pi / 7 ") == 2.0 * pi / 7.0);
    CHECK(eval_expr("--4") == 4.0);
    CHECK(eval_expr("1-2-3") == -4.0);
    CHECK(eval_expr("sqrt(sqrt(16))") == 2.0);
  }

  SECTION("malformed input names the position") {
    CHECK_THROWS_AS(eval_expr(""), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("1+"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("sqrt 2"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("(1+2"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("sqrt(-1)"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("pie"), std::invalid_argument);
    CHECK_THROWS_AS(eval_expr("1 2"), std::invalid_argument);
    CHECK_THROWS_WITH(eval_expr("2*"), Catch::Matchers::ContainsSubstring("position"));
  }
}

TEST_CASE("trajectory CSV") {
  const TriangleParams tri = make_triangle(kAlphaRef);
  const PlanarEmbedding emb = embed(tri);
  const PhaseState start{1, phi_star(kAlphaRef), 0.3};
  const Orbit orbit = iterate(tri, emb, start, 50);
  REQUIRE(orbit.states.size() == 51);
  const std::string csv = trajectory_csv(tri, emb, orbit);

  SECTION("round trip preserves every double bit for bit") {
    const Orbit parsed = parse_trajectory_csv(csv);
    REQUIRE(parsed.states.size() == orbit.states.size());
    REQUIRE(parsed.dirs.size() == orbit.dirs.size());
    CHECK_FALSE(parsed.terminated_singular);
    for (std::size_t t = 0; t < orbit.states.size(); ++t) {
      CHECK(parsed.states[t].side == orbit.states[t].side);
      CHECK(parsed.states[t].phi == orbit.states[t].phi);
      CHECK(parsed.states[t].x == orbit.states[t].x);
    }
    for (std::size_t t = 0; t < orbit.dirs.size(); ++t) CHECK(parsed.dirs[t] == orbit.dirs[t]);
    CHECK(trajectory_csv(tri, emb, parsed) == csv);
  }

  SECTION("replaying from the first row reproduces the file") {
    const Orbit parsed = parse_trajectory_csv(csv);
    const Orbit replay = iterate(tri, emb, parsed.states[0], parsed.states.size() - 1);
    REQUIRE(replay.states.size() == parsed.states.size());
    for (std::size_t t = 0; t < parsed.states.size(); ++t) {
      CHECK(replay.states[t].side == parsed.states[t].side);
      CHECK(std::abs(replay.states[t].phi - parsed.states[t].phi) <= 1e-12);
      CHECK(std::abs(replay.states[t].x - parsed.states[t].x) <= 1e-12);
    }
    CHECK(trajectory_csv(tri, emb, replay) == csv);
  }

  SECTION("a singular ending is flagged on the last row only") {
    const Orbit sing = iterate(tri, emb, {1, pi / 2.0, 0.5}, 10);
    REQUIRE(sing.terminated_singular);
    const std::string text = trajectory_csv(tri, emb, sing);
    const Orbit parsed = parse_trajectory_csv(text);
    CHECK(parsed.terminated_singular);
    CHECK(count_occurrences(text, ",1\n") == 1);
  }

  SECTION("malformed input is rejected") {
    CHECK_THROWS_AS(parse_trajectory_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv("side,phi\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv(std::string(trajectory_csv_header) + "\n"),
                    std::invalid_argument);
    const std::string header(trajectory_csv_header);
    CHECK_THROWS_AS(parse_trajectory_csv(header + "\n0,1,nope,0.3,0.3,0,ccw,0\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv(header + "\n0,1,0.7,0.3,0.3,0,0\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv(header + "\n0,1,0.7,0.3,0.3,0,sideways,0\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv(header + "\n0,1,0.7,0.3,0.3,0,ccw,2\n"),
                    std::invalid_argument);
    // Direction set on the last row breaks the row-count invariant.
    CHECK_THROWS_AS(parse_trajectory_csv(header + "\n0,1,0.7,0.3,0.3,0,ccw,0\n"),
                    std::invalid_argument);
  }
}

TEST_CASE("atomic file writes") {
  const fs::path target = temp_file("atomic_roundtrip.txt");
  const std::string payload = "line one\nline two\n";
  write_file_atomic(target, payload);
  CHECK(read_file(target) == payload);
  write_file_atomic(target, "replaced");
  CHECK(read_file(target) == "replaced");
  // No temporary remains next to the target.
  for (const auto& entry : fs::directory_iterator(target.parent_path())) {
    CHECK(entry.path().string().find(".tmp.") == std::string::npos);
  }
  CHECK_THROWS_AS(read_file(target.parent_path() / "does_not_exist"), std::runtime_error);
}

TEST_CASE("SVG rendering") {
  const TriangleParams tri = make_triangle(kAlphaRef);
  const PlanarEmbedding emb = embed(tri);

  SECTION("deterministic output") {
    const Orbit orbit = iterate(tri, emb, {1, phi_star(kAlphaRef), 0.3}, 10);
    const std::string once = render_trajectory_svg(tri, emb, orbit);
    const std::string twice = render_trajectory_svg(tri, emb, orbit);
    CHECK(once == twice);
    CHECK(once.rfind("<svg xmlns", 0) == 0);
    CHECK(count_occurrences(once, "-0.000000") == 0);
    // Three side paths plus the chord polyline.
    CHECK(count_occurrences(once, "<path") == 4);
    CHECK(count_occurrences(once, " L ") == 3 + orbit.bounces());
  }

  SECTION("an empty orbit draws the outline only") {
    Orbit orbit;
    orbit.states.push_back({1, 1.0, 0.5});
    const std::string svg = render_trajectory_svg(tri, emb, orbit);
    CHECK(count_occurrences(svg, "<path") == 3);
  }

  SECTION("unfolding picture carries strips, frames and the diagonal") {
    const Orbit orbit = iterate(tri, emb, {1, phi_star(kAlphaRef), 0.3}, 6);
    const UnfoldedPath path = unfold(tri, emb, orbit);
    UnfoldDecorations deco;
    deco.strip_ten = cylinder_parallelogram(tri, emb, ten_cylinder(kAlphaRef));
    deco.strip_four = cylinder_parallelogram(tri, emb, four_cylinder(kAlphaRef));
    deco.diagonal = unfolded_diagonal(tri, emb);
    const std::string svg = render_unfolding_svg(path, deco);
    CHECK(svg == render_unfolding_svg(path, deco));
    CHECK(count_occurrences(svg, "fill-opacity") == 2);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 1);
    // Seven frames (one per state), three sides each, plus strips, orbit
    // polyline and diagonal.
    CHECK(count_occurrences(svg, "<path") == 7 * 3 + 4);
  }
}

TEST_CASE("JSON reports") {
  SECTION("angle report") {
    const nlohmann::json j = to_json(angle_report(kAlphaRef));
    CHECK(j["schema_version"] == schema_version);
    CHECK(j["alpha"] == kAlphaRef);
    CHECK(j.contains("phi_star"));
    CHECK(j.contains("x_d"));
    CHECK(j.contains("omega"));
    CHECK(j.contains("epsilon"));
    CHECK(j["residuals"].is_object());
    CHECK(j.dump() == to_json(angle_report(kAlphaRef)).dump());
  }

  SECTION("cylinder template") {
    const nlohmann::json j = to_json(ten_cylinder(kAlphaRef));
    CHECK(j["return_length"] == 10);
    CHECK(j["sides"].size() == 11);
    CHECK(j["coords"].size() == 11);
    CHECK(j["coords"][0].contains("a"));
    CHECK(j["delta_range"].size() == 2);
  }

  SECTION("verdict names") {
    CHECK(std::string(to_string(RationalityVerdict::rational)) == "rational");
    CHECK(std::string(to_string(RationalityVerdict::likely_irrational)) == "likely-irrational");
    CHECK(std::string(to_string(RationalityVerdict::inconclusive)) == "inconclusive");
  }
}

TEST_CASE("tolerance overrides") {
  Tolerances tols;
  const double before = tols.vertex;

  SECTION("known names are applied") {
    apply_tolerance_overrides(tols, nlohmann::json{{"return_angle", 1e-8}, {"vertex", 1e-11}});
    CHECK(tols.return_angle == 1e-8);
    CHECK(tols.vertex == 1e-11);
    CHECK(tols.vertex != before);
  }

  SECTION("bad overrides are rejected") {
    CHECK_THROWS_AS(apply_tolerance_overrides(tols, nlohmann::json::array()), std::domain_error);
    CHECK_THROWS_AS(apply_tolerance_overrides(tols, nlohmann::json{{"bogus", 1e-8}}),
                    std::domain_error);
    CHECK_THROWS_AS(apply_tolerance_overrides(tols, nlohmann::json{{"vertex", "tight"}}),
                    std::domain_error);
    CHECK_THROWS_AS(apply_tolerance_overrides(tols, nlohmann::json{{"vertex", -1e-9}}),
                    std::domain_error);
  }

  SECTION("the full map is exposed") {
    const auto m = tols.as_map();
    CHECK(m.size() >= 10);
    CHECK(m.count("step_agreement") == 1);
  }
}

TEST_CASE("command line dispatch") {
  SECTION("angles report to a file") {
    const fs::path out = temp_file("angles.json");
    REQUIRE(run_cli({"angles", "--out", out.string().c_str()}) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["schema_version"] == schema_version);
    CHECK_THAT(j["phi_star"].get<double>(),
               Catch::Matchers::WithinAbs(0.73292522628865511, 1e-12));
  }

  SECTION("angles with bounds at an explicit angle") {
    const fs::path out = temp_file("angles_bounds.json");
    REQUIRE(run_cli({"angles", "--alpha", "0.9", "--bounds", "--out", out.string().c_str()}) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["bounds"]["all_hold"] == true);
    CHECK(j["bounds"]["bounds"].size() == 5);
  }

  SECTION("out-of-range angle is a usage error") {
    CHECK(run_cli({"angles", "--alpha", "0.2"}) == 2);
    CHECK(run_cli({"angles", "--alpha", "3*pi/10"}) == 2);
  }

  SECTION("malformed expression is a usage error") {
    CHECK(run_cli({"angles", "--alpha", "pi*("}) == 2);
  }

  SECTION("unknown subcommand and missing subcommand") {
    CHECK(run_cli({"bogus"}) == 2);
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"angles", "--no-such-flag"}) == 2);
  }

  SECTION("simulate writes CSV and SVG") {
    const fs::path csv = temp_file("sim.csv");
    const fs::path svg = temp_file("sim.svg");
    REQUIRE(run_cli({"simulate", "--steps", "40", "--csv", csv.string().c_str(), "--svg",
                     svg.string().c_str()}) == 0);
    const Orbit parsed = parse_trajectory_csv(read_file(csv));
    CHECK(parsed.states.size() == 41);
    CHECK(read_file(svg).rfind("<svg xmlns", 0) == 0);
  }

  SECTION("induced report") {
    const fs::path out = temp_file("induced.json");
    REQUIRE(run_cli({"induced", "--returns", "50", "--samples", "7", "--out",
                     out.string().c_str()}) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["iet"]["return_times"][0] == 10);
    CHECK(j["rotation_estimate"]["n"] == 50);
    CHECK(j["rotation_estimate"]["error_bound"].get<double>() <= 1e-9);
    CHECK(j["rationality"]["verdict"].is_string());
    CHECK(j["return_map"].size() >= 6);
    CHECK(j["coverage"]["histogram"].size() == 20);
    CHECK(j["coverage"]["min_margin_side2"].get<double>() > 0.0);
  }

  SECTION("verify exits zero on a passing grid") {
    const fs::path out = temp_file("verify.json");
    REQUIRE(run_cli({"verify", "--alpha-grid", "0.88,0.93", "--samples", "10", "--jobs", "2",
                     "--out", out.string().c_str()}) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["all_pass"] == true);
    CHECK(j["checks"].size() >= 15);
  }

  SECTION("unfold writes the picture and the summary") {
    const fs::path svg = temp_file("unfold.svg");
    const fs::path out = temp_file("unfold.json");
    REQUIRE(run_cli({"unfold", "--steps", "8", "--svg", svg.string().c_str(), "--out",
                     out.string().c_str()}) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_file(out));
    CHECK(j["collinearity_residual"].get<double>() <= 1e-9);
    CHECK(j["points"].size() == 9);
    CHECK(j.contains("diagonal"));
    const std::string picture = read_file(svg);
    CHECK(count_occurrences(picture, "fill-opacity") == 2);
  }

  SECTION("tolerance override environment variable") {
    ::setenv("TRIBILLIARD_TOL_OVERRIDE", "{\"return_angle\": 1e-8}", 1);
    CHECK(run_cli({"induced", "--returns", "5", "--samples", "3", "--out",
                   temp_file("induced_tol.json").string().c_str()}) == 0);
    ::setenv("TRIBILLIARD_TOL_OVERRIDE", "not json", 1);
    CHECK(run_cli({"angles"}) == 2);
    ::setenv("TRIBILLIARD_TOL_OVERRIDE", "{\"bogus\": 1e-8}", 1);
    CHECK(run_cli({"angles"}) == 2);
    ::unsetenv("TRIBILLIARD_TOL_OVERRIDE");
  }
}
