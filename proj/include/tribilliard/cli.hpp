// Command-line front end. Subcommands:
//   angles    derived-quantity report at a base angle (JSON)
//   diag      generalised diagonal table
//   simulate  orbit iteration with CSV/SVG export
//   induced   first-return map, rotation estimate, rationality probe
//   verify    property suite across a grid of base angles
//   unfold    reflected-copies picture with cylinder strips and diagonal
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage error.
// The environment variable TRIBILLIARD_TOL_OVERRIDE may hold a JSON object
// of tolerance overrides, e.g. {"return_angle": 1e-8}.
#pragma once

#include <cstdlib>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tribilliard/billiard.hpp"
#include "tribilliard/critical_angles.hpp"
#include "tribilliard/cylinders.hpp"
#include "tribilliard/expr.hpp"
#include "tribilliard/induced_map.hpp"
#include "tribilliard/serialize.hpp"
#include "tribilliard/svg.hpp"
#include "tribilliard/tolerances.hpp"
#include "tribilliard/trajectory_io.hpp"
#include "tribilliard/unfolding.hpp"
#include "tribilliard/verification.hpp"

namespace tribilliard {

namespace cli_detail {

inline Tolerances tolerances_from_env() {
  Tolerances tols;
  const char* raw = std::getenv("TRIBILLIARD_TOL_OVERRIDE");
  if (raw == nullptr || raw[0] == '\0') return tols;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::domain_error(std::string("TRIBILLIARD_TOL_OVERRIDE is not valid JSON: ") + e.what());
  }
  apply_tolerance_overrides(tols, j);
  return tols;
}

inline void emit(const nlohmann::json& j, const std::string& out_path, std::ostream& os) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    os << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

inline std::vector<double> parse_alpha_grid(const std::string& spec) {
  if (spec.rfind("auto:", 0) == 0) {
    const int n = std::stoi(spec.substr(5));
    return auto_alpha_grid(n);
  }
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    if (!item.empty()) grid.push_back(eval_expr(item));
    pos = comma + 1;
  }
  if (grid.empty()) throw std::invalid_argument("empty --alpha-grid");
  return grid;
}

struct AlphaOption {
  std::string expr = "pi*sqrt(3)/6";
  double value() const { return eval_expr(expr); }
};

}  // namespace cli_detail

inline int cli_dispatch(int argc, const char* const* argv) {
  using cli_detail::emit;
  CLI::App app{"billiard dynamics in isosceles triangles: generalised diagonal, "
               "recurrent cylinders and the induced base rotation"};
  app.require_subcommand(1);
  std::ostream& out = std::cout;

  Tolerances tols;

  // angles
  auto* cmd_angles = app.add_subcommand("angles", "derived-quantity report at a base angle");
  cli_detail::AlphaOption angles_alpha;
  std::string angles_out;
  bool angles_bounds = false;
  cmd_angles->add_option("--alpha", angles_alpha.expr, "base angle (expression)")
      ->capture_default_str();
  cmd_angles->add_option("--out", angles_out, "write the JSON report to this file");
  cmd_angles->add_flag("--bounds", angles_bounds, "include the angle-bounds report");

  // diag
  auto* cmd_diag = app.add_subcommand("diag", "generalised diagonal table");
  cli_detail::AlphaOption diag_alpha;
  std::string diag_json;
  cmd_diag->add_option("--alpha", diag_alpha.expr, "base angle (expression)")
      ->capture_default_str();
  cmd_diag->add_option("--json", diag_json, "also write the record as JSON to this file");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "iterate an orbit and export CSV/SVG");
  cli_detail::AlphaOption sim_alpha;
  std::string sim_x0 = "1/sqrt(2)";
  std::string sim_phi;  // defaults to phi_star(alpha)
  std::size_t sim_steps = 500;
  std::string sim_stepper = "geometric";
  std::string sim_csv, sim_svg;
  cmd_sim->add_option("--alpha", sim_alpha.expr, "base angle (expression)")->capture_default_str();
  cmd_sim->add_option("--x0", sim_x0, "start coordinate on the start side (expression)")
      ->capture_default_str();
  cmd_sim->add_option("--phi", sim_phi, "launch angle (expression); default phi_star(alpha)");
  cmd_sim->add_option("--steps", sim_steps, "number of bounces")->capture_default_str();
  cmd_sim->add_option("--stepper", sim_stepper, "geometric or algebraic")
      ->check(CLI::IsMember({"geometric", "algebraic"}))
      ->capture_default_str();
  cmd_sim->add_option("--csv", sim_csv, "write the trajectory CSV to this file");
  cmd_sim->add_option("--svg", sim_svg, "write the trajectory SVG to this file");

  // induced
  auto* cmd_ind = app.add_subcommand("induced", "first-return map and rotation estimate");
  cli_detail::AlphaOption ind_alpha;
  std::string ind_x0 = "1/sqrt(2)";
  long long ind_returns = 1000;
  int ind_samples = 33;
  long long ind_qmax = 1000000;
  std::string ind_out;
  cmd_ind->add_option("--alpha", ind_alpha.expr, "base angle (expression)")->capture_default_str();
  cmd_ind->add_option("--x0", ind_x0, "start coordinate on the base (expression)")
      ->capture_default_str();
  cmd_ind->add_option("--returns", ind_returns, "number of first returns to accumulate")
      ->capture_default_str();
  cmd_ind->add_option("--samples", ind_samples, "grid size of the empirical return-map sweep")
      ->capture_default_str();
  cmd_ind->add_option("--qmax", ind_qmax, "denominator bound for the rationality probe")
      ->capture_default_str();
  cmd_ind->add_option("--out", ind_out, "write the JSON report to this file");

  // verify
  auto* cmd_ver = app.add_subcommand("verify", "run the property suite over a base-angle grid");
  std::string ver_grid = "auto:25";
  unsigned ver_jobs = std::max(1u, std::thread::hardware_concurrency());
  int ver_samples = 0;
  std::string ver_out;
  cmd_ver->add_option("--alpha-grid", ver_grid, "'auto:N' or comma-separated angle expressions")
      ->capture_default_str();
  cmd_ver->add_option("--jobs", ver_jobs, "worker threads across grid points")
      ->capture_default_str();
  cmd_ver->add_option("--samples", ver_samples,
                      "override the random-sample count per check (0 = defaults)");
  cmd_ver->add_option("--out", ver_out, "write the JSON summary to this file");

  // unfold
  auto* cmd_unf = app.add_subcommand("unfold", "unfolded orbit with cylinder strips");
  cli_detail::AlphaOption unf_alpha;
  std::string unf_x0 = "1/sqrt(2)";
  std::size_t unf_steps = 14;
  std::string unf_svg, unf_out;
  bool unf_no_cyl = false, unf_no_diag = false;
  cmd_unf->add_option("--alpha", unf_alpha.expr, "base angle (expression)")->capture_default_str();
  cmd_unf->add_option("--x0", unf_x0, "start coordinate on the base (expression)")
      ->capture_default_str();
  cmd_unf->add_option("--steps", unf_steps, "number of bounces to unfold")->capture_default_str();
  cmd_unf->add_option("--svg", unf_svg, "write the SVG to this file");
  cmd_unf->add_option("--out", unf_out, "write the JSON summary to this file");
  cmd_unf->add_flag("--no-cylinders", unf_no_cyl, "omit the cylinder strips");
  cmd_unf->add_flag("--no-diagonal", unf_no_diag, "omit the unfolded diagonal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    tols = cli_detail::tolerances_from_env();

    if (cmd_angles->parsed()) {
      const double alpha = angles_alpha.value();
      const AngleReport rep = angle_report(alpha);
      nlohmann::json j = to_json(rep);
      if (angles_bounds) j["bounds"] = to_json(phi_star_bounds(alpha, rep.phi_star));
      emit(j, angles_out, out);
      return 0;
    }

    if (cmd_diag->parsed()) {
      const double alpha = diag_alpha.value();
      const DiagonalRecord rec = generalized_diagonal(alpha);
      out << "generalised diagonal at alpha = " << format_full(alpha) << "\n";
      out << "  t  side  angle                 coord\n";
      for (std::size_t t = 0; t < 6; ++t) {
        out << "  " << t << "    " << rec.sides[t] << "   " << std::left << std::setw(22)
            << format_full(rec.angles[t]) << std::setw(0) << format_full(rec.coords[t]) << "\n";
      }
      out << "  starts at vertex 1: " << (rec.starts_at_vertex ? "yes" : "no")
          << ", ends at vertex 2: " << (rec.ends_at_vertex ? "yes" : "no") << "\n";
      if (!diag_json.empty()) emit(to_json(rec), diag_json, out);
      return 0;
    }

    if (cmd_sim->parsed()) {
      const double alpha = sim_alpha.value();
      const TriangleParams tri = make_triangle(alpha);
      const PlanarEmbedding emb = embed(tri);
      const double phi = sim_phi.empty() ? phi_star(alpha) : eval_expr(sim_phi);
      const double x0 = eval_expr(sim_x0);
      const StepperKind kind =
          sim_stepper == "algebraic" ? StepperKind::algebraic : StepperKind::geometric;
      const Orbit orbit = iterate(tri, emb, {1, phi, x0}, sim_steps, kind, tols.vertex);
      out << "simulated " << orbit.bounces() << " bounces from [1, " << format_full(phi) << ", "
          << format_full(x0) << "]";
      if (orbit.terminated_singular) {
        out << " (stopped: hit vertex " << orbit.hit->vertex << ")";
      }
      out << "\n";
      if (!sim_csv.empty()) {
        write_file_atomic(sim_csv, trajectory_csv(tri, emb, orbit));
        out << "wrote " << sim_csv << "\n";
      }
      if (!sim_svg.empty()) {
        write_file_atomic(sim_svg, render_trajectory_svg(tri, emb, orbit));
        out << "wrote " << sim_svg << "\n";
      }
      return 0;
    }

    if (cmd_ind->parsed()) {
      const double alpha = ind_alpha.value();
      const TriangleParams tri = make_triangle(alpha);
      const PlanarEmbedding emb = embed(tri);
      const IETSpec iet = analytic_iet(alpha);
      const double x0 = eval_expr(ind_x0);
      const RotationEstimate est =
          rotation_estimate(tri, emb, x0, ind_returns, tols.return_angle);
      nlohmann::json j;
      j["schema_version"] = schema_version;
      j["alpha"] = alpha;
      j["iet"] = to_json(iet);
      j["rotation_estimate"] = to_json(est);
      if (est.n > 0) {
        j["rationality"] = to_json(rationality_probe(est.omega_hat, ind_qmax));
      }
      nlohmann::json sweep = nlohmann::json::array();
      const double ph = phi_star(alpha);
      for (int i = 1; i <= ind_samples; ++i) {
        const double x = static_cast<double>(i) / (static_cast<double>(ind_samples) + 1.0);
        if (std::abs(x - iet.breakpoint) < 1e-9) continue;
        const FirstReturn fr = first_return(tri, emb, ph, x, tols.return_angle);
        nlohmann::json row;
        row["x"] = x;
        if (fr.singular) {
          row["singular"] = true;
        } else {
          row["image"] = fr.x;
          row["steps"] = fr.steps;
        }
        sweep.push_back(row);
      }
      j["return_map"] = sweep;

      // Coverage of the base by one orbit's returns, binned; counts carry no
      // pass/fail meaning, they are reported for inspection.
      const long long budget = std::max<long long>(24, std::min<long long>(ind_returns, 20000) * 6);
      const Orbit orbit = iterate(tri, emb, {1, ph, x0}, static_cast<std::size_t>(budget),
                                  StepperKind::geometric, tols.vertex);
      const GapStats stats = gap_stats(tri, orbit, tols.return_angle);
      nlohmann::json cover;
      cover["returns"] = stats.base_positions.size();
      cover["min_margin_side2"] = stats.min_margin_side2;
      cover["min_margin_side3"] = stats.min_margin_side3;
      cover["epsilon_ref"] = stats.epsilon_ref;
      cover["bins"] = 20;
      cover["histogram"] = coverage_histogram(stats.base_positions, 20);
      j["coverage"] = cover;

      emit(j, ind_out, out);
      return 0;
    }

    if (cmd_ver->parsed()) {
      const std::vector<double> grid = cli_detail::parse_alpha_grid(ver_grid);
      SuiteConfig cfg;
      cfg.tol = tols;
      if (ver_samples > 0) {
        cfg.step_samples = ver_samples;
        cfg.reversibility_samples = ver_samples;
        cfg.template_samples = ver_samples;
        cfg.conjugacy_samples = ver_samples;
      }
      const std::vector<CheckResult> results = grid_suite(grid, cfg, ver_jobs);
      bool all_pass = true;
      std::size_t width = 0;
      for (const CheckResult& c : results) width = std::max(width, c.name.size());
      for (const CheckResult& c : results) {
        all_pass = all_pass && c.pass;
        out << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width + 2))
            << c.name << std::setw(0) << "worst " << std::scientific << std::setprecision(3)
            << c.worst << std::defaultfloat;
        if (!c.pass) out << "  " << c.detail;
        out << "\n";
      }
      out << (all_pass ? "verify: all checks passed" : "verify: FAILURES above") << " ("
          << grid.size() << " base angles)\n";
      if (!ver_out.empty()) {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["alphas"] = grid;
        nlohmann::json checks = nlohmann::json::array();
        for (const CheckResult& c : results) {
          checks.push_back({{"name", c.name}, {"pass", c.pass}, {"worst", c.worst},
                            {"detail", c.detail}});
        }
        j["checks"] = checks;
        j["all_pass"] = all_pass;
        emit(j, ver_out, out);
      }
      return all_pass ? 0 : 1;
    }

    if (cmd_unf->parsed()) {
      const double alpha = unf_alpha.value();
      const TriangleParams tri = make_triangle(alpha);
      const PlanarEmbedding emb = embed(tri);
      const double ph = phi_star(alpha);
      const double x0 = eval_expr(unf_x0);
      const Orbit orbit = iterate(tri, emb, {1, ph, x0}, unf_steps, StepperKind::geometric,
                                  tols.vertex);
      const UnfoldedPath path = unfold(tri, emb, orbit);
      const double residual = collinearity_residual(path);

      UnfoldDecorations deco;
      if (!unf_no_cyl) {
        const CylinderTemplate ten = ten_cylinder(alpha);
        const CylinderTemplate four = four_cylinder(alpha);
        deco.strip_ten = cylinder_parallelogram(tri, emb, ten);
        deco.strip_four = cylinder_parallelogram(tri, emb, four);
        const double mid4 = 0.5 * (four.delta_lo + four.delta_hi);
        const UnfoldedPath path4 = unfold(tri, emb, template_orbit(four, mid4));
        deco.extra_frames = path4.frames;
      }
      if (!unf_no_diag) deco.diagonal = unfolded_diagonal(tri, emb);

      out << "unfolded " << orbit.bounces() << " bounces; collinearity residual "
          << std::scientific << std::setprecision(3) << residual << std::defaultfloat << "\n";
      if (!unf_svg.empty()) {
        write_file_atomic(unf_svg, render_unfolding_svg(path, deco));
        out << "wrote " << unf_svg << "\n";
      }
      if (!unf_out.empty()) {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["alpha"] = alpha;
        j["bounces"] = orbit.bounces();
        j["collinearity_residual"] = residual;
        nlohmann::json pts = nlohmann::json::array();
        for (const Vec2& p : path.points) pts.push_back({p.x, p.y});
        j["points"] = pts;
        if (deco.diagonal) {
          j["diagonal"] = {{(*deco.diagonal)[0].x, (*deco.diagonal)[0].y},
                           {(*deco.diagonal)[1].x, (*deco.diagonal)[1].y}};
        }
        emit(j, unf_out, out);
      }
      return 0;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tribilliard
