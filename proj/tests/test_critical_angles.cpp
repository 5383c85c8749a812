#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tribilliard/critical_angles.hpp"

using namespace tribilliard;

namespace {
const double kAlphaRef = pi * std::sqrt(3.0) / 6.0;
}

TEST_CASE("critical base angle") {
  SECTION("bracket signs") {
    CHECK(alpha_star_equation(pi / 4.0) < 0.0);
    CHECK(alpha_star_equation(3.0 * pi / 10.0) > 0.0);
    CHECK(alpha_star_equation(2.0 * pi / 7.0) > 0.0);
  }

  SECTION("root value and residual") {
    const double a = alpha_star();
    CHECK(a > pi / 4.0);
    CHECK(a < 2.0 * pi / 7.0);
    CHECK(std::abs(alpha_star_equation(a)) <= 1e-13);
    // Regression anchor, solved independently to 20 digits.
    CHECK_THAT(a, Catch::Matchers::WithinAbs(0.86349224486971840, 5e-15));
  }
}

TEST_CASE("diagonal launch angle") {
  SECTION("reference value") {
    const double ph = phi_star(kAlphaRef);
    CHECK_THAT(ph, Catch::Matchers::WithinAbs(0.73292522628865511, 1e-13));
    CHECK(std::abs(phi_star_equation(kAlphaRef, ph)) <= 1e-14);
  }

  SECTION("root residual across the closed domain") {
    for (int i = 0; i <= 200; ++i) {
      const double a = pi / 4.0 + (3.0 * pi / 10.0 - pi / 4.0) * i / 200.0;
      const double ph = phi_star(a);
      CHECK(ph > 0.0);
      CHECK(ph < pi);
      CHECK(std::abs(phi_star_equation(a, ph)) <= 1e-14);
    }
  }

  SECTION("at the critical angle the diagonal launches along the leg") {
    CHECK_THAT(phi_star(alpha_star()), Catch::Matchers::WithinAbs(alpha_star(), 1e-10));
  }

  SECTION("the cosine coefficient keeps one sign, so the root is unique") {
    for (int i = 0; i <= 100; ++i) {
      const double a = pi / 4.0 + (3.0 * pi / 10.0 - pi / 4.0) * i / 100.0;
      const double b = std::sin(6.0 * a) - std::sin(2.0 * a);
      CHECK(b < 0.0);
      CHECK(std::abs(b - 2.0 * std::sin(2.0 * a) * std::cos(4.0 * a)) <= 1e-15);
    }
  }

  SECTION("strictly decreasing in alpha") {
    double prev = phi_star(alpha_star() + 1e-3);
    for (int i = 1; i < 100; ++i) {
      const double a = alpha_star() + 1e-3 +
                       (3.0 * pi / 10.0 - alpha_star() - 2e-3) * i / 99.0;
      const double ph = phi_star(a);
      CHECK(ph < prev);
      prev = ph;
    }
  }

  SECTION("domain ends are enforced") {
    CHECK_THROWS_AS(phi_star(pi / 4.0 - 1e-6), std::domain_error);
    CHECK_THROWS_AS(phi_star(3.0 * pi / 10.0 + 1e-6), std::domain_error);
    CHECK_NOTHROW(phi_star(pi / 4.0));
    CHECK_NOTHROW(phi_star(3.0 * pi / 10.0));
  }
}

TEST_CASE("angle bounds report") {
  SECTION("all bounds hold at the reference angle with known margins") {
    const AngleBoundsReport rep = phi_star_bounds(kAlphaRef, phi_star(kAlphaRef));
    CHECK(rep.all_hold);
    CHECK_THAT(rep.margins[0], Catch::Matchers::WithinAbs(0.17397446, 1e-7));
    CHECK_THAT(rep.margins[1], Catch::Matchers::WithinAbs(0.069028582, 1e-8));
    CHECK_THAT(rep.margins[2], Catch::Matchers::WithinAbs(0.31203162, 1e-7));
    CHECK_THAT(rep.margins[3], Catch::Matchers::WithinAbs(0.10886199, 1e-7));
    CHECK_THAT(rep.margins[4], Catch::Matchers::WithinAbs(0.79803769, 1e-7));
  }

  SECTION("hold across the open range") {
    for (int i = 0; i < 50; ++i) {
      const double a = alpha_star() + 1e-3 +
                       (3.0 * pi / 10.0 - alpha_star() - 2e-3) * i / 49.0;
      CHECK(phi_star_bounds(a, phi_star(a)).all_hold);
    }
  }

  SECTION("the leg-launch margin collapses towards the critical angle") {
    const double m6 = phi_star_bounds(alpha_star() + 1e-6, phi_star(alpha_star() + 1e-6)).margins[0];
    const double m4 = phi_star_bounds(alpha_star() + 1e-4, phi_star(alpha_star() + 1e-4)).margins[0];
    const double m2 = phi_star_bounds(alpha_star() + 1e-2, phi_star(alpha_star() + 1e-2)).margins[0];
    CHECK(m6 < 1e-4);
    CHECK(m6 < m4);
    CHECK(m4 < m2);
  }

  SECTION("out-of-range angles are rejected") {
    CHECK_THROWS_AS(phi_star_bounds(alpha_star() - 1e-3, 0.8), std::domain_error);
    CHECK_THROWS_AS(phi_star_bounds(3.0 * pi / 10.0, 0.6), std::domain_error);
  }
}

TEST_CASE("derived-quantity report") {
  SECTION("frozen reference values") {
    const AngleReport rep = angle_report(kAlphaRef);
    CHECK_THAT(rep.phi_star, Catch::Matchers::WithinAbs(0.73292522628865511, 1e-13));
    CHECK_THAT(rep.x_d, Catch::Matchers::WithinAbs(0.16239092921766877, 1e-12));
    CHECK_THAT(rep.omega, Catch::Matchers::WithinAbs(0.83760907078233123, 1e-12));
    CHECK_THAT(rep.epsilon, Catch::Matchers::WithinAbs(0.14079362247359216, 1e-12));
  }

  SECTION("identities tie the closed forms together across the range") {
    for (int i = 0; i < 100; ++i) {
      const double a = alpha_star() + 1e-3 +
                       (3.0 * pi / 10.0 - alpha_star() - 2e-3) * i / 99.0;
      const AngleReport rep = angle_report(a);
      CHECK(rep.residuals.at("phi_star_equation") <= 1e-14);
      CHECK(rep.residuals.at("omega_plus_x_d_minus_one") <= 1e-13);
      CHECK(rep.residuals.at("x_d_vs_sine_ratio") <= 1e-12);
      CHECK(rep.residuals.at("endpoint_sine_identity") <= 1e-12);
      CHECK(rep.residuals.at("angle_sum") <= 1e-15);
      CHECK(rep.epsilon > 0.0);
      CHECK(rep.x_d > 0.0);
      CHECK(rep.x_d < 1.0);
    }
  }

  SECTION("rotation number increases strictly with alpha") {
    double prev = angle_report(alpha_star() + 1e-3).omega;
    for (int i = 1; i < 100; ++i) {
      const double a = alpha_star() + 1e-3 +
                       (3.0 * pi / 10.0 - alpha_star() - 2e-3) * i / 99.0;
      const double w = angle_report(a).omega;
      CHECK(w > prev);
      prev = w;
    }
  }

  SECTION("cycle angles stay strictly interior") {
    for (int i = 0; i < 50; ++i) {
      const double a = alpha_star() + 1e-3 +
                       (3.0 * pi / 10.0 - alpha_star() - 2e-3) * i / 49.0;
      const double ph = phi_star(a);
      for (double v : diagonal_angles(a, ph)) {
        CHECK(v > 0.0);
        CHECK(v < pi);
      }
      for (double v : four_cycle_angles(a, ph)) {
        CHECK(v > 0.0);
        CHECK(v < pi);
      }
    }
  }

  SECTION("domain is the open critical interval") {
    CHECK_THROWS_AS(angle_report(alpha_star()), std::domain_error);
    CHECK_THROWS_AS(angle_report(3.0 * pi / 10.0), std::domain_error);
    CHECK_THROWS_AS(angle_report(0.5), std::domain_error);
  }
}
