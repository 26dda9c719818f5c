#include "doctest.h"

#include <cmath>
#include <random>

#include "core/model.hpp"

using namespace fuelstop;

namespace {
const Model& default_model() {
    static Model m({1.0, 1.0, 0.9});
    return m;
}
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

TEST_CASE("derived constants at the default parameters") {
    const Model& m = default_model();
    const auto& d = m.constants();

    // f0 = (sqrt(19) - 1)/sqrt(2), cross-checked by bisection on the quadratic below.
    CHECK(d.f0 == doctest::Approx((std::sqrt(19.0) - 1.0) / kSqrt2).epsilon(1e-14));
    CHECK(std::abs(m.slope_quadratic(d.f0)) < 1e-12);
    double lo = 0.0, hi = 10.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (m.slope_quadratic(mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(d.f0 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-11));

    // lambda_star from the closed form equals the weight where f0 = 1/(2 delta).
    CHECK(d.lambda_star ==
          doctest::Approx(1.0 / (1.0 + 1.0 / (0.25 + 1.0 / kSqrt2))).epsilon(1e-13));
    const Model at_star({1.0, 1.0, d.lambda_star});
    CHECK(at_star.f0() == doctest::Approx(0.5).epsilon(1e-10));

    // lambda_dagger solves f0(l) = alpha/(2l).
    CHECK(d.lambda_dagger == doctest::Approx(0.6344492934602315).epsilon(1e-9));
    const Model at_dagger({1.0, 1.0, d.lambda_dagger});
    CHECK(std::abs(at_dagger.f0() - 1.0 / (2.0 * d.lambda_dagger)) < 1e-10);

    CHECK(d.b0 == doctest::Approx(-9.659356928337958).epsilon(1e-12));
    CHECK(d.b0 < 0.0);

    // 1/(2 delta) < alpha/(2 lambda) < f0 in the new regime.
    CHECK(m.regime() == Regime::New);
    CHECK(0.5 < 1.0 / 1.8);
    CHECK(1.0 / 1.8 < d.f0);
    CHECK(d.lambda_star < d.lambda_dagger);
    CHECK(d.lambda_dagger < 1.0);
}

TEST_CASE("regime classification and gating") {
    CHECK(Model({1.0, 1.0, 0.3}).regime() == Regime::Prior);
    CHECK(Model({1.0, 1.0, 0.55}).regime() == Regime::Open);
    CHECK(Model({1.0, 1.0, 1.2}).regime() == Regime::Degenerate);
    CHECK(Model({1.0, 1.0, 0.9}).regime() == Regime::New);

    CHECK_THROWS_AS(Model({1.0, 1.0, 0.3}).require_new_regime(), RegimeError);
    CHECK_THROWS_AS(Model({1.0, 1.0, 0.55}).require_new_regime(), RegimeError);
    CHECK_THROWS_AS(Model({1.0, 1.0, 1.2}).require_new_regime(), RegimeError);
    CHECK_NOTHROW(default_model().require_new_regime());

    // Messages name the classified regime.
    try {
        Model({1.0, 1.0, 0.55}).require_new_regime();
        FAIL("expected RegimeError");
    } catch (const RegimeError& e) {
        CHECK(std::string(e.what()).find("open") != std::string::npos);
    }

    const Model deg({1.0, 1.0, 1.2});
    CHECK(std::isnan(deg.f0()));
    CHECK(std::isnan(deg.b0()));
    CHECK(std::isfinite(deg.lambda_star()));
    CHECK_THROWS_AS(deg.slope_quadratic(1.0), DomainError);
    CHECK_THROWS_AS(deg.obstacle(1.0, 0.1), DomainError);

    CHECK_THROWS_AS(Model({0.0, 1.0, 0.9}), ArgumentError);
    CHECK_THROWS_AS(Model({1.0, -1.0, 0.9}), ArgumentError);
    CHECK_THROWS_AS(Model({1.0, 1.0, 0.0}), ArgumentError);
}

TEST_CASE("slope quadratic values") {
    const Model& m = default_model();
    CHECK(m.slope_quadratic(0.0) == doctest::Approx(-9.0).epsilon(1e-14));
    CHECK(m.slope_quadratic(3.0) == doctest::Approx(3.0 * kSqrt2).epsilon(1e-14));
}

TEST_CASE("scale transform and its inverse") {
    const Model& m = default_model();
    CHECK(m.scale(0.0) == 1.0);
    CHECK(m.scale(0.5) == doctest::Approx(std::exp(kSqrt2)).epsilon(1e-15));
    CHECK_THROWS_AS(m.scale_inv(0.0), DomainError);
    CHECK_THROWS_AS(m.scale_inv(-1.0), DomainError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double x = xs(rng);
        CHECK(m.scale_inv(m.scale(x)) == doctest::Approx(x).epsilon(1e-13));
    }
    CHECK(m.scale_inv(m.scale(2.374872)) == doctest::Approx(2.374872).epsilon(1e-13));
}

TEST_CASE("obstacle branches, breakpoints and continuity") {
    const Model& m = default_model();
    CHECK(m.obstacle(0.0, 0.0) == doctest::Approx(-0.9).epsilon(1e-15));

    // The branch switch sits where the right-left difference c(1+delta(c-2x)) vanishes.
    const double c = 0.1;
    const double xc = m.x_break(c);
    CHECK(xc == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(c * (1.0 + 1.0 * (c - 2.0 * xc)) == doctest::Approx(0.0));
    CHECK(m.obstacle_right_near(xc, c) - m.obstacle_left(xc) == doctest::Approx(0.0));

    for (double cc : {0.02, 0.1, 0.5}) {
        const double xb = m.x_break(cc);
        const double fb = m.f0() + cc;
        CHECK(std::abs(m.obstacle_left(xb) - m.obstacle_right_near(xb, cc)) < 1e-12);
        CHECK(std::abs(m.obstacle_right_near(fb, cc) - m.obstacle_right_far(fb, cc)) < 1e-12);
        // One-sided difference quotients agree across f0 + c.
        const double s = 1e-7;
        const double dl = (m.obstacle_right_near(fb, cc) - m.obstacle_right_near(fb - s, cc)) / s;
        const double dr = (m.obstacle_right_far(fb + s, cc) - m.obstacle_right_far(fb, cc)) / s;
        CHECK(std::abs(dl - dr) < 1e-5);
    }

    CHECK_THROWS_AS(m.obstacle(1.0, -0.1), DomainError);

    // Even symmetry of the left branch.
    for (double x : {0.3, 1.7, 5.0})
        CHECK(m.obstacle_left(-x) == m.obstacle_left(x));
}

TEST_CASE("transformed obstacle") {
    const Model& m = default_model();
    CHECK(m.transformed_left(1.0) == doctest::Approx(-0.9).epsilon(1e-15));
    CHECK(m.left_tangent_slope(0.0) == doctest::Approx(-0.45).epsilon(1e-14));
    CHECK(m.transformed_obstacle(0.0, 0.1) == 0.0);

    // Minimum commutes with the positive scaling.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> us(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double c = 0.5 * us(rng);
        const double y = std::exp(6.0 * us(rng));
        const double h = std::min(m.transformed_left(y), m.transformed_right(y, c));
        CHECK(m.transformed_obstacle(y, c) == doctest::Approx(h).epsilon(1e-13));
    }

    // Slope sign flips exactly at f0; strict convexity of the left piece up to scale(f0).
    for (double x : {0.0, 0.5, 2.0})
        CHECK(m.left_tangent_slope(x) < 0.0);
    for (double x : {2.4, 3.0, 5.0})
        CHECK(m.left_tangent_slope(x) > 0.0);
    const int n = 400;
    for (int i = 1; i + 1 < n; ++i) {
        const double y0 = 1.0 + (m.scale(m.f0()) - 1.0) * (i - 1) / (n - 1);
        const double y1 = 1.0 + (m.scale(m.f0()) - 1.0) * i / (n - 1);
        const double y2 = 1.0 + (m.scale(m.f0()) - 1.0) * (i + 1) / (n - 1);
        const double chord = (m.transformed_left(y0) * (y2 - y1) +
                              m.transformed_left(y2) * (y1 - y0)) /
                             (y2 - y0);
        CHECK(m.transformed_left(y1) < chord);
    }
}

TEST_CASE("transformed right obstacle convexity switches once, at the inflection") {
    const Model& m = default_model();
    for (double c : {0.02, 0.1}) {
        const double yv = m.convexity_onset_y(c);
        const double y_lo = m.scale(m.x_break(c)) * 1.0000001;
        const double y_hi = m.scale(m.f0() + c + 1.0);
        int flips = 0;
        double flip_y = 0.0;
        const int n = 4000;
        double prev_sign = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double y0 = y_lo * std::pow(y_hi / y_lo, double(i - 1) / (n - 1));
            const double y1 = y_lo * std::pow(y_hi / y_lo, double(i) / (n - 1));
            const double y2 = y_lo * std::pow(y_hi / y_lo, double(i + 1) / (n - 1));
            const double second = (m.transformed_right(y0, c) * (y2 - y1) +
                                   m.transformed_right(y2, c) * (y1 - y0)) /
                                      (y2 - y0) -
                                  m.transformed_right(y1, c);
            const double sign = second > 0.0 ? 1.0 : -1.0;
            if (prev_sign != 0.0 && sign != prev_sign) {
                ++flips;
                flip_y = y1;
            }
            prev_sign = sign;
        }
        if (yv > y_lo) {
            CHECK(flips == 1);
            CHECK(std::abs(std::log(flip_y / yv)) < 0.02);
        } else {
            CHECK(flips == 0);
        }
    }
}

TEST_CASE("inflection point of the near right branch") {
    const Model& m = default_model();
    // Vanishing fuel: the smaller root of delta - (alpha delta - lambda) x^2.
    CHECK(m.inflection_x(1e-9) == doctest::Approx(-std::sqrt(1.0 / 0.1)).epsilon(1e-6));
    for (double c : {0.01, 0.1, 0.3}) {
        const double xv = m.inflection_x(c);
        CHECK(xv < m.f0() + c);
        // The quadratic is strictly positive at f0 + c.
        const double fb = m.f0() + c;
        const double gen = 1.0 - 0.1 * fb * fb + c * (1.0 * (2.0 * fb - c) - 1.0);
        CHECK(gen > 0.0);
        CHECK(m.right_tangent_slope_dx(fb, c) > 0.0);
    }
    CHECK_THROWS_AS(m.inflection_x(0.0), DomainError);
}

TEST_CASE("tangent lines and the excess over the left obstacle") {
    const Model& m = default_model();
    const double c = 0.02;

    // The line touches the obstacle at its base point.
    for (double x : {0.2, 0.7, 1.5, 3.0}) {
        const double y = m.scale(x);
        const TangentLine t = m.tangent_at(y, c);
        CHECK(t.at(y) == doctest::Approx(m.transformed_obstacle(y, c)).epsilon(1e-12));
    }

    // Positive excess at the branch switch point for small fuel.
    CHECK(m.tangent_excess(m.scale(m.x_break(c)), c) > 0.0);

    // Exact large-y expansion of the intercept of the far-branch tangent:
    // I(y) = -(K2/2) sqrt(y) ln y + (K1/2 + K2) sqrt(y) + K3.
    const double k1 = 0.9 * c * c + c;
    const double k2 = 0.9 * c / kSqrt2;
    const double k3 = m.b0() * std::exp(c * kSqrt2);
    for (double y : {1e6, 1e8, 1e10}) {
        const TangentLine t = m.tangent_at(y, c);
        const double expect =
            -(0.5 * k2) * std::sqrt(y) * std::log(y) + (0.5 * k1 + k2) * std::sqrt(y) + k3;
        CHECK(t.intercept == doctest::Approx(expect).epsilon(1e-9));
    }
    // The leading term -lambda c/(2 alpha)^{3/2} sqrt(y) ln y dominates only
    // once ln y outgrows the subleading sqrt(y) coefficient; 5% needs y ~ e^75.
    const double y_far = std::exp(75.0);
    const TangentLine t = m.tangent_at(y_far, c);
    const double ratio = t.intercept / (std::sqrt(y_far) * std::log(y_far));
    CHECK(ratio == doctest::Approx(-0.9 * c / std::pow(2.0, 1.5)).epsilon(0.05));
}

TEST_CASE("slope quadratic vanishes at f0 across a parameter sweep") {
    for (double alpha : {0.5, 1.0, 2.0})
        for (double delta : {0.5, 1.0, 3.0})
            for (double frac : {0.9, 0.97, 0.999}) {
                const Model m({alpha, delta, frac * alpha * delta});
                CHECK(std::abs(m.slope_quadratic(m.f0())) < 1e-10);
            }
}
