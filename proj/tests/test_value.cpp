#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "core/boundary.hpp"
#include "core/model.hpp"
#include "core/value.hpp"

#include "json.hpp"

using namespace fuelstop;

namespace {
const Model& default_model() {
    static Model m({1.0, 1.0, 0.9});
    return m;
}
const BoundaryPoint& bp02() {
    static BoundaryPoint bp = solve_boundary(default_model(), 0.02);
    return bp;
}
}  // namespace

TEST_CASE("no-fuel value") {
    const Model& m = default_model();
    CHECK(value0(m, 0.0) == 0.0);
    CHECK(value0(m, -1.3) == value0(m, 1.3));

    // C1 junction at f0.
    const double f0 = m.f0();
    const double inner = 1.0 * f0 * f0;
    const double outer = 0.9 + 0.9 * f0 * f0 + m.b0() * std::exp(-f0 * m.sqrt2a());
    CHECK(std::abs(inner - outer) < 1e-10);
    CHECK(std::abs(2.0 * f0 - (1.8 * f0 - m.sqrt2a() * m.b0() * std::exp(-f0 * m.sqrt2a()))) <
          1e-10);
    CHECK(value0_deriv(m, f0 - 1e-12) ==
          doctest::Approx(value0_deriv(m, f0 + 1e-12)).epsilon(1e-9));

    CHECK(value0(m, 3.0) == doctest::Approx(8.86120).epsilon(2e-4));
}

TEST_CASE("no-fuel minorant") {
    const Model& m = default_model();
    CHECK_THROWS_AS(minorant0(m, 0.5), DomainError);
    const double yf = m.scale(m.f0());
    for (double y : {1.0, 2.0, 0.5 * (1.0 + yf)})
        CHECK(minorant0(m, y) == m.transformed_left(y));
    for (double y : {yf * 1.5, yf * 10.0})
        CHECK(minorant0(m, y) == m.b0());
    // Reduced no-fuel value equals the scaled minorant.
    for (double x : {0.3, 1.0, 2.0, 3.0, 4.0}) {
        const double v = value0(m, x) - 0.9 - 0.9 * x * x;
        CHECK(v == doctest::Approx(std::exp(-x * m.sqrt2a()) * minorant0(m, m.scale(x)))
                       .epsilon(1e-11));
    }
}

TEST_CASE("smooth fit at both boundaries") {
    const Model& m = default_model();
    for (double c : {0.005, 0.02, 0.1}) {
        const BoundaryPoint bp = solve_boundary(m, c);
        auto mid = [&](double x) {
            return 0.9 * x * x + 0.9 + bp.A * std::exp(x * m.sqrt2a()) +
                   bp.B * std::exp(-x * m.sqrt2a());
        };
        auto mid_d = [&](double x) {
            return 1.8 * x + m.sqrt2a() * (bp.A * std::exp(x * m.sqrt2a()) -
                                           bp.B * std::exp(-x * m.sqrt2a()));
        };
        CHECK(std::abs(mid(bp.F) - bp.F * bp.F) < 1e-9);
        CHECK(std::abs(mid_d(bp.F) - 2.0 * bp.F) < 1e-9);
        CHECK(std::abs(mid(bp.G) - (value0(m, bp.G - c) + c)) < 1e-9);
        CHECK(std::abs(mid_d(bp.G) - value0_deriv(m, bp.G - c)) < 1e-9);
    }
}

TEST_CASE("value, reduced value and minorant are one construction") {
    const Model& m = default_model();
    const BoundaryPoint& bp = bp02();
    const int n = 2000;
    const double x_hi = m.f0() + bp.c + 1.0;
    for (int i = 0; i <= n; ++i) {
        const double x = x_hi * i / n;
        const double v = reduced_value(m, bp, x);
        const double w = minorant(m, bp, m.scale(x));
        CHECK(std::abs(v - std::exp(-x * m.sqrt2a()) * w) < 1e-9);
        CHECK(v <= m.obstacle(x, bp.c) + 1e-9);
        CHECK(value(m, bp, x) <= x * x + 1e-9);
        CHECK(w <= 1e-12);
    }
    // Even extension.
    CHECK(value(m, bp, -0.7) == value(m, bp, 0.7));
    CHECK(value_deriv(m, bp, -0.7) == -value_deriv(m, bp, 0.7));
}

TEST_CASE("control gradient") {
    const Model& m = default_model();
    for (double c : {0.02, 0.1, 0.18}) {
        const BoundaryPoint bp = solve_boundary(m, c);
        const ControlGradient u(m, bp);
        CHECK(u(bp.G) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u(bp.F) == doctest::Approx(2.0 * bp.F).epsilon(1e-12));
        CHECK(2.0 * bp.F > 0.0);
        CHECK(2.0 * bp.F < 1.0);

        int turns = 0;
        double prev = 0.0;
        const int n = 4096;
        for (int i = 1; i < n; ++i) {
            const double x = bp.F + (bp.G - bp.F) * i / n;
            CHECK(u(x) <= 1.0 + 1e-9);
            const double d = u.deriv(x);
            if (i > 1 && (d > 0.0) != (prev > 0.0)) ++turns;
            prev = d;
        }
        CHECK(turns <= 1);
    }
    BoundaryPoint bad = bp02();
    bad.G = bad.F;
    CHECK_THROWS_AS(ControlGradient(default_model(), bad), ArgumentError);
}

TEST_CASE("generator residual") {
    const Model& m = default_model();
    const BoundaryPoint& bp = bp02();
    const double fb = m.f0() + bp.c;

    for (double x : {0.5 * (bp.F + bp.G), bp.F + 1e-6, bp.G - 1e-6})
        CHECK(generator_residual(m, bp, x) == 0.0);
    CHECK(generator_residual(m, bp, 0.2) == doctest::Approx(1.0 - 0.1 * 0.04).epsilon(1e-13));
    // Slightly past f0 + c the residual is linear in x with positive slope.
    const double x1 = fb + 0.01;
    CHECK(generator_residual(m, bp, x1) ==
          doctest::Approx(2.0 * 0.9 * bp.c * (x1 - (0.5 * bp.c + 1.0 / 1.8))).epsilon(1e-12));
    CHECK(generator_residual(m, bp, x1) >= 0.0);

    CHECK_THROWS_AS(generator_residual(m, bp, bp.F), DomainError);
    CHECK_THROWS_AS(generator_residual(m, bp, bp.G), DomainError);
    CHECK_THROWS_AS(generator_residual(m, bp, fb), DomainError);

    const int n = 4096;
    const double x_hi = m.f0() + bp.c + 1.0;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * x_hi / n;
        CHECK(generator_residual(m, bp, x) >= -1e-8);
    }
}

TEST_CASE("complementarity holds off the breakpoints") {
    const Model& m = default_model();
    for (double c : {0.02, 0.1}) {
        const BoundaryPoint bp = solve_boundary(m, c);
        const ControlGradient u(m, bp);
        const int n = 4096;
        const double x_hi = m.f0() + c + 1.0;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) * x_hi / n;
            const double g1 = x * x - value(m, bp, x);
            const double g2 = 1.0 - u(x);
            const double g3 = generator_residual(m, bp, x);
            CHECK(std::abs(g1 * g2 * g3) < 1e-8);
            CHECK(std::min({std::abs(g1), std::abs(g2), std::abs(g3)}) < 1e-10);
        }
    }
}

TEST_CASE("value converges to the limiting profile as fuel vanishes") {
    const Model& m = default_model();
    // Limit profile assembled around the limiting tangency at 1/(2 delta):
    // the stop branch below it, the post-jump branch above. Out to f0 both
    // branches are the same quadratic, so this coincides with the no-fuel
    // value even though the stopping region jumps at c = 0.
    auto limit = [&](double x) { return x <= 0.5 ? x * x : value0(m, x); };
    double first = 0.0, prev = 1e9;
    for (double c : {0.1, 0.05, 0.025}) {
        const BoundaryPoint bp = solve_boundary(m, c);
        double worst = 0.0;
        for (int i = 0; i <= 1600; ++i) {
            const double x = 4.0 * i / 1600;
            worst = std::max(worst, std::abs(value(m, bp, x) - limit(x)));
        }
        CHECK(worst < prev);
        if (first == 0.0) first = worst;
        prev = worst;
    }
    // The gap shrinks linearly in c (driven by the shifted post-jump branch).
    CHECK(prev < 0.3 * first);
}

TEST_CASE("derivative growth is linearly bounded") {
    const Model& m = default_model();
    const BoundaryPoint& bp = bp02();
    const double sq = m.sqrt2a();
    const double k = 2.0 + 2.0 * m.f0() + 2.0 * 0.9 +
                     sq * (std::abs(bp.A) * std::exp(bp.G * sq) + std::abs(bp.B) +
                           std::abs(m.b0()));
    for (int i = 0; i <= 4000; ++i) {
        const double x = 8.0 * i / 4000;
        CHECK(std::abs(value_deriv(m, bp, x)) <= k * (1.0 + x));
    }
}

TEST_CASE("value profile sampling and serialization") {
    const Model& m = default_model();
    const BoundaryPoint& bp = bp02();
    const ValueProfile p = sample_profile(m, bp, 0.0, 2.0, 101);
    REQUIRE(p.x.size() == 101);
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        CHECK(p.v[i] <= p.obstacle[i] + 1e-9);
        const Region want = p.x[i] <= bp.F ? Region::Stop
                                           : (p.x[i] >= bp.G ? Region::Act : Region::Continue);
        CHECK(p.region[i] == want);
        CHECK(p.v[i] ==
              doctest::Approx(p.v_tilde[i] - 0.9 - 0.9 * p.x[i] * p.x[i]).epsilon(1e-12));
    }

    const std::string csv = to_csv(p);
    CHECK(csv.rfind("x,v_tilde,v,obstacle,region\n", 0) == 0);
    CHECK(csv.find(",stop\n") != std::string::npos);
    CHECK(csv.find(",continue\n") != std::string::npos);
    CHECK(csv.find(",act\n") != std::string::npos);

    const auto j = nlohmann::json::parse(to_json(p));
    CHECK(j["x"].size() == 101);
    CHECK(j["region"][0] == "stop");

    CHECK_THROWS_AS(sample_profile(m, bp, 1.0, 0.0, 10), ArgumentError);
    CHECK_THROWS_AS(sample_profile(m, bp, 0.0, 1.0, 1), ArgumentError);
}
