#include "core/boundary.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "core/io.hpp"
#include "core/rootfind.hpp"

#include "json.hpp"

namespace fuelstop {

namespace {

struct SlopeWindow {
    double lo, hi;
};

SlopeWindow slope_window(const Model& m) {
    return {-m.lambda() / (2.0 * m.alpha() * m.alpha()), 0.0};
}

bool in_slope_window(const Model& m, double g) {
    const auto w = slope_window(m);
    return g >= w.lo && g <= w.hi;
}

// Raw solve without the validity audit; shared by solve_boundary and the
// threshold scans.
BoundaryPoint solve_core(const Model& m, double c) {
    m.require_new_regime();
    if (!(c > 0.0)) throw DomainError("solve_boundary requires c > 0");

    const double hi_end = m.f0() + c;
    const double lo_end = std::max(m.x_break(c), m.inflection_x(c));
    const double eps = 1e-9 * hi_end;
    const double lo = lo_end + eps;
    const double hi = hi_end - eps;
    if (!(lo < hi)) throw RegimeError("empty tangency bracket");

    // Scan for the single sign change of the gap, skipping points whose
    // slope falls outside the invertibility window.
    constexpr int kScan = 512;
    double prev_x = 0.0, prev_gap = 0.0;
    bool have_prev = false;
    std::optional<std::pair<double, double>> bracket;
    int sign_changes = 0;
    for (int i = 0; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * i / kScan;
        if (!in_slope_window(m, m.right_tangent_slope(x, c))) continue;
        const double g = tangent_gap(m, x, c);
        if (have_prev && (g < 0.0) != (prev_gap < 0.0)) {
            ++sign_changes;
            if (!bracket) bracket = {prev_x, x};
        }
        prev_x = x;
        prev_gap = g;
        have_prev = true;
    }
    if (!bracket)
        throw RegimeError(
            "no tangency with the near right obstacle branch: fuel level past c2 "
            "or parameters outside the solvable regime");
    if (sign_changes != 1) {
        std::ostringstream msg;
        msg << "tangent gap changed sign " << sign_changes << " times on the bracket";
        throw RegimeError(msg.str());
    }

    auto gap_at = [&](double x) { return tangent_gap(m, x, c); };
    double a = bracket->first, b = bracket->second;
    double fa = gap_at(a);
    while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = gap_at(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    BoundaryPoint bp;
    bp.c = c;
    bp.G = 0.5 * (a + b);
    if (!(std::abs(gap_at(bp.G)) < 1e-12 * std::max(1.0, std::abs(tangent_gap_dx(m, bp.G, c)))))
        throw ConvergenceError("tangent gap not closed at the solved boundary",
                               gap_at(bp.G));
    bp.F = left_slope_inverse(m, m.right_tangent_slope(bp.G, c));
    bp.A = m.left_tangent_slope(bp.F);
    bp.B = m.left_tangent_intercept(bp.F);
    bp.G_prime = 1.0 - boundary_flux(m, bp.G, bp.F) / tangent_gap_dx(m, bp.G, c);
    return bp;
}

// The common tangent must stay below the transformed obstacle everywhere.
void audit_tangent(const Model& m, const BoundaryPoint& bp) {
    constexpr int kAudit = 4096;
    const double x_hi = m.f0() + bp.c + 1.0;
    double worst = 0.0, worst_y = 0.0;
    for (int i = 0; i <= kAudit; ++i) {
        const double x = x_hi * i / kAudit;  // geometric in y
        const double y = m.scale(x);
        if (y < 1.0) continue;
        const double slack = m.transformed_obstacle(y, bp.c) - (bp.A * y + bp.B);
        if (slack < worst) {
            worst = slack;
            worst_y = y;
        }
    }
    if (worst < -1e-9) {
        std::ostringstream msg;
        msg << "common tangent exceeds the obstacle by " << -worst << " at y = " << worst_y;
        throw ValidationError(msg.str(), worst_y);
    }
}

bool tangency_stays_near(const Model& m, double c) {
    try {
        solve_core(m, c);
        return tangent_gap(m, m.f0() + c, c) < 0.0;
    } catch (const DomainError&) {
        return false;
    } catch (const RegimeError&) {
        return false;
    }
}

bool boundary_expands(const Model& m, double c) {
    try {
        return tangency_stays_near(m, c) && solve_core(m, c).G_prime > 1.0;
    } catch (const ConvergenceError&) {
        return false;
    }
}

// Geometric scan from 1e-6 doubling until the predicate fails, then
// bisection of the failure threshold.
template <class Pred>
CThreshold scan_threshold(const Model& m, double c_max, Pred&& good) {
    double c = 1e-6;
    double last_good = 0.0;
    while (c <= c_max) {
        if (!good(c)) break;
        last_good = c;
        c *= 2.0;
    }
    if (c > c_max) return {c_max, true};
    if (last_good == 0.0)
        throw RegimeError("threshold scan failed at its smallest fuel level");
    double lo = last_good, hi = c;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (good(mid) ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

}  // namespace

double left_slope_inverse(const Model& m, double g) {
    const auto w = slope_window(m);
    if (!(g >= w.lo && g <= w.hi)) {
        std::ostringstream msg;
        msg << "tangent slope " << g << " outside the invertibility window [" << w.lo << ", 0]";
        throw DomainError(msg.str());
    }
    if (g == w.hi) return m.f0();
    if (g == w.lo) return 0.0;
    auto f = [&](double x) { return m.left_tangent_slope(x) - g; };
    auto df = [&](double x) { return m.left_tangent_slope_dx(x); };
    return rootfind::newton_bisect(f, df, 0.0, m.f0(), 1e-14);
}

double slope_shift_rhs(const Model& m, double x) {
    const double l = m.lambda(), a = m.alpha();
    return (l / a) * (a / (2.0 * l) - (x + 1.0 / m.sqrt2a())) * std::exp(-x * m.sqrt2a());
}

double intercept_shift_rhs(const Model& m, double x) {
    const double l = m.lambda(), a = m.alpha();
    return (l / a) * (x - (a / (2.0 * l) + 1.0 / m.sqrt2a())) * std::exp(x * m.sqrt2a());
}

double tangent_gap(const Model& m, double x, double c) {
    const double z = left_slope_inverse(m, m.right_tangent_slope(x, c));
    return m.right_tangent_intercept(x, c) - m.left_tangent_intercept(z);
}

double tangent_gap_dx(const Model& m, double x, double c) {
    const double z = left_slope_inverse(m, m.right_tangent_slope(x, c));
    const double s = m.sqrt2a();
    return m.right_tangent_slope_dx(x, c) * (std::exp(2.0 * z * s) - std::exp(2.0 * x * s));
}

double tangent_gap_diag(const Model& m, double x, double c) {
    const double z = left_slope_inverse(m, m.right_tangent_slope(x, c));
    const double s = m.sqrt2a();
    const double e2z = std::exp(2.0 * z * s);
    return s * (m.right_tangent_intercept(x, c) - m.right_tangent_slope(x, c) * e2z) +
           slope_shift_rhs(m, x) * e2z - intercept_shift_rhs(m, x);
}

double boundary_flux(const Model& m, double x, double z) {
    const double s = m.sqrt2a();
    const double e2z = std::exp(2.0 * z * s);
    return s * (m.left_tangent_intercept(z) - m.left_tangent_slope(z) * e2z) +
           slope_shift_rhs(m, x) * e2z - intercept_shift_rhs(m, x);
}

double boundary_flux_alt(const Model& m, double x, double z) {
    const double a = m.alpha(), l = m.lambda(), d = m.delta(), s = m.sqrt2a();
    const double half = a / (2.0 * l);
    return -2.0 * z * (a * d - l) / a * std::exp(z * s) +
           (l / a) * std::exp(x * s) *
               ((half - x - 1.0 / s) * std::exp(2.0 * (z - x) * s) + (half - x + 1.0 / s));
}

BoundaryPoint solve_boundary(const Model& m, double c) {
    BoundaryPoint bp = solve_core(m, c);
    audit_tangent(m, bp);
    bp.valid = bp.F > 0.0 && tangent_gap(m, m.f0() + c, c) < 0.0 && bp.G_prime > 1.0;
    return bp;
}

CThreshold find_c2(const Model& m, double c_max) {
    m.require_new_regime();
    return scan_threshold(m, c_max, [&](double c) { return tangency_stays_near(m, c); });
}

CThreshold find_c0(const Model& m, double c_max) {
    m.require_new_regime();
    const CThreshold c2 = find_c2(m, c_max);
    const CThreshold g1 = scan_threshold(m, std::min(c2.value, c_max),
                                         [&](double c) { return boundary_expands(m, c); });
    if (g1.value < c2.value) return g1;
    return c2;
}

BoundaryTable boundary_table(const Model& m, std::span<const double> c_grid) {
    for (std::size_t i = 1; i < c_grid.size(); ++i)
        if (!(c_grid[i] > c_grid[i - 1]))
            throw ArgumentError("c grid must be strictly ascending");
    BoundaryTable t;
    t.params = m.params();
    t.c2 = find_c2(m);
    t.c0 = find_c0(m);
    t.points.reserve(c_grid.size());
    for (double c : c_grid) {
        try {
            BoundaryPoint bp = solve_boundary(m, c);
            if (!bp.valid) {
                std::ostringstream msg;
                msg << "boundary point at c = " << c << " failed validity (c0 = "
                    << t.c0.value << ")";
                throw ValidationError(msg.str(), c);
            }
            t.points.push_back(bp);
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "boundary table aborted at c = " << c << ": " << e.what();
            throw RegimeError(msg.str());
        }
    }
    for (std::size_t i = 1; i < t.points.size(); ++i) {
        if (!(t.points[i].F < t.points[i - 1].F))
            throw ValidationError("left boundary not strictly decreasing", t.points[i].c);
        if (!(t.points[i].G > t.points[i - 1].G))
            throw ValidationError("right boundary not strictly increasing", t.points[i].c);
    }
    return t;
}

std::string to_csv(const BoundaryTable& t) {
    std::string out = "c,F,G,A,B,G_prime\n";
    for (const auto& p : t.points) {
        out += io::fmt17(p.c) + ',' + io::fmt17(p.F) + ',' + io::fmt17(p.G) + ',' +
               io::fmt17(p.A) + ',' + io::fmt17(p.B) + ',' + io::fmt17(p.G_prime) + '\n';
    }
    return out;
}

std::string to_json(const BoundaryTable& t) {
    nlohmann::json j;
    j["params"] = {{"alpha", t.params.alpha},
                   {"delta", t.params.delta},
                   {"lambda", t.params.lambda}};
    j["c2"] = t.c2.value;
    j["c2_truncated"] = t.c2.truncated;
    j["c0"] = t.c0.value;
    j["c0_truncated"] = t.c0.truncated;
    auto pts = nlohmann::json::array();
    for (const auto& p : t.points)
        pts.push_back({{"c", p.c},
                       {"F", p.F},
                       {"G", p.G},
                       {"A", p.A},
                       {"B", p.B},
                       {"G_prime", p.G_prime},
                       {"valid", p.valid}});
    j["points"] = std::move(pts);
    return j.dump(2);
}

}  // namespace fuelstop
