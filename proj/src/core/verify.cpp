#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "core/boundary.hpp"
#include "core/oracle.hpp"
#include "core/value.hpp"

#include "json.hpp"

namespace fuelstop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Worst {
    double value = 0.0;
    double location = 0.0;

    void update(double v, double loc) {
        if (v > value) {
            value = v;
            location = loc;
        }
    }
};

struct Suite {
    const Model& m;
    const VerifyConfig& cfg;
    std::vector<CheckReport> reports;

    template <class Fn>
    void check(const std::string& name, double tol, const std::string& detail, Fn&& fn) {
        CheckReport r;
        r.name = name;
        r.tolerance = tol * cfg.tol_scale;
        r.detail = detail;
        try {
            const Worst w = fn();
            r.worst_violation = w.value;
            r.location = w.location;
            r.passed = r.worst_violation <= r.tolerance;
        } catch (const std::exception& e) {
            r.worst_violation = kInf;
            r.passed = false;
            r.detail += std::string(" [failed: ") + e.what() + "]";
        }
        reports.push_back(std::move(r));
    }
};

// Value / derivative mismatch of the middle branch against a neighbour branch.
double mid_value(const Model& m, const BoundaryPoint& bp, double x) {
    const double a = m.alpha(), l = m.lambda();
    return (l / a) * x * x + l / (a * a) + bp.A * std::exp(x * m.sqrt2a()) +
           bp.B * std::exp(-x * m.sqrt2a());
}

double mid_deriv(const Model& m, const BoundaryPoint& bp, double x) {
    const double s = m.sqrt2a();
    return 2.0 * m.lambda() * x / m.alpha() + bp.A * s * std::exp(x * s) -
           bp.B * s * std::exp(-x * s);
}

}  // namespace

std::vector<CheckReport> run_suite(const Model& m, std::span<const double> c_list,
                                   const VerifyConfig& cfg) {
    m.require_new_regime();
    Suite s{m, cfg, {}};
    const double a = m.alpha(), d = m.delta(), l = m.lambda();
    const double half = 0.5 / d;

    const CThreshold c0 = find_c0(m);
    for (double c : c_list)
        if (!(c > 0.0 && c < c0.value)) {
            std::ostringstream msg;
            msg << "fuel level " << c << " outside (0, c0 = " << c0.value << ")";
            throw ArgumentError(msg.str());
        }

    // ---- level-independent checks -------------------------------------
    s.check("constants", 1e-10, "slope quadratic vanishes at f0; lambda_dagger equation", [&] {
        Worst w;
        w.update(std::abs(m.slope_quadratic(m.f0())), m.f0());
        const double fd = (std::sqrt((a * d + m.lambda_dagger()) /
                                     (a * d - m.lambda_dagger())) -
                           1.0) /
                          m.sqrt2a();
        w.update(std::abs(fd - a / (2.0 * m.lambda_dagger())), m.lambda_dagger());
        const bool chain = half < a / (2.0 * l) && a / (2.0 * l) < m.f0();
        w.update(chain ? 0.0 : 1.0, l);
        return w;
    });

    s.check("no_fuel_geometry", 1e-9,
            "transformed left obstacle at y=1; no-fuel value is C1 at f0", [&] {
                Worst w;
                w.update(std::abs(m.transformed_left(1.0) + l / (a * a)), 1.0);
                w.update(std::abs(m.left_tangent_slope(0.0) + l / (2.0 * a * a)), 1.0);
                const double f0 = m.f0();
                const double left_v = d * f0 * f0;
                const double right_v = l / (a * a) + (l / a) * f0 * f0 +
                                       m.b0() * std::exp(-f0 * m.sqrt2a());
                w.update(std::abs(left_v - right_v), f0);
                const double left_d = 2.0 * d * f0;
                const double right_d =
                    2.0 * l * f0 / a - m.sqrt2a() * m.b0() * std::exp(-f0 * m.sqrt2a());
                w.update(std::abs(left_d - right_d), f0);
                w.update(std::abs(minorant0(m, m.scale(f0)) - m.b0()), m.scale(f0));
                return w;
            });

    s.check("c0_positive", 0.5, "fuel threshold of the validated construction", [&] {
        Worst w;
        w.update(c0.value > 0.0 ? 0.0 : 1.0, c0.value);
        return w;
    });

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    s.check("q_display_equivalence", 1e-12, "two closed forms of the boundary flux agree",
            [&] {
                Worst w;
                for (int i = 0; i < 1000; ++i) {
                    const double x = 2.0 * unit(rng);
                    const double z = 0.7 * unit(rng) * m.f0() / 2.375;
                    const double q1 = boundary_flux(m, x, z);
                    const double q2 = boundary_flux_alt(m, x, z);
                    w.update(std::abs(q1 - q2) / std::max(1.0, std::abs(q1)), x);
                }
                return w;
            });

    // Random tangency points for the finite-difference identity checks.
    std::vector<std::pair<double, double>> probes;  // (x, c)
    std::vector<BoundaryPoint> probe_bps;
    {
        std::mt19937_64 prng(cfg.seed + 1);
        while (probes.size() < 16) {
            const double c = (0.05 + 0.85 * unit(prng)) * c0.value;
            BoundaryPoint bp = solve_boundary(m, c);
            const double lo = std::max(m.x_break(c), m.inflection_x(c));
            const double hi = m.f0() + c;
            const double x = bp.G + (unit(prng) - 0.5) *
                                        0.4 * std::min(bp.G - lo, hi - bp.G);
            probes.emplace_back(x, c);
            probe_bps.push_back(bp);
        }
    }
    constexpr double fd_step = 1e-5;

    s.check("identity_hall1", 1e-6, "diagonal shift of the right tangent slope", [&] {
        Worst w;
        for (auto [x, c] : probes) {
            const double fd = (m.right_tangent_slope(x + fd_step, c + fd_step) -
                               m.right_tangent_slope(x - fd_step, c - fd_step)) /
                              (2.0 * fd_step);
            const double rhs = slope_shift_rhs(m, x) - m.sqrt2a() * m.right_tangent_slope(x, c);
            w.update(std::abs(fd - rhs), c);
        }
        return w;
    });

    s.check("identity_hall2", 1e-6, "diagonal shift of the right tangent intercept", [&] {
        Worst w;
        for (auto [x, c] : probes) {
            const double fd = (m.right_tangent_intercept(x + fd_step, c + fd_step) -
                               m.right_tangent_intercept(x - fd_step, c - fd_step)) /
                              (2.0 * fd_step);
            const double rhs =
                m.sqrt2a() * m.right_tangent_intercept(x, c) - intercept_shift_rhs(m, x);
            w.update(std::abs(fd - rhs), c);
        }
        return w;
    });

    s.check("identity_lx", 1e-6, "x-derivative of the tangent gap", [&] {
        Worst w;
        for (auto [x, c] : probes) {
            const double fd =
                (tangent_gap(m, x + fd_step, c) - tangent_gap(m, x - fd_step, c)) /
                (2.0 * fd_step);
            w.update(std::abs(fd - tangent_gap_dx(m, x, c)), c);
        }
        return w;
    });

    s.check("identity_lxlc_q", 1e-6,
            "diagonal derivative of the tangent gap equals the boundary flux at G(c)", [&] {
                Worst w;
                for (const auto& bp : probe_bps) {
                    const double fd = (tangent_gap(m, bp.G + fd_step, bp.c + fd_step) -
                                       tangent_gap(m, bp.G - fd_step, bp.c - fd_step)) /
                                      (2.0 * fd_step);
                    w.update(std::abs(fd - boundary_flux(m, bp.G, bp.F)), bp.c);
                }
                return w;
            });

    if (c_list.empty()) {
        std::sort(s.reports.begin(), s.reports.end(),
                  [](const CheckReport& x, const CheckReport& y) { return x.name < y.name; });
        return std::move(s.reports);
    }

    // ---- per-level checks ----------------------------------------------
    std::vector<double> cs(c_list.begin(), c_list.end());
    std::sort(cs.begin(), cs.end());
    std::vector<BoundaryPoint> bps;
    bps.reserve(cs.size());
    for (double c : cs) bps.push_back(solve_boundary(m, c));

    s.check("smooth_fit_F", 1e-9, "value and slope agree across the left boundary", [&] {
        Worst w;
        for (const auto& bp : bps) {
            w.update(std::abs(mid_value(m, bp, bp.F) - d * bp.F * bp.F), bp.c);
            w.update(std::abs(mid_deriv(m, bp, bp.F) - 2.0 * d * bp.F), bp.c);
        }
        return w;
    });

    s.check("smooth_fit_G", 1e-9, "value and slope agree across the right boundary", [&] {
        Worst w;
        for (const auto& bp : bps) {
            w.update(std::abs(mid_value(m, bp, bp.G) - (value0(m, bp.G - bp.c) + bp.c)), bp.c);
            w.update(std::abs(mid_deriv(m, bp, bp.G) - value0_deriv(m, bp.G - bp.c)), bp.c);
        }
        return w;
    });

    const std::size_t na = cfg.x_audit;

    s.check("tangent_below_obstacle", 1e-9, "common tangent under the transformed obstacle",
            [&] {
                Worst w;
                for (const auto& bp : bps) {
                    const double x_hi = m.f0() + bp.c + 1.0;
                    for (std::size_t i = 0; i <= na; ++i) {
                        const double y = m.scale(x_hi * double(i) / double(na));
                        const double slack =
                            m.transformed_obstacle(y, bp.c) - (bp.A * y + bp.B);
                        w.update(-slack, bp.c);
                    }
                }
                return w;
            });

    s.check("W_convex", 1e-9, "transformed minorant is convex", [&] {
        Worst w;
        for (const auto& bp : bps) {
            const double x_hi = m.f0() + bp.c + 1.0;
            double y0 = 1.0, y1 = 0.0;
            double w0 = minorant(m, bp, y0), w1 = 0.0;
            for (std::size_t i = 1; i <= na; ++i) {
                const double y2 = m.scale(x_hi * double(i) / double(na));
                const double w2 = minorant(m, bp, y2);
                if (i >= 2) {
                    const double chord =
                        (w0 * (y2 - y1) + w2 * (y1 - y0)) / (y2 - y0);
                    w.update(w1 - chord, bp.c);
                }
                y0 = y1; w0 = w1;
                y1 = y2; w1 = w2;
            }
        }
        return w;
    });

    s.check("W_nonpositive", 1e-12, "transformed minorant stays nonpositive", [&] {
        Worst w;
        for (const auto& bp : bps) {
            const double x_hi = m.f0() + bp.c + 1.0;
            for (std::size_t i = 0; i <= na; ++i) {
                const double y = m.scale(x_hi * double(i) / double(na));
                w.update(minorant(m, bp, y), bp.c);
            }
        }
        return w;
    });

    s.check("V_leq_obstacle", 1e-9, "reduced value dominated by the stopping payoff", [&] {
        Worst w;
        for (const auto& bp : bps) {
            const double x_hi = m.f0() + bp.c + 1.0;
            for (std::size_t i = 0; i <= na; ++i) {
                const double x = x_hi * double(i) / double(na);
                w.update(reduced_value(m, bp, x) - m.obstacle(x, bp.c), x);
            }
        }
        return w;
    });

    s.check("U_leq_1", 1e-9, "diagonal gradient of the value never exceeds 1", [&] {
        Worst w;
        for (const auto& bp : bps) {
            const ControlGradient u(m, bp);
            const double x_hi = m.f0() + bp.c + 1.0;
            for (std::size_t i = 0; i <= na; ++i) {
                const double x = x_hi * double(i) / double(na);
                w.update(u(x) - 1.0, x);
            }
        }
        return w;
    });

    s.check("U_boundary_values", 1e-9,
            "diagonal gradient hits 2*delta*F and 1 at the boundaries", [&] {
                Worst w;
                for (const auto& bp : bps) {
                    const ControlGradient u(m, bp);
                    w.update(std::abs(u(bp.F) - 2.0 * d * bp.F), bp.c);
                    w.update(std::abs(u(bp.G) - 1.0), bp.c);
                    const double uf = 2.0 * d * bp.F;
                    w.update(uf > 0.0 && uf < 1.0 ? 0.0 : 1.0, bp.c);
                }
                return w;
            });

    s.check("R_nonneg", 1e-8, "generator residual stays nonnegative", [&] {
        Worst w;
        for (const auto& bp : bps) {
            const double x_hi = m.f0() + bp.c + 1.0;
            const double step = x_hi / double(na);
            for (std::size_t i = 0; i < na; ++i) {
                const double x = (double(i) + 0.5) * step;  // half-step off the breakpoints
                w.update(-generator_residual(m, bp, x), x);
            }
        }
        return w;
    });

    s.check("complementarity", 1e-8,
            "stop-payoff gap, gradient slack and residual have zero product", [&] {
                Worst w;
                for (const auto& bp : bps) {
                    const ControlGradient u(m, bp);
                    const double x_hi = m.f0() + bp.c + 1.0;
                    const double step = x_hi / double(na);
                    for (std::size_t i = 0; i < na; ++i) {
                        const double x = (double(i) + 0.5) * step;
                        const double g1 = d * x * x - value(m, bp, x);
                        const double g2 = 1.0 - u(x);
                        const double g3 = generator_residual(m, bp, x);
                        w.update(std::abs(g1 * g2 * g3), x);
                        w.update(std::min({std::abs(g1), std::abs(g2), std::abs(g3)}), x);
                    }
                }
                return w;
            });

    s.check("F_monotone", 0.0, "left boundary strictly decreasing in fuel", [&] {
        Worst w;
        w.value = -1.0;  // sentinel: no pair compared yet
        for (std::size_t i = 1; i < bps.size(); ++i)
            w.update(bps[i].F - bps[i - 1].F, bps[i].c);
        return w;
    });

    s.check("G_monotone", 0.0, "right boundary strictly increasing in fuel", [&] {
        Worst w;
        w.value = -1.0;  // sentinel: no pair compared yet
        for (std::size_t i = 1; i < bps.size(); ++i)
            w.update(bps[i - 1].G - bps[i].G, bps[i].c);
        return w;
    });

    s.check("Gprime_gt_1", 0.0, "right boundary outpaces the fuel spent", [&] {
        Worst w;
        w.value = -1.0;  // sentinel: no pair compared yet
        for (const auto& bp : bps) w.update(1.0 - bp.G_prime, bp.c);
        return w;
    });

    s.check("boundary_limits_c_to_0", 0.0,
            "both boundaries approach 1/(2*delta) monotonically as fuel vanishes", [&] {
                Worst w;
                w.value = -1.0;  // sentinel: no pair compared yet
                double c = std::min(cs.front(), 0.1);
                double prev_f = kInf, prev_g = kInf;
                for (int k = 0; k < 4; ++k, c *= 0.5) {
                    const BoundaryPoint bp = solve_boundary(m, c);
                    const double df = std::abs(bp.F - half);
                    const double dg = std::abs(bp.G - half);
                    if (k > 0) {
                        w.update(df - prev_f, c);
                        w.update(dg - prev_g, c);
                    }
                    prev_f = df;
                    prev_g = dg;
                }
                return w;
            });

    if (cfg.with_oracles) {
        const BoundaryPoint& bp = bps[bps.size() / 2];

        s.check("oracle_minorant_match", 2.0, "hull contacts vs solved boundaries, in steps",
                [&] {
                    const MinorantResult o =
                        minorant_oracle(m, bp.c, cfg.minorant_points);
                    Worst w;
                    const double xl = m.scale_inv(o.contact_left_y);
                    const double xr = m.scale_inv(o.contact_right_y);
                    w.update(std::abs(xl - bp.F) / o.dx, bp.c);
                    w.update(std::abs(xr - bp.G) / o.dx, bp.c);
                    return w;
                });

        s.check("oracle_psor_match", 1.0,
                "discrete stopping solve: active set within 2h, error within 100 h^2", [&] {
                    const LcpResult o =
                        psor_oracle(m, bp.c, cfg.psor_nodes, 0.0, 0.0, 1e-11);
                    const double h = o.x[1] - o.x[0];
                    Worst w;
                    w.update(o.free_blocks == 1 ? 0.0 : 1.0, bp.c);
                    w.update(std::abs(o.free_first_x - bp.F) / (2.0 * h), bp.c);
                    w.update(std::abs(o.free_last_x - bp.G) / (2.0 * h), bp.c);
                    double err = 0.0, err_x = 0.0;
                    for (std::size_t i = 0; i < o.x.size(); ++i) {
                        const double x = o.x[i];
                        if (std::min({std::abs(x - bp.F), std::abs(x - bp.G),
                                      std::abs(x - m.f0() - bp.c)}) <= 3.0 * h)
                            continue;
                        const double e = std::abs(o.v[i] - reduced_value(m, bp, x));
                        if (e > err) {
                            err = e;
                            err_x = x;
                        }
                    }
                    w.update(err / (100.0 * h * h), err_x);
                    return w;
                });
    }

    std::sort(s.reports.begin(), s.reports.end(),
              [](const CheckReport& x, const CheckReport& y) { return x.name < y.name; });
    return std::move(s.reports);
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const CheckReport& r) { return r.passed; });
}

std::string to_json(const std::vector<CheckReport>& reports) {
    auto arr = nlohmann::json::array();
    for (const auto& r : reports)
        arr.push_back({{"name", r.name},
                       {"passed", r.passed},
                       {"worst_violation", r.worst_violation},
                       {"location", r.location},
                       {"tolerance", r.tolerance},
                       {"detail", r.detail}});
    return arr.dump(2);
}

std::string to_table(const std::vector<CheckReport>& reports) {
    std::ostringstream out;
    std::size_t w = 4;
    for (const auto& r : reports) w = std::max(w, r.name.size());
    char buf[64];
    for (const auto& r : reports) {
        out << (r.passed ? "PASS  " : "FAIL  ");
        out << r.name << std::string(w + 2 - r.name.size(), ' ');
        std::snprintf(buf, sizeof(buf), "worst %11.4e  tol %9.2e  at %-10.6g", r.worst_violation,
                      r.tolerance, r.location);
        out << buf << "  " << r.detail << '\n';
    }
    return out.str();
}

}  // namespace fuelstop
