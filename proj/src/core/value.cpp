#include "core/value.hpp"

#include <cmath>
#include <sstream>

#include "core/io.hpp"

#include "json.hpp"

namespace fuelstop {

const char* region_name(Region r) {
    switch (r) {
        case Region::Stop: return "stop";
        case Region::Continue: return "continue";
        case Region::Act: return "act";
    }
    return "?";
}

double value0(const Model& m, double x) {
    x = std::abs(x);
    const double a = m.alpha(), l = m.lambda();
    if (x <= m.f0()) return m.delta() * x * x;
    return l / (a * a) + (l / a) * x * x + m.b0() * std::exp(-x * m.sqrt2a());
}

double value0_deriv(const Model& m, double x) {
    const double s = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    if (x <= m.f0()) return s * 2.0 * m.delta() * x;
    return s * (2.0 * m.lambda() * x / m.alpha() -
                m.sqrt2a() * m.b0() * std::exp(-x * m.sqrt2a()));
}

double minorant0(const Model& m, double y) {
    if (!(y >= 1.0)) throw DomainError("minorant0 defined on [1, inf)");
    return y <= m.scale(m.f0()) ? m.transformed_left(y) : m.b0();
}

double value(const Model& m, const BoundaryPoint& bp, double x) {
    x = std::abs(x);
    if (x <= bp.F) return m.delta() * x * x;
    const double a = m.alpha(), l = m.lambda();
    if (x < bp.G)
        return (l / a) * x * x + l / (a * a) + bp.A * std::exp(x * m.sqrt2a()) +
               bp.B * std::exp(-x * m.sqrt2a());
    return value0(m, x - bp.c) + bp.c;
}

double value_deriv(const Model& m, const BoundaryPoint& bp, double x) {
    const double s = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    if (x <= bp.F) return s * 2.0 * m.delta() * x;
    if (x < bp.G) {
        const double sq = m.sqrt2a();
        return s * (2.0 * m.lambda() * x / m.alpha() + bp.A * sq * std::exp(x * sq) -
                    bp.B * sq * std::exp(-x * sq));
    }
    return s * value0_deriv(m, x - bp.c);
}

double reduced_value(const Model& m, const BoundaryPoint& bp, double x) {
    const double a = m.alpha(), l = m.lambda();
    return value(m, bp, x) - l / (a * a) - (l / a) * x * x;
}

double minorant(const Model& m, const BoundaryPoint& bp, double y) {
    if (!(y >= 1.0)) throw DomainError("minorant defined on [1, inf)");
    const double y1 = m.scale(bp.F), y2 = m.scale(bp.G);
    if (y <= y1) return m.transformed_left(y);
    if (y < y2) return bp.A * y + bp.B;
    return m.transformed_right(y, bp.c);
}

ControlGradient::ControlGradient(const Model& m, const BoundaryPoint& bp)
    : m_(m), F_(bp.F), G_(bp.G) {
    if (!(F_ < G_)) throw ArgumentError("degenerate boundary point: F >= G");
    // Impose the stop- and act-side values on the middle branch.
    const double sq = m.sqrt2a();
    const double eF = std::exp(F_ * sq), eG = std::exp(G_ * sq);
    const double rF = 2.0 * m.delta() * F_ - 2.0 * m.lambda() * F_ / m.alpha();
    const double rG = 1.0 - 2.0 * m.lambda() * G_ / m.alpha();
    const double det = eF / eG - eG / eF;
    C_ = (rF / eG - rG / eF) / det;
    D_ = (rG * eF - rF * eG) / det;
}

double ControlGradient::operator()(double x) const {
    x = std::abs(x);
    if (x <= F_) return 2.0 * m_.delta() * x;
    if (x >= G_) return 1.0;
    const double sq = m_.sqrt2a();
    return 2.0 * m_.lambda() * x / m_.alpha() + C_ * std::exp(x * sq) + D_ * std::exp(-x * sq);
}

double ControlGradient::deriv(double x) const {
    x = std::abs(x);
    if (x <= F_) return 2.0 * m_.delta();
    if (x >= G_) return 0.0;
    const double sq = m_.sqrt2a();
    return 2.0 * m_.lambda() / m_.alpha() + sq * (C_ * std::exp(x * sq) - D_ * std::exp(-x * sq));
}

double generator_residual(const Model& m, const BoundaryPoint& bp, double x) {
    x = std::abs(x);
    const double fb = m.f0() + bp.c;
    if (x == bp.F || x == bp.G || x == fb)
        throw DomainError("generator residual undefined at a breakpoint");
    const double a = m.alpha(), d = m.delta(), l = m.lambda();
    if (x < bp.F) return d - (a * d - l) * x * x;
    if (x < bp.G) return 0.0;
    if (x < fb) return d + l * x * x - a * (d * (x - bp.c) * (x - bp.c) + bp.c);
    return 2.0 * l * bp.c * (x - (0.5 * bp.c + a / (2.0 * l)));
}

ValueProfile sample_profile(const Model& m, const BoundaryPoint& bp, double x_min,
                            double x_max, std::size_t steps) {
    if (!(x_max > x_min) || steps < 2)
        throw ArgumentError("profile needs x_max > x_min and at least 2 steps");
    ValueProfile p;
    p.c = bp.c;
    p.x.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double x = x_min + (x_max - x_min) * double(i) / double(steps - 1);
        p.x.push_back(x);
        p.v_tilde.push_back(value(m, bp, x));
        p.v.push_back(reduced_value(m, bp, x));
        p.obstacle.push_back(m.obstacle(std::abs(x), bp.c));
        const double ax = std::abs(x);
        p.region.push_back(ax <= bp.F ? Region::Stop
                                      : (ax >= bp.G ? Region::Act : Region::Continue));
    }
    return p;
}

std::string to_csv(const ValueProfile& p) {
    std::string out = "x,v_tilde,v,obstacle,region\n";
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        out += io::fmt17(p.x[i]) + ',' + io::fmt17(p.v_tilde[i]) + ',' + io::fmt17(p.v[i]) +
               ',' + io::fmt17(p.obstacle[i]) + ',' + region_name(p.region[i]) + '\n';
    }
    return out;
}

std::string to_json(const ValueProfile& p) {
    nlohmann::json j;
    j["c"] = p.c;
    j["x"] = p.x;
    j["v_tilde"] = p.v_tilde;
    j["v"] = p.v;
    j["obstacle"] = p.obstacle;
    auto regions = nlohmann::json::array();
    for (Region r : p.region) regions.push_back(region_name(r));
    j["region"] = std::move(regions);
    return j.dump(2);
}

}  // namespace fuelstop
