#include "core/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "core/rootfind.hpp"

#include "json.hpp"

namespace fuelstop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double f0_closed_form(double alpha, double delta, double lambda, double sqrt2a) {
    return (std::sqrt((alpha * delta + lambda) / (alpha * delta - lambda)) - 1.0) / sqrt2a;
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::New: return "new";
        case Regime::Open: return "open";
        case Regime::Prior: return "prior";
        case Regime::Degenerate: return "degenerate";
    }
    return "?";
}

void ModelParams::validate() const {
    if (!(std::isfinite(alpha) && alpha > 0.0))
        throw ArgumentError("alpha must be positive and finite");
    if (!(std::isfinite(delta) && delta > 0.0))
        throw ArgumentError("delta must be positive and finite");
    if (!(std::isfinite(lambda) && lambda > 0.0))
        throw ArgumentError("lambda must be positive and finite");
}

DerivedConstants derive_constants(const ModelParams& p) {
    p.validate();
    DerivedConstants d;
    d.sqrt2a = std::sqrt(2.0 * p.alpha);
    const double ad = p.alpha * p.delta;

    // lambda_star is the weight at which the no-fuel boundary equals 1/(2 delta).
    d.lambda_star = ad / (1.0 + (p.delta / p.alpha) / (0.25 / p.delta + 1.0 / d.sqrt2a));

    // lambda_dagger solves f0(l) = alpha/(2l); f0 grows without bound as
    // l -> ad while alpha/(2l) stays finite, so the bracket below works.
    const double eps = 1e-12 * ad;
    double lo = d.lambda_star + eps;
    double hi = ad - eps;
    auto gap = [&](double l) {
        return f0_closed_form(p.alpha, p.delta, l, d.sqrt2a) - p.alpha / (2.0 * l);
    };
    if (!(gap(lo) < 0.0 && gap(hi) > 0.0))
        throw std::logic_error("lambda_dagger bracket failed");
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    d.lambda_dagger = 0.5 * (lo + hi);

    if (p.lambda >= ad) {
        d.regime = Regime::Degenerate;
        d.f0 = kNaN;
        d.b0 = kNaN;
        return d;
    }
    d.f0 = f0_closed_form(p.alpha, p.delta, p.lambda, d.sqrt2a);
    d.b0 = -(2.0 * d.f0 / (p.alpha * d.sqrt2a)) * (ad - p.lambda) * std::exp(d.f0 * d.sqrt2a);
    if (p.lambda > d.lambda_dagger)
        d.regime = Regime::New;
    else if (p.lambda > d.lambda_star)
        d.regime = Regime::Open;
    else
        d.regime = Regime::Prior;
    return d;
}

std::string constants_json(const Model& m) {
    const auto& d = m.constants();
    nlohmann::json j;
    j["alpha"] = m.alpha();
    j["delta"] = m.delta();
    j["lambda"] = m.lambda();
    j["f0"] = d.f0;
    j["lambda_star"] = d.lambda_star;
    j["lambda_dagger"] = d.lambda_dagger;
    j["b0"] = d.b0;
    j["regime"] = regime_name(d.regime);
    return j.dump(2);
}

Model::Model(ModelParams p) : p_(p), d_(derive_constants(p)) {}

void Model::require_new_regime() const {
    if (d_.regime == Regime::New) return;
    std::ostringstream msg;
    msg << "parameters classified as '" << regime_name(d_.regime) << "' regime: ";
    switch (d_.regime) {
        case Regime::Prior:
            msg << "lambda = " << p_.lambda << " <= lambda_star = " << d_.lambda_star
                << "; this range has a different known solution and is refused here";
            break;
        case Regime::Open:
            msg << "lambda = " << p_.lambda << " lies in (lambda_star, lambda_dagger] = ("
                << d_.lambda_star << ", " << d_.lambda_dagger
                << "]; this range is unsolved and is refused";
            break;
        case Regime::Degenerate:
            msg << "lambda = " << p_.lambda << " >= alpha*delta = " << p_.alpha * p_.delta
                << "; the no-fuel boundary is undefined and this range is refused";
            break;
        default:
            break;
    }
    msg << " (solver requires lambda in (lambda_dagger, alpha*delta) = (" << d_.lambda_dagger
        << ", " << p_.alpha * p_.delta << "))";
    throw RegimeError(msg.str());
}

void Model::require_f0() const {
    if (!std::isfinite(d_.f0))
        throw DomainError("no-fuel boundary undefined: lambda >= alpha*delta");
}

double Model::slope_quadratic(double x) const {
    if (p_.lambda >= p_.alpha * p_.delta)
        throw DomainError("slope quadratic undefined: lambda >= alpha*delta");
    return x * x + 2.0 * x / d_.sqrt2a - (p_.lambda / p_.alpha) / (p_.alpha * p_.delta - p_.lambda);
}

double Model::scale(double x) const { return std::exp(2.0 * d_.sqrt2a * x); }

double Model::scale_inv(double y) const {
    if (!(y > 0.0)) throw DomainError("scale_inv requires y > 0");
    return std::log(y) / (2.0 * d_.sqrt2a);
}

double Model::obstacle_left(double x) const {
    return (p_.delta - p_.lambda / p_.alpha) * x * x - p_.lambda / (p_.alpha * p_.alpha);
}

double Model::obstacle_right_near(double x, double c) const {
    return p_.delta * c * (c - 2.0 * x) + (p_.delta - p_.lambda / p_.alpha) * x * x + c -
           p_.lambda / (p_.alpha * p_.alpha);
}

double Model::obstacle_right_far(double x, double c) const {
    require_f0();
    return (p_.lambda / p_.alpha) * c * (c - 2.0 * x) + c +
           d_.b0 * std::exp(-(x - c) * d_.sqrt2a);
}

double Model::obstacle_right(double x, double c) const {
    require_f0();
    return x <= d_.f0 + c ? obstacle_right_near(x, c) : obstacle_right_far(x, c);
}

double Model::obstacle(double x, double c) const {
    if (!(c >= 0.0)) throw DomainError("obstacle requires c >= 0");
    if (x <= x_break(c)) return obstacle_left(x);
    return obstacle_right(x, c);
}

double Model::transformed_left(double y) const {
    if (y == 0.0) return 0.0;
    const double x = scale_inv(y);
    return std::exp(x * d_.sqrt2a) * obstacle_left(x);
}

double Model::transformed_right(double y, double c) const {
    const double x = scale_inv(y);
    return std::exp(x * d_.sqrt2a) * obstacle_right(x, c);
}

double Model::transformed_obstacle(double y, double c) const {
    if (y == 0.0) return 0.0;
    const double x = scale_inv(y);
    return std::exp(x * d_.sqrt2a) * obstacle(x, c);
}

double Model::left_tangent_slope(double x) const {
    return (p_.alpha * p_.delta - p_.lambda) / (2.0 * p_.alpha) * std::exp(-x * d_.sqrt2a) *
           slope_quadratic(x);
}

double Model::left_tangent_slope_dx(double x) const {
    const double rho = slope_quadratic(x);
    const double rho_dx = 2.0 * x + 2.0 / d_.sqrt2a;
    return (p_.alpha * p_.delta - p_.lambda) / (2.0 * p_.alpha) * std::exp(-x * d_.sqrt2a) *
           (rho_dx - d_.sqrt2a * rho);
}

double Model::left_tangent_intercept(double x) const {
    return (p_.alpha * p_.delta - p_.lambda) / (2.0 * p_.alpha) * std::exp(x * d_.sqrt2a) *
           (slope_quadratic(x) - 4.0 * x / d_.sqrt2a);
}

double Model::right_tangent_slope(double x, double c) const {
    const double dx = -2.0 * p_.delta * c + 2.0 * (p_.delta - p_.lambda / p_.alpha) * x;
    return std::exp(-x * d_.sqrt2a) / (2.0 * d_.sqrt2a) *
           (dx + d_.sqrt2a * obstacle_right_near(x, c));
}

double Model::right_tangent_slope_dx(double x, double c) const {
    // Proportional to (generator - alpha) applied to the near right branch.
    const double gen = p_.delta - (p_.alpha * p_.delta - p_.lambda) * x * x +
                       c * p_.alpha * (p_.delta * (2.0 * x - c) - 1.0);
    return std::exp(-x * d_.sqrt2a) / d_.sqrt2a * gen;
}

double Model::right_tangent_intercept(double x, double c) const {
    const double dx = -2.0 * p_.delta * c + 2.0 * (p_.delta - p_.lambda / p_.alpha) * x;
    return std::exp(x * d_.sqrt2a) / (2.0 * d_.sqrt2a) *
           (-dx + d_.sqrt2a * obstacle_right_near(x, c));
}

double Model::far_tangent_slope(double x, double c) const {
    require_f0();
    const double dx = -2.0 * (p_.lambda / p_.alpha) * c -
                      d_.sqrt2a * d_.b0 * std::exp(-(x - c) * d_.sqrt2a);
    return std::exp(-x * d_.sqrt2a) / (2.0 * d_.sqrt2a) *
           (dx + d_.sqrt2a * obstacle_right_far(x, c));
}

double Model::inflection_x(double c) const {
    require_new_regime();
    if (!(c > 0.0)) throw DomainError("inflection_x requires c > 0");
    // -(ad - l) x^2 + 2 c a d x + (d - c a (d c + 1)), concave in x.
    const double a2 = -(p_.alpha * p_.delta - p_.lambda);
    const double b2 = 2.0 * c * p_.alpha * p_.delta;
    const double c2 = p_.delta - c * p_.alpha * (p_.delta * c + 1.0);
    const double disc = b2 * b2 - 4.0 * a2 * c2;
    if (!(disc >= 0.0))
        throw std::logic_error("inflection quadratic has no real root");
    const double s = std::sqrt(disc);
    const double qq = -0.5 * (b2 + (b2 >= 0.0 ? s : -s));
    const double r1 = qq / a2;
    const double r2 = c2 / qq;
    return std::min(r1, r2);
}

double Model::convexity_onset_y(double c) const {
    return std::max(scale(x_break(c)), scale(inflection_x(c)));
}

TangentLine Model::tangent_at(double y, double c) const {
    const double x = scale_inv(y);
    const double xb = x_break(c);
    double slope;
    if (x < xb)
        slope = left_tangent_slope(x);
    else if (x <= f0() + c)
        slope = right_tangent_slope(x, c);  // right-branch slope at the switch point
    else
        slope = far_tangent_slope(x, c);
    return {slope, transformed_obstacle(y, c) - y * slope};
}

double Model::tangent_excess(double y, double c) const {
    const TangentLine line = tangent_at(y, c);
    const double y_hi = scale(x_break(c));
    auto gap = [&](double z) { return line.at(z) - transformed_left(z); };
    double z = rootfind::golden_max(gap, 1.0, y_hi, 80);
    // One Newton polish on the derivative; the gap is concave where the
    // transformed left obstacle is convex.
    if (z > 1.0 && z < y_hi) {
        const double x = scale_inv(z);
        const double d1 = line.slope - left_tangent_slope(x);
        const double curv = left_tangent_slope_dx(x) / (2.0 * d_.sqrt2a * z);
        if (curv > 0.0) {
            const double zn = z + d1 / curv;
            if (zn > 1.0 && zn < y_hi && gap(zn) >= gap(z)) z = zn;
        }
    }
    double best = gap(z);
    best = std::max(best, gap(1.0));
    best = std::max(best, gap(y_hi));
    return best;
}

}  // namespace fuelstop
