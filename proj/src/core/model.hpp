#pragma once

#include <string>

#include "core/errors.hpp"

namespace fuelstop {

// Where the running-cost weight sits relative to the solvable thresholds.
enum class Regime {
    New,         // lambda in (lambda_dagger, alpha*delta): solved here
    Open,        // lambda in (lambda_star, lambda_dagger]: unsolved
    Prior,       // lambda <= lambda_star: solved elsewhere, refused here
    Degenerate,  // lambda >= alpha*delta: terminal cost never binds
};

const char* regime_name(Regime r);

struct ModelParams {
    double alpha = 0.0;   // discount rate
    double delta = 0.0;   // terminal-cost coefficient
    double lambda = 0.0;  // running-cost coefficient

    void validate() const;  // throws ArgumentError unless all positive and finite
};

struct DerivedConstants {
    double f0 = 0.0;             // no-fuel free boundary (NaN when degenerate)
    double lambda_star = 0.0;    // threshold below which older constructions apply
    double lambda_dagger = 0.0;  // root of f0(lambda) = alpha/(2 lambda)
    double b0 = 0.0;             // no-fuel value coefficient, negative (NaN when degenerate)
    double sqrt2a = 0.0;         // cached sqrt(2 alpha)
    Regime regime = Regime::Degenerate;
};

DerivedConstants derive_constants(const ModelParams& p);

class Model;

// Flat object with keys alpha, delta, lambda, f0, lambda_star,
// lambda_dagger, b0, regime; absent constants serialize as null.
std::string constants_json(const Model& m);

// Tangent line in the transformed scale: z -> slope*z + intercept.
struct TangentLine {
    double slope = 0.0;
    double intercept = 0.0;
    double at(double z) const { return slope * z + intercept; }
};

// Immutable bundle of parameters, derived constants and the obstacle /
// scale-transform geometry. Everything is a pure function of the arguments,
// so a Model may be shared freely across threads.
class Model {
  public:
    explicit Model(ModelParams p);

    double alpha() const { return p_.alpha; }
    double delta() const { return p_.delta; }
    double lambda() const { return p_.lambda; }
    const ModelParams& params() const { return p_; }
    const DerivedConstants& constants() const { return d_; }
    double f0() const { return d_.f0; }
    double b0() const { return d_.b0; }
    double lambda_star() const { return d_.lambda_star; }
    double lambda_dagger() const { return d_.lambda_dagger; }
    double sqrt2a() const { return d_.sqrt2a; }
    Regime regime() const { return d_.regime; }

    // Throws RegimeError naming the classified regime unless it is New.
    void require_new_regime() const;

    // x^2 + 2x/sqrt(2a) - (l/a)/(ad - l); its positive root is f0.
    // Requires lambda < alpha*delta.
    double slope_quadratic(double x) const;

    // Scale transform y = e^{2 sqrt(2a) x} and its inverse.
    double scale(double x) const;
    double scale_inv(double y) const;  // requires y > 0

    // Switch point between the left and right obstacle branches.
    double x_break(double c) const { return 0.5 / p_.delta + 0.5 * c; }

    // Obstacles in the natural scale. obstacle() is the pointwise minimum,
    // evaluated branch-wise: left up to x_break(c), then the near right
    // branch up to f0 + c, then the far right branch.
    double obstacle_left(double x) const;
    double obstacle_right_near(double x, double c) const;
    double obstacle_right_far(double x, double c) const;
    double obstacle_right(double x, double c) const;
    double obstacle(double x, double c) const;  // requires c >= 0

    // Transformed obstacles H(y) = sqrt(y) * h(scale_inv(y)); defined as 0 at y = 0.
    double transformed_left(double y) const;
    double transformed_right(double y, double c) const;
    double transformed_obstacle(double y, double c) const;

    // Slope / vertical intercept, in the transformed scale, of the line
    // tangent to the named obstacle branch at y = scale(x).
    double left_tangent_slope(double x) const;
    double left_tangent_slope_dx(double x) const;
    double left_tangent_intercept(double x) const;
    double right_tangent_slope(double x, double c) const;
    double right_tangent_slope_dx(double x, double c) const;
    double right_tangent_intercept(double x, double c) const;
    double far_tangent_slope(double x, double c) const;

    // Smaller root of the concave quadratic (generator - alpha) applied to
    // the near right branch; the transformed right obstacle is convex
    // beyond it. Requires c > 0 in the New regime.
    double inflection_x(double c) const;
    double convexity_onset_y(double c) const;  // max(scale(x_break), scale(inflection_x))

    // Tangent to the transformed obstacle at y (right-branch slope at the
    // switch point), and the largest signed gap between that tangent and
    // the transformed left obstacle over [1, scale(x_break(c))].
    TangentLine tangent_at(double y, double c) const;
    double tangent_excess(double y, double c) const;

  private:
    void require_f0() const;

    ModelParams p_;
    DerivedConstants d_;
};

}  // namespace fuelstop
