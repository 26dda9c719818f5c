#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/boundary.hpp"
#include "core/model.hpp"

namespace fuelstop {

enum class Region { Stop, Continue, Act };

const char* region_name(Region r);

// Expected total cost with no fuel. Even in x; continuously differentiable
// across the no-fuel boundary.
double value0(const Model& m, double x);
double value0_deriv(const Model& m, double x);

// Its transformed-scale counterpart on [1, inf): the left obstacle up to
// scale(f0), constant beyond.
double minorant0(const Model& m, double y);

// Expected total cost at fuel level bp.c under the solved boundaries.
double value(const Model& m, const BoundaryPoint& bp, double x);
double value_deriv(const Model& m, const BoundaryPoint& bp, double x);

// Reduced value V = value - lambda/alpha^2 - (lambda/alpha) x^2; satisfies
// V(x) = e^{-sqrt(2a) x} * minorant(scale(x)).
double reduced_value(const Model& m, const BoundaryPoint& bp, double x);

// Transformed-scale minorant: left obstacle / common tangent / right obstacle.
double minorant(const Model& m, const BoundaryPoint& bp, double y);

// Diagonal gradient value_x + value_c. Equals 2*delta*x on the stop region
// and 1 on the act region; the middle branch solves the two-point problem
// with those boundary values.
class ControlGradient {
  public:
    ControlGradient(const Model& m, const BoundaryPoint& bp);
    double operator()(double x) const;
    double deriv(double x) const;

  private:
    const Model& m_;
    double F_, G_, C_, D_;
};

// Generator residual 0.5*value_xx + lambda x^2 - alpha*value. Undefined at
// the breakpoints F, G and f0 + c; evaluation there throws DomainError.
double generator_residual(const Model& m, const BoundaryPoint& bp, double x);

struct ValueProfile {
    double c = 0.0;
    std::vector<double> x;
    std::vector<double> v_tilde;   // expected total cost
    std::vector<double> v;         // reduced value
    std::vector<double> obstacle;  // stopping payoff of the reduced problem
    std::vector<Region> region;
};

ValueProfile sample_profile(const Model& m, const BoundaryPoint& bp, double x_min,
                            double x_max, std::size_t steps);

std::string to_csv(const ValueProfile& p);
std::string to_json(const ValueProfile& p);

}  // namespace fuelstop
