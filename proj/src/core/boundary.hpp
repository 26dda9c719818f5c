#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace fuelstop {

// One solved fuel level: boundaries in the natural scale plus the common
// tangent (slope A, intercept B) in the transformed scale.
struct BoundaryPoint {
    double c = 0.0;
    double F = 0.0;        // left (absorbing) boundary
    double G = 0.0;        // right (repelling) boundary
    double A = 0.0;        // common-tangent slope, negative
    double B = 0.0;        // common-tangent intercept, negative
    double G_prime = 0.0;  // dG/dc
    bool valid = false;
};

// Fuel threshold located by scan + bisection. `truncated` marks a scan that
// exhausted its configured range without finding the crossing.
struct CThreshold {
    double value = 0.0;
    bool truncated = false;
};

struct BoundaryTable {
    ModelParams params;
    std::vector<BoundaryPoint> points;
    CThreshold c2;
    CThreshold c0;
};

// Scalar helpers for the smooth-fit algebra. All tangency bookkeeping
// happens in the transformed scale at y = scale(x).

// Unique x in [0, f0] whose left-tangent slope equals g; the admissible
// slope window is [-lambda/(2 alpha^2), 0]. Throws DomainError outside it.
double left_slope_inverse(const Model& m, double g);

// Right-hand sides of the diagonal shift identities satisfied by the right
// tangent slope/intercept: (d/dx + d/dc) slope = slope_shift_rhs - sqrt(2a)*slope,
// and (d/dx + d/dc) intercept = sqrt(2a)*intercept - intercept_shift_rhs.
double slope_shift_rhs(const Model& m, double x);
double intercept_shift_rhs(const Model& m, double x);

// Intercept mismatch between the tangent to the near right obstacle branch
// at scale(x) and the left-obstacle tangent of equal slope. Its root in x is
// the right boundary G(c). Throws DomainError when the slope leaves the
// invertibility window.
double tangent_gap(const Model& m, double x, double c);
double tangent_gap_dx(const Model& m, double x, double c);
// Diagonal derivative (d/dx + d/dc) of the gap at a general point; equals
// boundary_flux(x, z) exactly where the gap vanishes.
double tangent_gap_diag(const Model& m, double x, double c);

// Scalar driving the boundary speed: G'(c) = 1 - flux/gap_dx at the solved
// boundary. Two algebraically equal forms are kept for cross-checking.
double boundary_flux(const Model& m, double x, double z);
double boundary_flux_alt(const Model& m, double x, double z);

// Solve the double-tangency system at fuel level c via the 1-D root of the
// tangent gap. Throws RegimeError when no tangency with the near right
// branch exists and ValidationError when the solved tangent fails its
// below-the-obstacle audit.
BoundaryPoint solve_boundary(const Model& m, double c);

// First fuel level at which tangency leaves the near right branch, and the
// smaller of that and the first level with G'(c) <= 1.
CThreshold find_c2(const Model& m, double c_max = 64.0);
CThreshold find_c0(const Model& m, double c_max = 64.0);

// Solve every level of an ascending grid; any per-point failure aborts with
// the offending c in the message.
BoundaryTable boundary_table(const Model& m, std::span<const double> c_grid);

std::string to_csv(const BoundaryTable& t);
std::string to_json(const BoundaryTable& t);

}  // namespace fuelstop
