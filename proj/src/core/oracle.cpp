#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/io.hpp"

namespace fuelstop {

MinorantResult minorant_oracle(const Model& m, double c, std::size_t n_points, double x_max) {
    if (!(c >= 0.0)) throw DomainError("minorant oracle requires c >= 0");
    if (n_points < 16) throw ArgumentError("minorant oracle needs at least 16 points");
    const double x_def = m.f0() + c + 1.0;
    if (x_max <= 0.0) x_max = x_def;
    if (x_max < x_def - 1e-12) throw ArgumentError("minorant window must cover f0 + c + 1");

    MinorantResult r;
    const std::size_t n = n_points;
    r.dx = x_max / double(n - 1);
    r.y.resize(n);
    std::vector<double> obst(n);
    const double s = m.sqrt2a();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x_max * double(i) / double(n - 1);
        r.y[i] = std::exp(2.0 * s * x);
        obst[i] = std::exp(s * x) * m.obstacle(x, c);
    }

    // Monotone-chain lower hull; non-strict test drops collinear points.
    std::vector<std::size_t> hull;
    hull.reserve(1024);
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t i1 = hull[hull.size() - 2];
            const std::size_t i2 = hull[hull.size() - 1];
            if ((obst[i2] - obst[i1]) * (r.y[i] - r.y[i1]) >=
                (obst[i] - obst[i1]) * (r.y[i2] - r.y[i1]))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }

    for (std::size_t k : hull)
        if (obst[k] > 0.0)
            throw ValidationError("non-positivity constraint binds on the hull", r.y[k]);

    // Interpolate the hull back onto the grid.
    r.w.resize(n);
    for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        const std::size_t i1 = hull[seg], i2 = hull[seg + 1];
        const double slope = (obst[i2] - obst[i1]) / (r.y[i2] - r.y[i1]);
        for (std::size_t i = i1; i < i2; ++i)
            r.w[i] = obst[i1] + slope * (r.y[i] - r.y[i1]);
    }
    r.w[n - 1] = obst[n - 1];

    // The tangency segment is the widest run of skipped samples.
    std::size_t best_gap = 0, best_k = 0;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const std::size_t gap = hull[k + 1] - hull[k];
        if (gap > best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }
    if (c > 0.0 && best_gap < 4)
        throw ResolutionError("grid too coarse to resolve two contact blocks");
    r.contacts = std::move(hull);
    r.contact_left_idx = r.contacts[best_k];
    r.contact_right_idx = r.contacts[best_k + 1];
    r.contact_left_y = r.y[r.contact_left_idx];
    r.contact_right_y = r.y[r.contact_right_idx];
    return r;
}

LcpResult psor_oracle(const Model& m, double c, std::size_t n_nodes, double x_max,
                      double omega, double tol, std::size_t max_iter) {
    if (!(c >= 0.0)) throw DomainError("psor oracle requires c >= 0");
    if (n_nodes < 8) throw ArgumentError("psor oracle needs at least 8 nodes");
    const double x_min_req = m.f0() + c + 2.0 / m.sqrt2a();
    if (x_max <= 0.0) x_max = x_min_req + 2.0;
    if (x_max <= x_min_req)
        throw ArgumentError("psor window must extend past f0 + c + 2/sqrt(2 alpha)");
    const bool adaptive = omega <= 0.0;
    if (!adaptive && !(omega > 1.0 && omega < 2.0))
        throw ArgumentError("omega must lie in (1, 2)");
    if (max_iter == 0) max_iter = 200 * n_nodes;
    if (!(tol > 0.0)) throw ArgumentError("tol must be positive");

    LcpResult r;
    const std::size_t n = n_nodes;
    const double h = x_max / double(n - 1);
    r.x.resize(n);
    std::vector<double> obst(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.x[i] = x_max * double(i) / double(n - 1);
        obst[i] = m.obstacle(r.x[i], c);
    }
    r.iterations = psor_solve(obst, h, m.alpha(), adaptive ? 0.0 : omega, tol, max_iter,
                              r.v, r.last_update);

    const double stop_eps = 10.0 * tol;
    r.stop.resize(n);
    bool in_free = false;
    for (std::size_t i = 0; i < n; ++i) {
        const bool free_node = obst[i] - r.v[i] > stop_eps;
        r.stop[i] = free_node ? 0 : 1;
        if (free_node && !in_free) {
            ++r.free_blocks;
            if (r.free_blocks == 1) r.free_first_x = r.x[i];
        }
        if (free_node) r.free_last_x = r.x[i];
        in_free = free_node;
    }
    return r;
}

std::size_t psor_solve(std::span<const double> obstacle, double h, double alpha,
                       double omega, double tol, std::size_t max_iter,
                       std::vector<double>& v, double& last_update) {
    const std::size_t n = obstacle.size();
    v.assign(obstacle.begin(), obstacle.end());
    const double diag = alpha + 1.0 / (h * h);
    const double gs_scale = 0.5 / (h * h) / diag;
    const double stop_eps = 10.0 * tol;
    const bool adaptive = omega <= 0.0;
    double w = adaptive ? 1.5 : omega;
    double* vd = v.data();
    const double* ob = obstacle.data();
    std::size_t n_free = 0;
    double upd = 0.0;

    // Small per-sweep updates alone do not mean convergence: when the
    // obstacle nearly solves the equation the iteration creeps. Once updates
    // are below tol, also require the complementarity residual (in operator
    // units) to be small or pinned at its rounding floor.
    const double resid_target = 100.0 * alpha * tol;
    double resid_best = std::numeric_limits<double>::infinity();
    int stall = 0;
    auto residual = [&] {
        double r = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double op = diag * (gs_scale * (vd[i - 1] + vd[i + 1]) - vd[i]);
            const double ri = vd[i] == ob[i] ? std::max(0.0, -op) : std::abs(op);
            if (ri > r) r = ri;
        }
        return r;
    };

    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        if (adaptive) {
            // Convergence is governed by the span of the free set, not the
            // grid size; retune the relaxation to the current estimate.
            const double mm = double(std::max<std::size_t>(n_free, 4));
            w = std::min(1.997, 2.0 / (1.0 + std::sin(M_PI / (mm + 2.0))));
        }
        upd = 0.0;
        std::size_t free_count = 0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gs = gs_scale * (vd[i - 1] + vd[i + 1]);
            double vn = (1.0 - w) * vd[i] + w * gs;
            if (vn > ob[i]) vn = ob[i];
            const double d = std::abs(vn - vd[i]);
            if (d > upd) upd = d;
            if (vn < ob[i]) ++free_count;  // any strict dip feeds the tuning
            vd[i] = vn;
        }
        n_free = free_count;
        if (upd < tol) {
            const double resid = residual();
            if (resid < resid_target) break;
            if (resid < 0.97 * resid_best) {
                resid_best = resid;
                stall = 0;
            } else if (++stall >= 200) {
                break;  // residual pinned at its rounding floor
            }
        } else {
            stall = 0;
        }
    }
    last_update = upd;
    if (it == max_iter)
        throw ConvergenceError("psor did not reach the requested update tolerance", upd);
    return it + 1;
}

std::string to_csv(const MinorantResult& r) {
    std::string out = "y,w\n";
    for (std::size_t i = 0; i < r.y.size(); ++i)
        out += io::fmt17(r.y[i]) + ',' + io::fmt17(r.w[i]) + '\n';
    return out;
}

std::string to_csv(const LcpResult& r) {
    std::string out = "x,v,stop\n";
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        out += io::fmt17(r.x[i]) + ',' + io::fmt17(r.v[i]) + ',';
        out += r.stop[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace fuelstop
