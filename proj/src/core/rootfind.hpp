#pragma once

#include <cmath>
#include <utility>

#include "core/errors.hpp"

namespace fuelstop::rootfind {

// Bisection on a bracketing interval. f(lo) and f(hi) must have opposite
// signs (zero endpoints are returned directly).
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw ConvergenceError("bisect: interval does not bracket a root", flo);
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Safeguarded Newton: falls back to bisection whenever the Newton step
// leaves the bracket or fails to halve it.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double xtol, int max_iter = 100) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw ConvergenceError("newton_bisect: interval does not bracket a root", flo);
    if (flo > 0.0) std::swap(lo, hi);  // keep f(lo) < 0 < f(hi)
    double x = 0.5 * (lo + hi);
    double step_prev = std::abs(hi - lo);
    double step = step_prev;
    double fx = f(x);
    double dfx = df(x);
    for (int i = 0; i < max_iter; ++i) {
        const bool out_of_range =
            ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
        if (out_of_range || std::abs(2.0 * fx) > std::abs(step_prev * dfx)) {
            step_prev = step;
            step = 0.5 * (hi - lo);
            x = lo + step;
            if (x == lo) return x;
        } else {
            step_prev = step;
            step = fx / dfx;
            const double t = x;
            x -= step;
            if (t == x) return x;
        }
        if (std::abs(step) < xtol) return x;
        fx = f(x);
        dfx = df(x);
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
    }
    return x;
}

// Golden-section maximizer of a unimodal function on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, int iters = 80) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 0.0; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace fuelstop::rootfind
