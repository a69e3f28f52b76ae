#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vlab/errors.hpp"

namespace vlab::roots {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool exact = false; // f vanished at lo; hi == lo
};

/// Scan [lo, hi] on n_steps+1 equispaced points and collect every sign
/// change of f as a bracket. Exact zeros at scan points are recorded once
/// and attributed to the point itself.
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, long n_steps) {
    std::vector<Bracket> out;
    if (!(hi > lo) || n_steps < 1) return out;
    const double step = (hi - lo) / static_cast<double>(n_steps);
    double x_prev = lo;
    double f_prev = f(lo);
    bool prev_exact = (f_prev == 0.0);
    if (prev_exact) out.push_back({lo, lo, true});
    for (long i = 1; i <= n_steps; ++i) {
        const double x = (i == n_steps) ? hi : lo + step * static_cast<double>(i);
        const double fx = f(x);
        if (fx == 0.0) {
            out.push_back({x, x, true});
            prev_exact = true;
        } else {
            if (!prev_exact && f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev))
                out.push_back({x_prev, x, false});
            prev_exact = false;
        }
        x_prev = x;
        f_prev = fx;
    }
    return out;
}

/// Plain bisection on a sign-change bracket. Returns the midpoint once the
/// bracket width drops below xtol.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw NumericsError("bisect: endpoints do not bracket a sign change");
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// First root of f in (lo, hi]: scan then bisect. Throws if no sign change.
template <class F>
double first_root(F&& f, double lo, double hi, long n_steps, double xtol) {
    auto brackets = scan_sign_changes(f, lo, hi, n_steps);
    if (brackets.empty()) throw NumericsError("first_root: no sign change found");
    const Bracket& b = brackets.front();
    if (b.exact) return b.lo;
    return bisect(f, b.lo, b.hi, xtol);
}

} // namespace vlab::roots
