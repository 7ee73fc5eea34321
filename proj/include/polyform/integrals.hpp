#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "polyform/common.hpp"

namespace polyform {

// The 1-D integrands the whole project runs on: t^e and the eight
// trigonometric/hyperbolic powers appearing in the lambda-families.
enum class Integrand {
    Power,      // t^e
    SinPow,     // sin^e(t)
    CosPow,     // cos^e(t)
    SinhPow,    // sinh^e(t)
    CoshPow,    // cosh^e(t)
    TanHalf,    // tan^e(t/2)
    CotHalf,    // cot^e(t/2)
    TanhHalf,   // tanh^e(t/2)
    CothHalf,   // coth^e(t/2)
};

inline double integrand_value(Integrand kind, double e, double t) {
    switch (kind) {
        case Integrand::Power: return std::pow(t, e);
        case Integrand::SinPow: return std::pow(std::sin(t), e);
        case Integrand::CosPow: return std::pow(std::cos(t), e);
        case Integrand::SinhPow: return std::pow(std::sinh(t), e);
        case Integrand::CoshPow: return std::pow(std::cosh(t), e);
        case Integrand::TanHalf: return std::pow(std::tan(0.5 * t), e);
        case Integrand::CotHalf: return std::pow(std::tan(0.5 * t), -e);
        case Integrand::TanhHalf: return std::pow(std::tanh(0.5 * t), e);
        case Integrand::CothHalf: return std::pow(std::tanh(0.5 * t), -e);
    }
    return 0.0;
}

namespace detail {

inline bool is_int(double e, int v) { return e == static_cast<double>(v); }

// Antiderivative when elementary for integer exponents in [-2, 2].
// Returns false when no closed form is wired up; caller falls back to
// quadrature. Cross-checked against quadrature in the test suite.
inline bool closed_antiderivative(Integrand kind, double e, double t, double& out) {
    switch (kind) {
        case Integrand::Power:
            if (is_int(e, -1)) {
                out = std::log(t);
            } else {
                out = std::pow(t, e + 1.0) / (e + 1.0);
            }
            return true;
        case Integrand::SinPow:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = -std::cos(t); return true; }
            if (is_int(e, 2)) { out = 0.5 * t - 0.25 * std::sin(2.0 * t); return true; }
            if (is_int(e, -1)) { out = std::log(std::tan(0.5 * t)); return true; }
            if (is_int(e, -2)) { out = -1.0 / std::tan(t); return true; }
            return false;
        case Integrand::CosPow:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = std::sin(t); return true; }
            if (is_int(e, 2)) { out = 0.5 * t + 0.25 * std::sin(2.0 * t); return true; }
            if (is_int(e, -1)) { out = std::log(std::tan(0.5 * t + 0.25 * kPi)); return true; }
            if (is_int(e, -2)) { out = std::tan(t); return true; }
            return false;
        case Integrand::SinhPow:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = std::cosh(t); return true; }
            if (is_int(e, 2)) { out = 0.25 * std::sinh(2.0 * t) - 0.5 * t; return true; }
            if (is_int(e, -1)) { out = std::log(std::tanh(0.5 * t)); return true; }
            if (is_int(e, -2)) { out = -1.0 / std::tanh(t); return true; }
            return false;
        case Integrand::CoshPow:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = std::sinh(t); return true; }
            if (is_int(e, 2)) { out = 0.25 * std::sinh(2.0 * t) + 0.5 * t; return true; }
            if (is_int(e, -1)) { out = std::atan(std::sinh(t)); return true; }
            if (is_int(e, -2)) { out = std::tanh(t); return true; }
            return false;
        case Integrand::TanHalf:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = -2.0 * std::log(std::cos(0.5 * t)); return true; }
            if (is_int(e, 2)) { out = 2.0 * std::tan(0.5 * t) - t; return true; }
            if (is_int(e, -1)) { out = 2.0 * std::log(std::sin(0.5 * t)); return true; }
            if (is_int(e, -2)) { out = -2.0 / std::tan(0.5 * t) - t; return true; }
            return false;
        case Integrand::CotHalf:
            return closed_antiderivative(Integrand::TanHalf, -e, t, out);
        case Integrand::TanhHalf:
            if (is_int(e, 0)) { out = t; return true; }
            if (is_int(e, 1)) { out = 2.0 * std::log(std::cosh(0.5 * t)); return true; }
            if (is_int(e, 2)) { out = t - 2.0 * std::tanh(0.5 * t); return true; }
            if (is_int(e, -1)) { out = 2.0 * std::log(std::sinh(0.5 * t)); return true; }
            if (is_int(e, -2)) { out = t - 2.0 / std::tanh(0.5 * t); return true; }
            return false;
        case Integrand::CothHalf:
            return closed_antiderivative(Integrand::TanhHalf, -e, t, out);
    }
    return false;
}

// Gauss-Kronrod 7-15 nodes on [-1, 1].
inline const double* gk_nodes() {
    static const double n[15] = {
        -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
        -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
        0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
        0.864864423359769,  0.949107912342759,  0.991455371120813};
    return n;
}
inline const double* gk_kronrod_weights() {
    static const double w[15] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
        0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
        0.104790010322250, 0.063092092629979, 0.022935322010529};
    return w;
}
inline const double* gk_gauss_weights() {
    // 7-point Gauss weights aligned with the odd Kronrod nodes.
    static const double w[7] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
        0.381830050505119, 0.279705391489277, 0.129484966168870};
    return w;
}

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double* xs = gk_nodes();
    const double* wk = gk_kronrod_weights();
    const double* wg = gk_gauss_weights();
    double sk = 0.0, sg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double fx = f(c + h * xs[i]);
        sk += wk[i] * fx;
        if (i % 2 == 1) sg += wg[i / 2] * fx;
    }
    value = sk * h;
    err = std::abs((sk - sg) * h);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b] (a > b allowed; sign handled).
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-14, int max_depth = 40) {
    if (a == b) return 0.0;
    struct Seg {
        double a, b, value, err;
        int depth;
    };
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    std::vector<Seg> stack{{a, b, v0, e0, 0}};
    double total = 0.0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.err <= abs_tol * std::max(1.0, std::abs(s.value)) || s.err <= abs_tol || s.depth >= max_depth) {
            total += s.value;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        double vl, el, vr, er;
        detail::gk15(f, s.a, m, vl, el);
        detail::gk15(f, m, s.b, vr, er);
        stack.push_back({s.a, m, vl, el, s.depth + 1});
        stack.push_back({m, s.b, vr, er, s.depth + 1});
    }
    return sign * total;
}

// Incomplete integral of one of the named integrands from a to b.
// Uses the elementary antiderivative when available, quadrature otherwise.
inline double incomplete_integral(Integrand kind, double e, double a, double b) {
    if (a == b) return 0.0;
    double fa, fb;
    if (detail::closed_antiderivative(kind, e, a, fa) && detail::closed_antiderivative(kind, e, b, fb))
        return fb - fa;
    return integrate_adaptive([&](double t) { return integrand_value(kind, e, t); }, a, b);
}

// Force the quadrature path; test oracle for the closed forms.
inline double incomplete_integral_quadrature(Integrand kind, double e, double a, double b) {
    return integrate_adaptive([&](double t) { return integrand_value(kind, e, t); }, a, b);
}

}  // namespace polyform
