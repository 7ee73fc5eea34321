#pragma once

// The two lambda-families of closed 1-forms on the moduli spaces of
// geometric cells, written in chart coordinates u so that the energy
// gradient is exactly the family's coefficient triple:
//
//   omega-family:  sum_i f(theta_i) d g(l_i)    (length charts)
//   eta-family:    sum_i f(y_i) d g(r_i)        (radius charts)
//
// The chart derivative g' is always the reciprocal of the 1-form's
// denominator, so dF/du_i = f(y_i) holds exactly.

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "polyform/common.hpp"
#include "polyform/integrals.hpp"
#include "polyform/trig.hpp"

namespace polyform {

enum class FormKind { Omega, Eta };

struct FormFamily {
    FormKind family;
    GeometryKind geometry;
    RadiusKind radius_kind = RadiusKind::LengthRadius;  // Eta only
    double lambda = 0.0;
};

inline FormFamily omega_family(GeometryKind g, double lambda) { return {FormKind::Omega, g, RadiusKind::LengthRadius, lambda}; }
inline FormFamily eta_family(GeometryKind g, RadiusKind rk, double lambda) { return {FormKind::Eta, g, rk, lambda}; }

struct Signature {
    int n_pos = 0, n_zero = 0, n_neg = 0;
    bool operator==(const Signature&) const = default;
};

struct EnergyReport {
    double value = 0.0;
    Triple gradient{};
    Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
    Signature signature;
    double hessian_asymmetry = 0.0;
};

// Static description of one family: integrands, basepoints, natural domain.
struct FamilySpec {
    Integrand f_kind;
    double f_base;
    Integrand g_kind;
    double g_base;
    Parameterization param;       // membership region of the natural triple
    double dom_lo, dom_hi;        // open natural domain per coordinate
    std::optional<Signature> expected_signature;
};

inline FamilySpec family_spec(const FormFamily& fam) {
    const double inf = std::numeric_limits<double>::infinity();
    if (fam.family == FormKind::Omega) {
        switch (fam.geometry) {
            case GeometryKind::Euclidean:
                return {Integrand::SinPow, 0.5 * kPi, Integrand::Power, 1.0,
                        Parameterization::Lengths, 0.0, inf, Signature{2, 1, 0}};
            case GeometryKind::Spherical:
                return {Integrand::SinPow, 0.5 * kPi, Integrand::SinPow, 0.5 * kPi,
                        Parameterization::Lengths, 0.0, kPi, Signature{3, 0, 0}};
            case GeometryKind::Hyperbolic:
                return {Integrand::SinPow, 0.5 * kPi, Integrand::SinhPow, 1.0,
                        Parameterization::Lengths, 0.0, inf, std::nullopt};
            case GeometryKind::HexagonRightAngled:
                return {Integrand::SinhPow, 1.0, Integrand::SinhPow, 1.0,
                        Parameterization::Lengths, 0.0, inf, std::nullopt};
        }
    } else if (fam.radius_kind == RadiusKind::LengthRadius) {
        switch (fam.geometry) {
            case GeometryKind::Euclidean:
                return {Integrand::CotHalf, 0.5 * kPi, Integrand::Power, 1.0,
                        Parameterization::LengthRadius, 0.0, inf, Signature{0, 1, 2}};
            case GeometryKind::Hyperbolic:
                return {Integrand::CotHalf, 0.5 * kPi, Integrand::SinhPow, 1.0,
                        Parameterization::LengthRadius, 0.0, inf, Signature{0, 0, 3}};
            case GeometryKind::Spherical:
                return {Integrand::CotHalf, 0.5 * kPi, Integrand::SinPow, 1.0,
                        Parameterization::LengthRadius, 0.0, kPi, std::nullopt};
            case GeometryKind::HexagonRightAngled:
                throw DomainError("family_spec: hexagon has no length-radius family");
        }
    } else {
        switch (fam.geometry) {
            case GeometryKind::Hyperbolic:
                return {Integrand::TanhHalf, 1.0, Integrand::CosPow, 0.0,
                        Parameterization::AngleRadius, -0.5 * kPi, 0.5 * kPi, Signature{3, 0, 0}};
            case GeometryKind::Spherical:
                return {Integrand::TanHalf, 0.5 * kPi, Integrand::CosPow, 0.0,
                        Parameterization::AngleRadius, -0.5 * kPi, 0.5 * kPi, std::nullopt};
            case GeometryKind::HexagonRightAngled:
                return {Integrand::CothHalf, 1.0, Integrand::CoshPow, 0.0,
                        Parameterization::AngleRadius, -inf, inf, Signature{0, 0, 3}};
            case GeometryKind::Euclidean:
                throw DomainError("family_spec: no euclidean angle-radius family");
        }
    }
    throw DomainError("family_spec: unreachable");
}

// A strictly monotone 1-D chart u = g(x) with bracketed-Newton inverse.
struct Chart {
    Integrand kind;
    double exponent;
    double base;
    double lo, hi;

    double value(double x) const { return incomplete_integral(kind, exponent, base, x); }
    double derivative(double x) const { return integrand_value(kind, exponent, x); }

    double invert(double u) const {
        // value(base) = 0 and the chart is strictly increasing.  Expand a
        // bracket from the basepoint toward the open domain endpoints.
        double a = base, b = base;  // want value(a) <= u <= value(b)
        if (u < 0.0) {
            double step = 0.25;
            for (int it = 0;; ++it) {
                if (it >= 200 || (std::isfinite(lo) && a - lo < 1e-13 * (1.0 + std::abs(lo))))
                    throw InverseOutOfRange("chart inverse: u = " + std::to_string(u) + " below chart image");
                a = std::isfinite(lo) ? std::max(lo + 0.25 * (a - lo), a - step) : a - step;
                if (value(a) <= u) break;
                step *= 2.0;
            }
        } else if (u > 0.0) {
            double step = 0.25;
            for (int it = 0;; ++it) {
                if (it >= 200 || (std::isfinite(hi) && hi - b < 1e-13 * (1.0 + std::abs(hi))))
                    throw InverseOutOfRange("chart inverse: u = " + std::to_string(u) + " above chart image");
                b = std::isfinite(hi) ? std::min(hi - 0.25 * (hi - b), b + step) : b + step;
                if (value(b) >= u) break;
                step *= 2.0;
            }
        } else {
            return base;
        }
        // Safeguarded Newton with bisection fallback.
        double x = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            const double fx = value(x) - u;
            if (std::abs(fx) < 1e-14 * (1.0 + std::abs(u))) return x;
            if (fx > 0.0) b = x; else a = x;
            const double dx = derivative(x);
            double xn = x - fx / dx;
            if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
            if (std::abs(xn - x) <= 1e-16 * (1.0 + std::abs(x))) return xn;
            x = xn;
        }
        return x;
    }
};

inline Chart family_chart(const FormFamily& fam) {
    const FamilySpec spec = family_spec(fam);
    return {spec.g_kind, -fam.lambda - 1.0, spec.g_base, spec.dom_lo, spec.dom_hi};
}

// The cell behind a natural triple: y quantities and dy/dx.
struct FamilyCell {
    Triple y;                 // quantity fed to f, slot-aligned with x
    Eigen::Matrix3d dy_dx;    // Jacobian of y with respect to the natural x
};

inline FamilyCell family_cell(const FormFamily& fam, const Triple& natural) {
    FamilyCell cell;
    if (fam.family == FormKind::Omega) {
        cell.y = angles_from_lengths(fam.geometry, natural);
        cell.dy_dx = jacobian_angles_wrt_lengths(fam.geometry, natural).jac;
    } else {
        RadiusTriple rt{natural, fam.radius_kind};
        const RadiusCell rc = realize_radius_cell(fam.geometry, rt);
        cell.y = (fam.radius_kind == RadiusKind::LengthRadius) ? rc.thetas : rc.lengths;
        cell.dy_dx = radius_jacobian(fam.geometry, rt).jac;
    }
    return cell;
}

inline void require_family_membership(const FormFamily& fam, const Triple& natural, const char* what) {
    require_membership(fam.geometry, natural, family_spec(fam).param, what);
}

// Chart coordinates <-> natural coordinates.
inline Triple u_from_natural(const FormFamily& fam, const Triple& natural) {
    require_family_membership(fam, natural, "u_from_natural");
    const Chart chart = family_chart(fam);
    return {chart.value(natural[0]), chart.value(natural[1]), chart.value(natural[2])};
}

inline Triple natural_from_u(const FormFamily& fam, const Triple& u) {
    const Chart chart = family_chart(fam);
    Triple x{chart.invert(u[0]), chart.invert(u[1]), chart.invert(u[2])};
    MembershipVerdict v = moduli_membership(fam.geometry, x, family_spec(fam).param);
    if (!v.inside) {
        std::string msg = "natural_from_u: u outside chart image; violated:";
        for (const auto& s : v.violated) msg += " [" + s + "]";
        throw InverseOutOfRange(msg);
    }
    return x;
}

// Coefficient triple f(y_i) of the 1-form at a natural point.
inline Triple form_coefficients(const FormFamily& fam, const Triple& natural) {
    require_family_membership(fam, natural, "form_coefficients");
    const FamilySpec spec = family_spec(fam);
    const FamilyCell cell = family_cell(fam, natural);
    Triple out{};
    for (int i = 0; i < 3; ++i)
        out[i] = incomplete_integral(spec.f_kind, fam.lambda, spec.f_base, cell.y[i]);
    return out;
}

// Hessian of the chart energy: H_st = f'(y_s) (dy_s/dx_t) / g'(x_t).
inline Eigen::Matrix3d form_hessian(const FormFamily& fam, const Triple& natural, double* asymmetry = nullptr) {
    require_family_membership(fam, natural, "form_hessian");
    const FamilySpec spec = family_spec(fam);
    const FamilyCell cell = family_cell(fam, natural);
    const Chart chart = family_chart(fam);
    Eigen::Matrix3d H;
    for (int s = 0; s < 3; ++s) {
        const double fp = integrand_value(spec.f_kind, fam.lambda, cell.y[s]);
        for (int t = 0; t < 3; ++t) H(s, t) = fp * cell.dy_dx(s, t) / chart.derivative(natural[t]);
    }
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff() / scale;
    if (asymmetry) *asymmetry = asym;
    H = (0.5 * (H + H.transpose())).eval();
    return H;
}

inline Signature matrix_signature(const Eigen::Matrix3d& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
    const Eigen::Vector3d ev = es.eigenvalues();
    const double thresh = 1e-9 * ev.cwiseAbs().maxCoeff();
    Signature sig;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(ev[i]) <= thresh)
            ++sig.n_zero;
        else if (ev[i] > 0)
            ++sig.n_pos;
        else
            ++sig.n_neg;
    }
    return sig;
}

inline Signature hessian_signature(const FormFamily& fam, const Triple& natural) {
    return matrix_signature(form_hessian(fam, natural));
}

// Null-space residual for the euclidean families (Cor 3.3 / Cor 3.5).
// The null direction is x_i^{-lambda} (reducing to (1,1,1) at lambda = 0).
inline double null_vector_check(const FormFamily& fam, const Triple& natural) {
    if (fam.geometry != GeometryKind::Euclidean)
        throw DomainError("null_vector_check: euclidean families only");
    const Eigen::Matrix3d H = form_hessian(fam, natural);
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) v[i] = std::pow(natural[i], -fam.lambda);
    v.normalize();
    return (H * v).norm() / H.norm();
}

enum class PathStyle { Straight, Staircase };

// Line integral of the 1-form in chart coordinates from `base` to `u`.
// The straight segment (or each staircase leg) must stay in the chart
// image; a 64-point scan enforces that before any quadrature runs.
inline double energy_value(const FormFamily& fam, const Triple& u, const Triple& base,
                           PathStyle style = PathStyle::Straight) {
    const FamilySpec spec = family_spec(fam);
    const Chart chart = family_chart(fam);
    auto coefficient = [&](const Triple& ucur, int i) {
        Triple x{chart.invert(ucur[0]), chart.invert(ucur[1]), chart.invert(ucur[2])};
        const FamilyCell cell = family_cell(fam, x);
        return incomplete_integral(spec.f_kind, fam.lambda, spec.f_base, cell.y[i]);
    };
    auto scan_leg = [&](const Triple& a, const Triple& b) {
        for (int s = 0; s < 64; ++s) {
            const double t = s / 63.0;
            Triple p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
            try {
                (void)natural_from_u(fam, p);
            } catch (const InverseOutOfRange& e) {
                throw PathExitsDomain(std::string("energy: path leaves the chart image: ") + e.what());
            }
        }
    };
    auto integrate_leg = [&](const Triple& a, const Triple& b) {
        scan_leg(a, b);
        const Triple d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        return integrate_adaptive(
            [&](double t) {
                Triple p{a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2]};
                double s = 0.0;
                for (int i = 0; i < 3; ++i)
                    if (d[i] != 0.0) s += coefficient(p, i) * d[i];
                return s;
            },
            0.0, 1.0, 1e-10);
    };
    if (style == PathStyle::Straight) return integrate_leg(base, u);
    // Axis-parallel staircase: advance one coordinate at a time.
    double total = 0.0;
    Triple cur = base;
    for (int i = 0; i < 3; ++i) {
        Triple next = cur;
        next[i] = u[i];
        total += integrate_leg(cur, next);
        cur = next;
    }
    return total;
}

inline EnergyReport energy(const FormFamily& fam, const Triple& u, const Triple& base) {
    EnergyReport rep;
    rep.value = energy_value(fam, u, base, PathStyle::Straight);
    const Triple natural = natural_from_u(fam, u);
    rep.gradient = form_coefficients(fam, natural);
    rep.hessian = form_hessian(fam, natural, &rep.hessian_asymmetry);
    rep.signature = matrix_signature(rep.hessian);
    return rep;
}

// ---------------------------------------------------------------------------
// Legendre duality (Prop 2.4), realized on spherical triangles where the
// angle/length pair satisfies the unified cosine law exactly.  For each
// sample cell, the convex conjugate of the lambda energy (taken in the
// angle chart) is evaluated at the gradient point and compared against the
// (-lambda-1) length-chart energy; the difference must be constant.

struct LegendreReport {
    std::vector<double> dual_values;       // conjugate values  U.V - F(U)
    std::vector<double> reference_values;  // F_{-lambda-1}(V)
    double spread = 0.0;                   // max - min of (dual - reference)
};

inline LegendreReport legendre_transform(const FormFamily& fam, const std::vector<Triple>& length_samples) {
    if (!(fam.family == FormKind::Omega && fam.geometry == GeometryKind::Spherical))
        throw NotStrictlyConvex("legendre_transform: implemented for the strictly convex spherical omega family");
    LegendreReport rep;
    const double lambda = fam.lambda;
    const Triple octant{0.5 * kPi, 0.5 * kPi, 0.5 * kPi};
    // Angle-side chart (exponent -lambda-1) and length-side chart (exponent
    // lambda, i.e. the omega chart of the dual parameter).
    auto angle_chart = [&](double theta) {
        return incomplete_integral(Integrand::SinPow, -lambda - 1.0, 0.5 * kPi, theta);
    };
    auto length_chart = [&](double l) { return incomplete_integral(Integrand::SinPow, lambda, 0.5 * kPi, l); };
    const FormFamily dual = omega_family(GeometryKind::Spherical, -lambda - 1.0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Triple& l : length_samples) {
        require_membership(GeometryKind::Spherical, l, Parameterization::Lengths, "legendre_transform");
        const Triple theta = angles_from_lengths(GeometryKind::Spherical, l);
        Triple U{angle_chart(theta[0]), angle_chart(theta[1]), angle_chart(theta[2])};
        Triple V{length_chart(l[0]), length_chart(l[1]), length_chart(l[2])};
        // F(U) integrated along the straight theta-path from the octant;
        // S^2(theta,3) is an intersection of half-spaces, so the path stays
        // inside and closedness makes the value path-independent.
        const Triple dtheta{theta[0] - octant[0], theta[1] - octant[1], theta[2] - octant[2]};
        const double F_angle = integrate_adaptive(
            [&](double t) {
                Triple th{octant[0] + t * dtheta[0], octant[1] + t * dtheta[1], octant[2] + t * dtheta[2]};
                const Triple ls = lengths_from_angles(GeometryKind::Spherical, th);
                double s = 0.0;
                for (int i = 0; i < 3; ++i)
                    s += length_chart(ls[i]) * integrand_value(Integrand::SinPow, -lambda - 1.0, th[i]) * dtheta[i];
                return s;
            },
            0.0, 1.0, 1e-12);
        const double conjugate = U[0] * V[0] + U[1] * V[1] + U[2] * V[2] - F_angle;
        // Reference energy along the straight length-chart segment.
        const double F_dual = energy_value(dual, u_from_natural(dual, l), Triple{0.0, 0.0, 0.0});
        rep.dual_values.push_back(conjugate);
        rep.reference_values.push_back(F_dual);
        const double diff = conjugate - F_dual;
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
    }
    rep.spread = rep.dual_values.empty() ? 0.0 : hi - lo;
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary-surface convexity probe (Prop 4.2 via Lemma 4.4).  Evaluates the
// closed forms (4.1)/(4.2) with A(t) = h''/h' at a point (u, v) of the
// projected natural domain.

enum class ProbeCase { A_Power, A_Coth, B, C, D };

struct ProbeSurface {
    double alpha;
    double eps;
};

struct ProbeResult {
    double d2z_dx2;
    double det_hess;
    double w;
};

inline ProbeSurface probe_surface(ProbeCase c, int surface) {
    switch (c) {
        case ProbeCase::A_Power:
        case ProbeCase::A_Coth: return {0.0, 1.0};
        case ProbeCase::B: return {0.5 * kPi, -1.0};
        case ProbeCase::C: return surface == 0 ? ProbeSurface{0.0, 1.0} : ProbeSurface{2.0 * kPi, -1.0};
        case ProbeCase::D: return surface == 0 ? ProbeSurface{-kPi, 1.0} : ProbeSurface{kPi, -1.0};
    }
    return {0.0, 1.0};
}

inline double probe_h_derivative(ProbeCase c, double lambda, double t) {
    switch (c) {
        case ProbeCase::A_Power: return std::pow(t, -lambda - 1.0);
        case ProbeCase::A_Coth: return integrand_value(Integrand::CothHalf, lambda + 1.0, t);
        case ProbeCase::B: return std::pow(std::cos(t), lambda);
        case ProbeCase::C:
        case ProbeCase::D: return std::pow(std::sin(t), lambda);
    }
    return 0.0;
}

inline double probe_h(ProbeCase c, double lambda, double t) {
    switch (c) {
        case ProbeCase::A_Power: return incomplete_integral(Integrand::Power, -lambda - 1.0, 1.0, t);
        case ProbeCase::A_Coth: return incomplete_integral(Integrand::CothHalf, lambda + 1.0, 1.0, t);
        case ProbeCase::B: return incomplete_integral(Integrand::CosPow, lambda, 0.0, t);
        case ProbeCase::C:
        case ProbeCase::D: return incomplete_integral(Integrand::SinPow, lambda, 0.5 * kPi, t);
    }
    return 0.0;
}

inline double probe_log_derivative_ratio(ProbeCase c, double lambda, double t) {
    switch (c) {
        case ProbeCase::A_Power: return (-lambda - 1.0) / t;
        case ProbeCase::A_Coth: return -(lambda + 1.0) / std::sinh(t);
        case ProbeCase::B: return -lambda * std::tan(t);
        case ProbeCase::C:
        case ProbeCase::D: return lambda / std::tan(t);
    }
    return 0.0;
}

inline ProbeResult boundary_hessian_probe(ProbeCase c, double lambda, double u, double v, int surface = 0) {
    const ProbeSurface s = probe_surface(c, surface);
    const double w = s.alpha + s.eps * (u + v);
    auto in_dom = [&](double t) {
        switch (c) {
            case ProbeCase::A_Power:
            case ProbeCase::A_Coth: return t > 0.0;
            case ProbeCase::B: return t > -0.5 * kPi && t < 0.5 * kPi;
            case ProbeCase::C:
            case ProbeCase::D: return t > 0.0 && t < kPi;
        }
        return false;
    };
    if (!in_dom(u) || !in_dom(v) || !in_dom(w))
        throw DomainError("boundary_hessian_probe: (u, v, w) outside the case domain");
    const double Au = probe_log_derivative_ratio(c, lambda, u);
    const double Av = probe_log_derivative_ratio(c, lambda, v);
    const double Aw = probe_log_derivative_ratio(c, lambda, w);
    const double hu = probe_h_derivative(c, lambda, u);
    const double hv = probe_h_derivative(c, lambda, v);
    const double hw = probe_h_derivative(c, lambda, w);
    ProbeResult r;
    r.w = w;
    r.d2z_dx2 = s.eps * hw / (hu * hu) * (s.eps * Aw - Au);
    r.det_hess = (s.eps * s.eps) * (hw * hw) / (hu * hu * hv * hv) * (Au * Av - s.eps * Aw * (Au + Av));
    return r;
}

}  // namespace polyform
