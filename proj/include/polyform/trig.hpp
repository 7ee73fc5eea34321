#pragma once

// Exact trigonometry for single cells: triangles in E^2 / S^2 / H^2 and
// hyperbolic right-angled hexagons, with the closed-form Jacobians of the
// derivative cosine law.
//
// Conventions.  A cell is a triple of side lengths l = (l_0, l_1, l_2).
// For triangles, theta_i is the inner angle facing l_i.  For a right-angled
// hexagon, l are the three pairwise non-adjacent sides and theta_i is the
// side opposite l_i (also a length).  The "radius" parameterizations write
// either l_i = r_j + r_k (length-radius) or theta_i = r_j + r_k
// (angle-radius).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polyform/common.hpp"

namespace polyform {

enum class GeometryKind { Euclidean, Spherical, Hyperbolic, HexagonRightAngled };

inline const char* geometry_name(GeometryKind g) {
    switch (g) {
        case GeometryKind::Euclidean: return "euclidean";
        case GeometryKind::Spherical: return "spherical";
        case GeometryKind::Hyperbolic: return "hyperbolic";
        case GeometryKind::HexagonRightAngled: return "hexagon";
    }
    return "?";
}

// Curvature sign; the hexagon regime has none (it lives in H^2 but is not a
// constant-curvature triangle in the kappa sense).
inline std::optional<int> curvature_sign(GeometryKind g) {
    switch (g) {
        case GeometryKind::Euclidean: return 0;
        case GeometryKind::Spherical: return 1;
        case GeometryKind::Hyperbolic: return -1;
        case GeometryKind::HexagonRightAngled: return std::nullopt;
    }
    return std::nullopt;
}

enum class RadiusKind { LengthRadius, AngleRadius };

struct RadiusTriple {
    Triple r;
    RadiusKind kind;
};

enum class Parameterization { Lengths, Angles, LengthRadius, AngleRadius };

struct MembershipVerdict {
    bool inside = true;
    std::vector<std::string> violated;
    explicit operator bool() const { return inside; }
};

struct DerivativePack {
    Eigen::Matrix3d jac;
    double gram_A = 0.0;
    bool near_degenerate = false;
};

namespace detail {

inline void append_violation(MembershipVerdict& v, const std::string& what) {
    v.inside = false;
    v.violated.push_back(what);
}

inline std::string t3(const Triple& p) {
    return "(" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " + std::to_string(p[2]) + ")";
}

}  // namespace detail

// Induced triple x_i = r_j + r_k.
inline Triple radius_sums(const Triple& r) {
    return {r[1] + r[2], r[0] + r[2], r[0] + r[1]};
}

// Open moduli regions of Lemma 4.1 plus the radius parameterizations.
// Total function: never throws, reports every violated inequality by name.
inline MembershipVerdict moduli_membership(GeometryKind g, const Triple& p, Parameterization param) {
    MembershipVerdict v;
    auto triangle_inequalities = [&](const Triple& l) {
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            if (!(l[j] + l[k] > l[i]))
                detail::append_violation(v, "l" + std::to_string(j) + " + l" + std::to_string(k) + " > l" +
                                                std::to_string(i));
        }
    };
    switch (param) {
        case Parameterization::Lengths:
            for (int i = 0; i < 3; ++i)
                if (!(p[i] > 0.0)) detail::append_violation(v, "l" + std::to_string(i) + " > 0");
            if (!v.inside) return v;
            if (g == GeometryKind::HexagonRightAngled) return v;  // positivity is all (Lemma 5.1)
            triangle_inequalities(p);
            if (g == GeometryKind::Spherical) {
                if (!(p[0] + p[1] + p[2] < 2.0 * kPi)) detail::append_violation(v, "l0 + l1 + l2 < 2*pi");
                for (int i = 0; i < 3; ++i)
                    if (!(p[i] < kPi)) detail::append_violation(v, "l" + std::to_string(i) + " < pi");
            }
            return v;
        case Parameterization::Angles: {
            const double s = p[0] + p[1] + p[2];
            switch (g) {
                case GeometryKind::Euclidean:
                    for (int i = 0; i < 3; ++i)
                        if (!(p[i] > 0.0)) detail::append_violation(v, "theta" + std::to_string(i) + " > 0");
                    if (std::abs(s - kPi) > 1e-9) detail::append_violation(v, "theta0 + theta1 + theta2 = pi");
                    return v;
                case GeometryKind::Hyperbolic:
                    for (int i = 0; i < 3; ++i)
                        if (!(p[i] > 0.0)) detail::append_violation(v, "theta" + std::to_string(i) + " > 0");
                    if (!(s < kPi)) detail::append_violation(v, "theta0 + theta1 + theta2 < pi");
                    return v;
                case GeometryKind::Spherical:
                    if (!(s > kPi)) detail::append_violation(v, "theta0 + theta1 + theta2 > pi");
                    for (int i = 0; i < 3; ++i) {
                        const int j = (i + 1) % 3, k = (i + 2) % 3;
                        if (!(p[j] + p[k] < p[i] + kPi))
                            detail::append_violation(v, "theta" + std::to_string(j) + " + theta" + std::to_string(k) +
                                                            " < theta" + std::to_string(i) + " + pi");
                    }
                    return v;
                case GeometryKind::HexagonRightAngled:
                    // Opposite-side triple of a hexagon: any positive triple with
                    // cosh(theta_i) < sinh(theta_j) sinh(theta_k) cosh(l) attainable;
                    // positivity is necessary, realizability is checked on use.
                    for (int i = 0; i < 3; ++i)
                        if (!(p[i] > 0.0)) detail::append_violation(v, "theta" + std::to_string(i) + " > 0");
                    return v;
            }
            return v;
        }
        case Parameterization::LengthRadius:
            for (int i = 0; i < 3; ++i)
                if (!(p[i] > 0.0)) detail::append_violation(v, "r" + std::to_string(i) + " > 0");
            if (g == GeometryKind::Spherical && v.inside) {
                MembershipVerdict lm = moduli_membership(g, radius_sums(p), Parameterization::Lengths);
                for (const auto& s : lm.violated) detail::append_violation(v, "induced " + s);
            }
            if (g == GeometryKind::HexagonRightAngled)
                detail::append_violation(v, "length-radius undefined for hexagons");
            return v;
        case Parameterization::AngleRadius:
            switch (g) {
                case GeometryKind::Hyperbolic: {
                    for (int i = 0; i < 3; ++i) {
                        const int j = (i + 1) % 3;
                        if (!(p[i] + p[j] > 0.0))
                            detail::append_violation(v, "r" + std::to_string(i) + " + r" + std::to_string(j) + " > 0");
                    }
                    if (!(p[0] + p[1] + p[2] < 0.5 * kPi)) detail::append_violation(v, "r0 + r1 + r2 < pi/2");
                    return v;
                }
                case GeometryKind::Spherical: {
                    MembershipVerdict am = moduli_membership(g, radius_sums(p), Parameterization::Angles);
                    for (const auto& s : am.violated) detail::append_violation(v, "induced " + s);
                    return v;
                }
                case GeometryKind::HexagonRightAngled: {
                    for (int i = 0; i < 3; ++i) {
                        const int j = (i + 1) % 3;
                        if (!(p[i] + p[j] > 0.0))
                            detail::append_violation(v, "r" + std::to_string(i) + " + r" + std::to_string(j) + " > 0");
                    }
                    return v;
                }
                case GeometryKind::Euclidean:
                    detail::append_violation(v, "angle-radius undefined for euclidean cells");
                    return v;
            }
            return v;
    }
    return v;
}

inline void require_membership(GeometryKind g, const Triple& p, Parameterization param, const char* what) {
    MembershipVerdict v = moduli_membership(g, p, param);
    if (!v.inside) {
        std::string msg = std::string(what) + ": invalid " + geometry_name(g) + " cell " + detail::t3(p) + "; violated:";
        for (const auto& s : v.violated) msg += " [" + s + "]";
        throw DomainError(msg);
    }
}

// Cosine law, lengths -> "opposite quantity".  Triangles return inner
// angles; hexagons return the three opposite side lengths.
inline Triple angles_from_lengths(GeometryKind g, const Triple& l) {
    require_membership(g, l, Parameterization::Lengths, "angles_from_lengths");
    Triple out{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        switch (g) {
            case GeometryKind::Euclidean:
                out[i] = checked_acos((l[j] * l[j] + l[k] * l[k] - l[i] * l[i]) / (2.0 * l[j] * l[k]),
                                      "angles_from_lengths");
                break;
            case GeometryKind::Spherical:
                out[i] = checked_acos(
                    (std::cos(l[i]) - std::cos(l[j]) * std::cos(l[k])) / (std::sin(l[j]) * std::sin(l[k])),
                    "angles_from_lengths");
                break;
            case GeometryKind::Hyperbolic:
                out[i] = checked_acos(
                    (std::cosh(l[j]) * std::cosh(l[k]) - std::cosh(l[i])) / (std::sinh(l[j]) * std::sinh(l[k])),
                    "angles_from_lengths");
                break;
            case GeometryKind::HexagonRightAngled:
                out[i] = checked_acosh(
                    (std::cosh(l[i]) + std::cosh(l[j]) * std::cosh(l[k])) / (std::sinh(l[j]) * std::sinh(l[k])),
                    "angles_from_lengths");
                break;
        }
    }
    return out;
}

// Dual cosine law, angles -> lengths.  Euclidean input is rejected: lengths
// are only defined up to scale there.
inline Triple lengths_from_angles(GeometryKind g, const Triple& theta) {
    if (g == GeometryKind::Euclidean)
        throw ScaleIndeterminate("lengths_from_angles: euclidean lengths are determined only up to scale");
    require_membership(g, theta, Parameterization::Angles, "lengths_from_angles");
    Triple out{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const double num = std::cos(theta[i]) + std::cos(theta[j]) * std::cos(theta[k]);
        const double den = std::sin(theta[j]) * std::sin(theta[k]);
        switch (g) {
            case GeometryKind::Spherical:
                out[i] = checked_acos(num / den, "lengths_from_angles");
                break;
            case GeometryKind::Hyperbolic:
                out[i] = checked_acosh(num / den, "lengths_from_angles");
                break;
            case GeometryKind::HexagonRightAngled: {
                const double nh = std::cosh(theta[i]) + std::cosh(theta[j]) * std::cosh(theta[k]);
                const double dh = std::sinh(theta[j]) * std::sinh(theta[k]);
                out[i] = checked_acosh(nh / dh, "lengths_from_angles");
                break;
            }
            case GeometryKind::Euclidean:
                break;  // unreachable
        }
    }
    return out;
}

namespace detail {

// Length-like sine: the factor turning the unified sine law into the
// geometry's real form.
inline double length_sine(GeometryKind g, double l) {
    switch (g) {
        case GeometryKind::Euclidean: return l;
        case GeometryKind::Spherical: return std::sin(l);
        case GeometryKind::Hyperbolic:
        case GeometryKind::HexagonRightAngled: return std::sinh(l);
    }
    return 0.0;
}

inline double angle_sine(GeometryKind g, double theta) {
    return g == GeometryKind::HexagonRightAngled ? std::sinh(theta) : std::sin(theta);
}

inline double angle_cosine(GeometryKind g, double theta) {
    return g == GeometryKind::HexagonRightAngled ? std::cosh(theta) : std::cos(theta);
}

}  // namespace detail

// The index-independent quantity A = sin(y_i) sin(x_j) sin(x_k) of the
// derivative cosine law, in its real per-geometry form: one length-sine and
// two angle-sines for triangles, one opposite-side sinh and two side sinhs
// for hexagons.  `at` selects which index carries the length factor.
inline double gram_quantity_at(GeometryKind g, const Triple& l, int at) {
    const Triple theta = angles_from_lengths(g, l);
    const int j = (at + 1) % 3, k = (at + 2) % 3;
    if (g == GeometryKind::HexagonRightAngled)
        return std::sinh(theta[at]) * std::sinh(l[j]) * std::sinh(l[k]);
    return detail::length_sine(g, l[at]) * std::sin(theta[j]) * std::sin(theta[k]);
}

inline double gram_quantity(GeometryKind g, const Triple& l) { return gram_quantity_at(g, l, 0); }

constexpr double kNearDegenerateGram = 1e-9;

// Closed-form Jacobian d(theta)/d(lengths), Corollary 3.1:
//   d theta_i / d l_i = sin*(theta_i) / A  (> 0),
//   d theta_i / d l_j = -d theta_i / d l_i * cos*(theta_k),
// where sin*/cos* are sinh/cosh in the hexagon case.
inline DerivativePack jacobian_angles_wrt_lengths(GeometryKind g, const Triple& l) {
    const Triple theta = angles_from_lengths(g, l);
    DerivativePack pack;
    double min_A = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const double diag = detail::length_sine(g, l[i]) /
                            (detail::length_sine(g, l[j]) * detail::length_sine(g, l[k]) * detail::angle_sine(g, theta[i]));
        pack.jac(i, i) = diag;
        pack.jac(i, j) = -diag * detail::angle_cosine(g, theta[k]);
        pack.jac(i, k) = -diag * detail::angle_cosine(g, theta[j]);
        min_A = std::min(min_A, detail::angle_sine(g, theta[i]) / diag);
    }
    pack.gram_A = min_A;
    pack.near_degenerate = pack.gram_A < kNearDegenerateGram;
    if (pack.near_degenerate)
        log(LogLevel::Warn, "jacobian_angles_wrt_lengths: near-degenerate cell, gram A = " + std::to_string(pack.gram_A));
    return pack;
}

// Jacobian d(lengths)/d(angles), Corollary 3.1 (b)-(d).  For hyperbolic
// triangles the diagonal is negative; off-diagonals follow the corollary's
// sign pattern.  Euclidean input is rejected (scale).
inline DerivativePack jacobian_lengths_wrt_angles(GeometryKind g, const Triple& theta) {
    const Triple l = lengths_from_angles(g, theta);
    DerivativePack pack;
    double min_A = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        double diag;
        switch (g) {
            case GeometryKind::Spherical:
                diag = std::sin(theta[i]) / (std::sin(theta[j]) * std::sin(theta[k]) * std::sin(l[i]));
                pack.jac(i, i) = diag;
                pack.jac(i, j) = diag * std::cos(l[k]);
                pack.jac(i, k) = diag * std::cos(l[j]);
                break;
            case GeometryKind::Hyperbolic:
                diag = -std::sin(theta[i]) / (std::sin(theta[j]) * std::sin(theta[k]) * std::sinh(l[i]));
                pack.jac(i, i) = diag;
                pack.jac(i, j) = diag * std::cosh(l[k]);
                pack.jac(i, k) = diag * std::cosh(l[j]);
                break;
            case GeometryKind::HexagonRightAngled:
                diag = std::sinh(theta[i]) / (std::sinh(theta[j]) * std::sinh(theta[k]) * std::sinh(l[i]));
                pack.jac(i, i) = diag;
                pack.jac(i, j) = -diag * std::cosh(l[k]);
                pack.jac(i, k) = -diag * std::cosh(l[j]);
                break;
            case GeometryKind::Euclidean:
                throw ScaleIndeterminate("jacobian_lengths_wrt_angles: euclidean");
        }
        min_A = std::min(min_A, std::abs(detail::length_sine(g, l[i]) / diag));
    }
    pack.gram_A = min_A;
    pack.near_degenerate = pack.gram_A < kNearDegenerateGram;
    return pack;
}

// Realize a radius triple as a cell: lengths and angles, slot-aligned so
// that slot i of the cell corresponds to r_i.
struct RadiusCell {
    Triple lengths;
    Triple thetas;  // triangle angles, or hexagon opposite sides
};

inline RadiusCell realize_radius_cell(GeometryKind g, const RadiusTriple& r) {
    require_membership(g, r.r, r.kind == RadiusKind::LengthRadius ? Parameterization::LengthRadius
                                                                  : Parameterization::AngleRadius,
                       "realize_radius_cell");
    RadiusCell cell;
    if (r.kind == RadiusKind::LengthRadius) {
        cell.lengths = radius_sums(r.r);
        cell.thetas = angles_from_lengths(g, cell.lengths);
    } else {
        cell.thetas = radius_sums(r.r);
        cell.lengths = lengths_from_angles(g, cell.thetas);
    }
    return cell;
}

// Jacobian of the cosine-law image with respect to the radii (Lemma 2.2).
// length-radius: d theta / d r;  angle-radius: d lengths / d r.
inline DerivativePack radius_jacobian(GeometryKind g, const RadiusTriple& r) {
    Eigen::Matrix3d M = Eigen::Matrix3d::Ones() - Eigen::Matrix3d::Identity();
    if (r.kind == RadiusKind::LengthRadius) {
        DerivativePack base = jacobian_angles_wrt_lengths(g, radius_sums(r.r));
        base.jac = (base.jac * M).eval();
        return base;
    }
    DerivativePack base = jacobian_lengths_wrt_angles(g, radius_sums(r.r));
    base.jac = (base.jac * M).eval();
    return base;
}

// Tangent-law invariant (Lemma 2.2, Eq 2.10), in the geometry-adapted real
// form evaluated at index `at`:
//   euclidean length-radius:   r_i tan(theta_i/2)      (the inradius)
//   spherical length-radius:   sin(r_i) tan(theta_i/2)
//   hyperbolic length-radius:  sinh(r_i) tan(theta_i/2)
//   hyperbolic angle-radius:   tanh(l_i/2) / cos(r_i)
//   spherical angle-radius:    tan(l_i/2) / cos(r_i)
//   hexagon angle-radius:      coth(l_i/2) / cosh(r_i)
inline double tangent_law_at(GeometryKind g, const RadiusTriple& r, int at) {
    const RadiusCell cell = realize_radius_cell(g, r);
    if (r.kind == RadiusKind::LengthRadius) {
        const double t = std::tan(0.5 * cell.thetas[at]);
        switch (g) {
            case GeometryKind::Euclidean: return r.r[at] * t;
            case GeometryKind::Spherical: return std::sin(r.r[at]) * t;
            case GeometryKind::Hyperbolic: return std::sinh(r.r[at]) * t;
            case GeometryKind::HexagonRightAngled:
                throw DomainError("tangent_law: length-radius undefined for hexagons");
        }
    } else {
        switch (g) {
            case GeometryKind::Hyperbolic: return std::tanh(0.5 * cell.lengths[at]) / std::cos(r.r[at]);
            case GeometryKind::Spherical: return std::tan(0.5 * cell.lengths[at]) / std::cos(r.r[at]);
            case GeometryKind::HexagonRightAngled:
                return 1.0 / (std::tanh(0.5 * cell.lengths[at]) * std::cosh(r.r[at]));
            case GeometryKind::Euclidean:
                throw DomainError("tangent_law: angle-radius undefined for euclidean cells");
        }
    }
    return 0.0;
}

inline double tangent_law(GeometryKind g, const RadiusTriple& r) { return tangent_law_at(g, r, 0); }

// Ratio factor of Eq 2.12 in real form: (d y_i / d r_j) / (d y_j / d r_i)
// equals ratio_factor(i) / ratio_factor(j).
inline double radius_ratio_factor(GeometryKind g, const RadiusTriple& r, int i) {
    if (r.kind == RadiusKind::LengthRadius) {
        switch (g) {
            case GeometryKind::Euclidean: return r.r[i];
            case GeometryKind::Spherical: return std::sin(r.r[i]);
            case GeometryKind::Hyperbolic: return std::sinh(r.r[i]);
            case GeometryKind::HexagonRightAngled:
                throw DomainError("radius_ratio_factor: length-radius undefined for hexagons");
        }
    } else {
        switch (g) {
            case GeometryKind::Hyperbolic:
            case GeometryKind::Spherical: return std::cos(r.r[i]);
            case GeometryKind::HexagonRightAngled: return std::cosh(r.r[i]);
            case GeometryKind::Euclidean:
                throw DomainError("radius_ratio_factor: angle-radius undefined for euclidean cells");
        }
    }
    return 0.0;
}

// Derivative cosine law of the second kind (Appendix B).  The cell is
// pinned down by (y_j, y_k, x_i): for triangles, two side lengths and the
// included angle; for hexagons, two opposite sides and the included side.
// Returns the full 3x3 Jacobian of (y_i, x_j, x_k) with respect to
// (y_j, y_k, x_i), rows in that output order.
struct SecondKindCell {
    Triple lengths;  // y-side quantities in real form
    Triple angles;   // x-side quantities in real form
};

inline SecondKindCell second_kind_cell(GeometryKind g, double y_j, double y_k, double x_i) {
    SecondKindCell c;
    switch (g) {
        case GeometryKind::Euclidean: {
            if (!(y_j > 0.0 && y_k > 0.0 && x_i > 0.0 && x_i < kPi))
                throw DomainError("second_kind_cell: need positive sides and included angle in (0, pi)");
            const double li = std::sqrt(y_j * y_j + y_k * y_k - 2.0 * y_j * y_k * std::cos(x_i));
            c.lengths = {li, y_j, y_k};
            c.angles = angles_from_lengths(g, c.lengths);
            break;
        }
        case GeometryKind::Spherical: {
            if (!(y_j > 0.0 && y_j < kPi && y_k > 0.0 && y_k < kPi && x_i > 0.0 && x_i < kPi))
                throw DomainError("second_kind_cell: spherical SAS data out of range");
            const double ci = std::cos(y_j) * std::cos(y_k) + std::sin(y_j) * std::sin(y_k) * std::cos(x_i);
            const double li = checked_acos(ci, "second_kind_cell");
            c.lengths = {li, y_j, y_k};
            require_membership(g, c.lengths, Parameterization::Lengths, "second_kind_cell");
            c.angles = angles_from_lengths(g, c.lengths);
            break;
        }
        case GeometryKind::Hyperbolic: {
            if (!(y_j > 0.0 && y_k > 0.0 && x_i > 0.0 && x_i < kPi))
                throw DomainError("second_kind_cell: hyperbolic SAS data out of range");
            const double ci = std::cosh(y_j) * std::cosh(y_k) - std::sinh(y_j) * std::sinh(y_k) * std::cos(x_i);
            const double li = checked_acosh(ci, "second_kind_cell");
            c.lengths = {li, y_j, y_k};
            c.angles = angles_from_lengths(g, c.lengths);
            break;
        }
        case GeometryKind::HexagonRightAngled: {
            if (!(y_j > 0.0 && y_k > 0.0 && x_i > 0.0))
                throw DomainError("second_kind_cell: hexagon data must be positive");
            const double ci = std::sinh(y_j) * std::sinh(y_k) * std::cosh(x_i) - std::cosh(y_j) * std::cosh(y_k);
            const double ti = checked_acosh(ci, "second_kind_cell");
            // y-side = opposite sides (theta), x-side = red sides (l).
            c.lengths = {ti, y_j, y_k};                          // theta_i, theta_j, theta_k
            c.angles = lengths_from_angles(g, c.lengths);        // l_i, l_j, l_k
            break;
        }
    }
    return c;
}

inline DerivativePack second_kind_derivatives(GeometryKind g, double y_j, double y_k, double x_i) {
    const SecondKindCell c = second_kind_cell(g, y_j, y_k, x_i);
    DerivativePack pack;
    Eigen::Matrix3d& J = pack.jac;
    // Real translations of Appendix B Eqs (4)-(8).  s(t): length sine,
    // angles stay circular except in the hexagon regime.
    if (g == GeometryKind::HexagonRightAngled) {
        const Triple& th = c.lengths;  // opposite sides (y in the substitution)
        const Triple& l = c.angles;    // red sides (x)
        const double shi = std::sinh(th[0]), shj = std::sinh(th[1]), shk = std::sinh(th[2]);
        // rows: theta_i, l_j, l_k;  cols: theta_j, theta_k, l_i
        // Translated identities:
        //   dtheta_i/dtheta_j = cosh(l_k)                       (4)
        //   dtheta_i/dl_i     = sinh(th_j) sinh(th_k) sinh(l_i)/sinh(th_i)  (5)
        //   dl_j/dtheta_j     = -sinh(l_k)/sinh(theta_i)        (7)
        //   dl_j/dtheta_k     = -sinh(l_j) coth(theta_i)        (6)
        //   dl_j/dl_i         = -sinh(l_j) cosh(l_k)/sinh(l_i)  (8)
        J(0, 0) = std::cosh(l[2]);
        J(0, 1) = std::cosh(l[1]);
        J(0, 2) = shj * shk * std::sinh(l[0]) / shi;
        J(1, 0) = -std::sinh(l[2]) / shi;
        J(1, 1) = -std::sinh(l[1]) / std::tanh(th[0]);
        J(1, 2) = -std::sinh(l[1]) * std::cosh(l[2]) / std::sinh(l[0]);
        J(2, 0) = -std::sinh(l[2]) / std::tanh(th[0]);
        J(2, 1) = -std::sinh(l[1]) / shi;
        J(2, 2) = -std::sinh(l[2]) * std::cosh(l[1]) / std::sinh(l[0]);
        pack.gram_A = shi * std::sinh(l[1]) * std::sinh(l[2]);
    } else {
        const Triple& l = c.lengths;
        const Triple& th = c.angles;
        const double sli = detail::length_sine(g, l[0]);
        const double slj = detail::length_sine(g, l[1]);
        const double slk = detail::length_sine(g, l[2]);
        const double cot_li = (g == GeometryKind::Euclidean)   ? 1.0 / l[0]
                              : (g == GeometryKind::Spherical) ? std::cos(l[0]) / std::sin(l[0])
                                                               : std::cosh(l[0]) / std::sinh(l[0]);
        // rows: l_i, theta_j, theta_k;  cols: l_j, l_k, theta_i
        J(0, 0) = std::cos(th[2]);                                   // (4)
        J(0, 1) = std::cos(th[1]);
        J(0, 2) = slj * slk * std::sin(th[0]) / sli;                 // (5)
        J(1, 0) = std::sin(th[2]) / sli;                             // (7)
        J(1, 1) = -std::sin(th[1]) * cot_li;                         // (6)
        J(1, 2) = -std::sin(th[1]) * std::cos(th[2]) / std::sin(th[0]);  // (8)
        J(2, 0) = -std::sin(th[2]) * cot_li;
        J(2, 1) = std::sin(th[1]) / sli;
        J(2, 2) = -std::sin(th[2]) * std::cos(th[1]) / std::sin(th[0]);
        pack.gram_A = sli * std::sin(th[1]) * std::sin(th[2]);
    }
    pack.near_degenerate = pack.gram_A < kNearDegenerateGram;
    return pack;
}

}  // namespace polyform
