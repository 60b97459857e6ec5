#pragma once

// Smooth closed curves in R^2 (circle, ellipse, kite) with analytic
// parametrizations on [0, 2pi), quadrature grids on them, and the sphere
// radius bundle used by the separable 3-d backends.

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "dshell/common.hpp"

namespace dshell {

enum class CurveKind { circle, ellipse, kite };
enum class Orientation { ccw, cw };
enum class OrientationPolicy { auto_fix, strict };

struct ClosedCurve {
    CurveKind kind = CurveKind::circle;
    double radius = 1.0;          // circle
    double a = 2.0, b = 1.0;      // ellipse semi-axes
    double kite_c = 0.65;         // kite: x = cos t + c (cos 2t - 1)
    double kite_h = 1.5;          //       y = h sin t
    bool reversed = false;        // parametrize with t -> -t (flips orientation)

    static ClosedCurve make_circle(double R) {
        if (!(R > 0)) throw GeometryError("circle: radius must be positive");
        ClosedCurve c;
        c.kind = CurveKind::circle;
        c.radius = R;
        return c;
    }
    static ClosedCurve make_ellipse(double a_, double b_) {
        if (!(a_ > 0) || !(b_ > 0)) throw GeometryError("ellipse: semi-axes must be positive");
        ClosedCurve c;
        c.kind = CurveKind::ellipse;
        c.a = a_;
        c.b = b_;
        return c;
    }
    static ClosedCurve make_kite(double c_ = 0.65, double h_ = 1.5) {
        if (!(h_ > 0)) throw GeometryError("kite: height parameter must be positive");
        ClosedCurve c;
        c.kind = CurveKind::kite;
        c.kite_c = c_;
        c.kite_h = h_;
        return c;
    }

    Eigen::Vector2d point(double t) const {
        double s = reversed ? -t : t;
        switch (kind) {
            case CurveKind::circle:
                return {radius * std::cos(s), radius * std::sin(s)};
            case CurveKind::ellipse:
                return {a * std::cos(s), b * std::sin(s)};
            case CurveKind::kite:
                return {std::cos(s) + kite_c * (std::cos(2 * s) - 1.0), kite_h * std::sin(s)};
        }
        return {};
    }

    Eigen::Vector2d derivative(double t) const {
        double s = reversed ? -t : t;
        double sign = reversed ? -1.0 : 1.0;
        switch (kind) {
            case CurveKind::circle:
                return sign * Eigen::Vector2d{-radius * std::sin(s), radius * std::cos(s)};
            case CurveKind::ellipse:
                return sign * Eigen::Vector2d{-a * std::sin(s), b * std::cos(s)};
            case CurveKind::kite:
                return sign *
                       Eigen::Vector2d{-std::sin(s) - 2.0 * kite_c * std::sin(2 * s), kite_h * std::cos(s)};
        }
        return {};
    }

    Eigen::Vector2d second_derivative(double t) const {
        double s = reversed ? -t : t;
        switch (kind) {
            case CurveKind::circle:
                return {-radius * std::cos(s), -radius * std::sin(s)};
            case CurveKind::ellipse:
                return {-a * std::cos(s), -b * std::sin(s)};
            case CurveKind::kite:
                return {-std::cos(s) - 4.0 * kite_c * std::cos(2 * s), -kite_h * std::sin(s)};
        }
        return {};
    }
};

struct SphereSurface {
    double radius = 1.0;
    explicit SphereSurface(double R) : radius(R) {
        if (!(R > 0)) throw GeometryError("sphere: radius must be positive");
    }
};

/// Discretized closed curve: equispaced parameter nodes, points, outward unit
/// normals, parametrization speeds and arc-length quadrature weights
/// w_j = 2 pi s_j / N. Immutable after construction.
struct BoundaryGrid {
    ClosedCurve curve;
    int n = 0;
    Eigen::VectorXd params;       // t_j = 2 pi j / N
    Eigen::Matrix2Xd points;
    Eigen::Matrix2Xd normals;     // outward unit
    Eigen::Matrix2Xd tangents;    // x'(t_j), not normalized
    Eigen::VectorXd speeds;       // |x'(t_j)|
    Eigen::VectorXd weights;      // 2 pi s_j / N

    double perimeter_estimate() const { return weights.sum(); }
};

/// Orientation of the parametrization, by the shoelace signed area on a dense
/// sampling.
inline Orientation winding_check(const ClosedCurve& curve, int n_samples = 512) {
    if (n_samples < 3) throw GeometryError("winding_check: need at least 3 samples");
    double area2 = 0.0;
    Eigen::Vector2d prev = curve.point(0.0);
    for (int j = 1; j <= n_samples; ++j) {
        Eigen::Vector2d cur = curve.point(2.0 * pi * j / n_samples);
        area2 += prev.x() * cur.y() - prev.y() * cur.x();
        prev = cur;
    }
    if (area2 == 0.0) throw GeometryError("winding_check: degenerate curve (zero signed area)");
    return area2 > 0.0 ? Orientation::ccw : Orientation::cw;
}

/// Quadrature grid with N nodes. CW input is re-oriented to CCW under
/// auto_fix (the grid records the fixed curve); strict mode rejects it.
inline BoundaryGrid build_grid(const ClosedCurve& curve, int n,
                               OrientationPolicy policy = OrientationPolicy::auto_fix) {
    if (n < 3) throw GeometryError("build_grid: N must be at least 3");
    ClosedCurve c = curve;
    if (winding_check(c) == Orientation::cw) {
        if (policy == OrientationPolicy::strict)
            throw GeometryError("build_grid: clockwise parametrization rejected in strict mode");
        c.reversed = !c.reversed;
    }
    BoundaryGrid g;
    g.curve = c;
    g.n = n;
    g.params.resize(n);
    g.points.resize(2, n);
    g.normals.resize(2, n);
    g.tangents.resize(2, n);
    g.speeds.resize(n);
    g.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        double t = 2.0 * pi * j / n;
        g.params[j] = t;
        Eigen::Vector2d x = c.point(t), d = c.derivative(t);
        double sp = d.norm();
        if (!(sp > 1e-14))
            throw GeometryError("build_grid: non-regular parametrization (speed <= 0 at t=" +
                                std::to_string(t) + ")");
        g.points.col(j) = x;
        g.tangents.col(j) = d;
        g.speeds[j] = sp;
        g.weights[j] = 2.0 * pi * sp / n;
        g.normals.col(j) = Eigen::Vector2d{d.y(), -d.x()} / sp;  // outward for CCW
    }
    return g;
}

/// Distance from a point to the curve, by dense parameter sampling plus a few
/// local refinement sweeps. Used for volume exclusion tubes.
inline double distance_to_curve(const ClosedCurve& curve, const Eigen::Vector2d& p,
                                int n_samples = 512) {
    double best_t = 0.0, best_d = std::numeric_limits<double>::max();
    for (int j = 0; j < n_samples; ++j) {
        double t = 2.0 * pi * j / n_samples;
        double d = (curve.point(t) - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    double half = 2.0 * pi / n_samples;
    for (int it = 0; it < 30; ++it) {
        for (double t : {best_t - half, best_t + half}) {
            double d = (curve.point(t) - p).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best_t = t;
            }
        }
        half *= 0.5;
    }
    return std::sqrt(best_d);
}

}  // namespace dshell
