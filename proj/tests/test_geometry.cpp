#include <catch2/catch_amalgamated.hpp>

#include "dshell/geometry.hpp"
#include "dshell/oracles.hpp"

using namespace dshell;

TEST_CASE("circle R=1 N=4 hits the axis points exactly", "[geometry]") {
    auto g = build_grid(ClosedCurve::make_circle(1.0), 4);
    CHECK(g.points.col(0).isApprox(Eigen::Vector2d(1, 0), 1e-15));
    CHECK((g.points.col(1) - Eigen::Vector2d(0, 1)).norm() < 1e-15);
    CHECK((g.points.col(2) - Eigen::Vector2d(-1, 0)).norm() < 1e-15);
    CHECK((g.points.col(3) - Eigen::Vector2d(0, -1)).norm() < 1e-15);
}

TEST_CASE("circle weights sum to the perimeter for every N", "[geometry]") {
    for (int n : {3, 4, 8, 57, 256}) {
        auto g = build_grid(ClosedCurve::make_circle(2.0), n);
        CHECK(std::abs(g.perimeter_estimate() - 4.0 * pi) < 1e-13);
        CHECK((g.weights.array() > 0).all());
    }
}

TEST_CASE("ellipse perimeter against adaptive quadrature oracle", "[geometry][oracle]") {
    auto curve = ClosedCurve::make_ellipse(2.0, 1.0);
    double oracle_perim = oracle::adaptive_gauss(
        [&](double t) { return curve.derivative(t).norm(); }, 0.0, 2.0 * pi, 1e-13);
    auto g = build_grid(curve, 512);
    CHECK(std::abs(g.perimeter_estimate() - oracle_perim) < 1e-10);
}

TEST_CASE("grid invariants: unit normals orthogonal to tangents, periodic closure", "[geometry]") {
    for (auto curve : {ClosedCurve::make_circle(1.3), ClosedCurve::make_ellipse(2.0, 1.0),
                       ClosedCurve::make_kite()}) {
        CHECK((curve.point(0.0) - curve.point(2.0 * pi)).norm() < 1e-13);
        auto g = build_grid(curve, 64);
        for (int j = 0; j < g.n; ++j) {
            CHECK(std::abs(g.normals.col(j).norm() - 1.0) < 1e-13);
            CHECK(std::abs(g.normals.col(j).dot(g.tangents.col(j))) < 1e-13);
            CHECK(g.speeds[j] > 0.0);
        }
    }
}

TEST_CASE("winding check: standard CCW, reversed CW, kite CCW by shoelace", "[geometry]") {
    auto circle = ClosedCurve::make_circle(1.0);
    CHECK(winding_check(circle) == Orientation::ccw);
    auto rev = circle;
    rev.reversed = true;
    CHECK(winding_check(rev) == Orientation::cw);
    CHECK(winding_check(ClosedCurve::make_kite()) == Orientation::ccw);
}

TEST_CASE("clockwise input: auto-fixed or rejected in strict mode", "[geometry]") {
    auto rev = ClosedCurve::make_circle(1.0);
    rev.reversed = true;
    CHECK_THROWS_AS(build_grid(rev, 16, OrientationPolicy::strict), GeometryError);
    auto g = build_grid(rev, 16);  // auto_fix
    CHECK(winding_check(g.curve) == Orientation::ccw);
    // normals outward again after the fix
    for (int j = 0; j < g.n; ++j) CHECK(g.normals.col(j).dot(g.points.col(j)) > 0.0);
}

TEST_CASE("super-algebraic perimeter convergence", "[geometry]") {
    auto curve = ClosedCurve::make_ellipse(2.0, 1.0);
    double exact = oracle::adaptive_gauss([&](double t) { return curve.derivative(t).norm(); }, 0.0,
                                          2.0 * pi, 1e-14);
    double prev_err = -1.0;
    for (int n : {16, 32, 64}) {
        double err = std::abs(build_grid(curve, n).perimeter_estimate() - exact);
        if (prev_err > 1e-13 && err > 1e-15) CHECK(err / prev_err < 1e-2);
        prev_err = err;
    }
}

TEST_CASE("outward normals on convex curves point away from the centroid", "[geometry]") {
    for (auto curve : {ClosedCurve::make_circle(0.8), ClosedCurve::make_ellipse(2.0, 1.0)}) {
        auto g = build_grid(curve, 48);
        Eigen::Vector2d centroid = g.points.rowwise().mean();
        for (int j = 0; j < g.n; ++j)
            CHECK(g.normals.col(j).dot(g.points.col(j) - centroid) > 0.0);
    }
}

TEST_CASE("degenerate grids are rejected", "[geometry]") {
    CHECK_THROWS_AS(build_grid(ClosedCurve::make_circle(1.0), 2), GeometryError);
    CHECK_THROWS_AS(ClosedCurve::make_circle(-1.0), GeometryError);
    CHECK_THROWS_AS(ClosedCurve::make_ellipse(0.0, 1.0), GeometryError);
    CHECK_THROWS_AS(SphereSurface(-2.0), GeometryError);
}
