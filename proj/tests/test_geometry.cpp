#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dlo/errors.hpp"
#include "dlo/geometry.hpp"
#include "dlo/rng.hpp"

using dlo::Vec3;
using namespace dlo::geom;

namespace {

constexpr double kPi = 3.14159265358979323846;

DiscreteCurve straight_line(int n, double l) {
    DiscreteCurve c;
    c.segment_length = l;
    for (int i = 0; i < n; ++i) c.points.push_back({i * l, 0.0, 0.0});
    return c;
}

// Circle of radius R in the xy-plane, n points, one full turn (open polygon).
DiscreteCurve circle_curve(int n, double radius) {
    DiscreteCurve c;
    const double dphi = 2.0 * kPi / n;
    c.segment_length = 2.0 * radius * std::sin(0.5 * dphi);
    for (int i = 0; i < n; ++i)
        c.points.push_back({radius * std::cos(i * dphi), radius * std::sin(i * dphi), 0.0});
    return c;
}

DiscreteCurve helix_curve(int n, double radius, double pitch, double dt) {
    DiscreteCurve c;
    const double chord = 2.0 * radius * std::sin(0.5 * dt);
    c.segment_length = std::sqrt(chord * chord + pitch * pitch * dt * dt);
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        c.points.push_back({radius * std::cos(t), radius * std::sin(t), pitch * t});
    }
    return c;
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    // Rodrigues rotation about a unit axis.
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

} // namespace

TEST_CASE("tangents of a straight line are the axis direction") {
    const auto c = straight_line(4, 0.1);
    const auto t = tangents(c);
    REQUIRE(t.size() == 3);
    for (const auto& v : t) {
        CHECK(v.x == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(v.y == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(v.z == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("tangents at a square corner are axis-aligned") {
    DiscreteCurve c;
    c.segment_length = 1.0;
    c.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    const auto t = tangents(c);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == Vec3{1, 0, 0});
    CHECK(t[1] == Vec3{0, 1, 0});
}

TEST_CASE("tangents match brute-force chord directions on a circle") {
    const auto c = circle_curve(100, 1.0);
    const auto t = tangents(c);
    REQUIRE(t.size() == 99);
    for (size_t i = 0; i + 1 < c.points.size(); ++i) {
        // Independent oracle: normalize the chord by hand.
        const double dx = c.points[i + 1].x - c.points[i].x;
        const double dy = c.points[i + 1].y - c.points[i].y;
        const double dz = c.points[i + 1].z - c.points[i].z;
        const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
        CHECK(t[i].x == doctest::Approx(dx / len).epsilon(1e-12));
        CHECK(t[i].y == doctest::Approx(dy / len).epsilon(1e-12));
        CHECK(t[i].z == doctest::Approx(dz / len).epsilon(1e-12));
    }
}

TEST_CASE("coincident points raise a degenerate-segment error") {
    DiscreteCurve c;
    c.segment_length = 0.1;
    c.points = {{0, 0, 0}, {0.1, 0, 0}, {0.1, 0, 0}, {0.2, 0, 0}};
    CHECK_THROWS_AS(tangents(c), dlo::GeometryError);
}

TEST_CASE("curvature angles: parallel, perpendicular, polygon oracle") {
    const std::vector<Vec3> parallel = {{1, 0, 0}, {1, 0, 0}};
    CHECK(curvature_angles(parallel)[0] == doctest::Approx(0.0).epsilon(1e-15));

    const std::vector<Vec3> perp = {{1, 0, 0}, {0, 1, 0}};
    CHECK(curvature_angles(perp, Vec3{0, 0, 1})[0] == doctest::Approx(kPi / 2));
    CHECK(curvature_angles(perp, Vec3{0, 0, -1})[0] == doctest::Approx(-kPi / 2));

    // Regular 100-gon: every exterior angle is 2*pi/100. Brute-force oracle:
    // the angle from acos of the dot product of hand-normalized chords.
    const auto c = circle_curve(100, 1.0);
    const auto t = tangents(c);
    const auto th = curvature_angles(t, Vec3{0, 0, 1});
    REQUIRE(th.size() == 98);
    for (size_t i = 0; i + 1 < t.size(); ++i) {
        const double dot = t[i].dot(t[i + 1]);
        const double oracle = std::acos(std::min(1.0, std::max(-1.0, dot)));
        CHECK(th[i] == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(th[i] == doctest::Approx(2.0 * kPi / 100).epsilon(1e-12));
    }
}

TEST_CASE("straight rod has exactly zero curvature") {
    const auto c = straight_line(30, 0.01);
    for (double k : discrete_curvature(c)) CHECK(k == 0.0);
}

TEST_CASE("circle curvature matches the closed-form chord oracle") {
    // 100 points on a unit circle: kappa = tan(pi/100)/sin(pi/100) = 1/cos(pi/100).
    const auto c = circle_curve(100, 1.0);
    const auto k = discrete_curvature(c);
    REQUIRE(k.size() == 98);
    const double expected = 1.0 / std::cos(kPi / 100.0);
    for (double v : k) CHECK(std::abs(v - expected) < 1e-9);
}

TEST_CASE("right-angle elbow with l=0.1 gives curvature 20") {
    DiscreteCurve c;
    c.segment_length = 0.1;
    c.points = {{0, 0, 0}, {0.1, 0, 0}, {0.1, 0.1, 0}};
    const auto k = discrete_curvature(c);
    REQUIRE(k.size() == 1);
    CHECK(k[0] == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("binormals: planar, collinear, helix oracle") {
    const auto planar = circle_curve(50, 0.3);
    const auto tb = tangents(planar);
    for (const auto& b : binormals(tb)) {
        CHECK(b.x == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(b.y == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(b.z == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto line = straight_line(10, 0.01);
    for (const auto& b : binormals(tangents(line))) CHECK(b.norm2() == 0.0);

    const auto hx = helix_curve(80, 0.05, 0.01, 0.15);
    const auto th = tangents(hx);
    const auto bs = binormals(th);
    for (size_t i = 0; i + 1 < th.size(); ++i) {
        // Independent cross-product oracle.
        const Vec3 cr = {th[i].y * th[i + 1].z - th[i].z * th[i + 1].y,
                         th[i].z * th[i + 1].x - th[i].x * th[i + 1].z,
                         th[i].x * th[i + 1].y - th[i].y * th[i + 1].x};
        const double n = std::sqrt(cr.dot(cr));
        CHECK(bs[i].x == doctest::Approx(cr.x / n).epsilon(1e-10));
        CHECK(bs[i].y == doctest::Approx(cr.y / n).epsilon(1e-10));
        CHECK(bs[i].z == doctest::Approx(cr.z / n).epsilon(1e-10));
    }
}

TEST_CASE("planar curves have exactly zero torsion, including S-curves") {
    const auto circ = circle_curve(60, 0.8);
    for (double t : discrete_torsion(circ)) CHECK(std::abs(t) <= 1e-12);

    // S-curve: sine wave in the xy-plane; has an inflection where the raw
    // binormal flips sign.
    DiscreteCurve s;
    const int n = 60;
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        const double x = i * 0.01;
        pts.push_back({x, 0.004 * std::sin(2.0 * kPi * x / ((n - 1) * 0.01)), 0.0});
    }
    s.points = pts;
    s.segment_length = (pts[1] - pts[0]).norm();
    for (double t : discrete_torsion(s)) CHECK(std::abs(t) <= 1e-12);

    const auto line = straight_line(12, 0.01);
    for (double t : discrete_torsion(line)) CHECK(t == 0.0);
}

TEST_CASE("helix torsion matches the analytic value within 1%") {
    // tau = h / (r^2 + h^2) = 2.0 for r = 0.05, h = (1 - sqrt(1 - 16 r^2))/4.
    const double r = 0.05;
    const double h = (1.0 - std::sqrt(1.0 - 16.0 * r * r)) / 4.0;
    const double tau_analytic = h / (r * r + h * h);
    REQUIRE(tau_analytic == doctest::Approx(2.0).epsilon(1e-12));

    const int n = 200;
    const double dt = 4.0 * kPi / (n - 1); // two turns
    const auto hx = helix_curve(n, r, h, dt);
    const auto tau = discrete_torsion(hx);
    REQUIRE(tau.size() == static_cast<size_t>(n - 3));
    double mean = 0.0;
    for (double t : tau) mean += t;
    mean /= static_cast<double>(tau.size());
    CHECK(std::abs(mean - 2.0) / 2.0 < 0.01);
}

TEST_CASE("euclidean distance: trivial and brute-force cases") {
    const auto a = straight_line(100, 0.001);
    auto b = a;
    CHECK(euclidean_distance(a, b) == 0.0);

    b.points[37].x += 0.001;
    CHECK(euclidean_distance(a, b) == doctest::Approx(0.001).epsilon(1e-12));

    dlo::Rng rng(42);
    DiscreteCurve r1, r2;
    r1.segment_length = r2.segment_length = 1.0;
    for (int i = 0; i < 100; ++i) {
        r1.points.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        r2.points.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    }
    // Brute-force sum of squares.
    double acc = 0.0;
    for (int i = 0; i < 100; ++i) {
        acc += (r1.points[i].x - r2.points[i].x) * (r1.points[i].x - r2.points[i].x);
        acc += (r1.points[i].y - r2.points[i].y) * (r1.points[i].y - r2.points[i].y);
        acc += (r1.points[i].z - r2.points[i].z) * (r1.points[i].z - r2.points[i].z);
    }
    CHECK(euclidean_distance(r1, r2) == doctest::Approx(std::sqrt(acc)).epsilon(1e-13));

    DiscreteCurve shorter = r1;
    shorter.points.pop_back();
    CHECK_THROWS_AS(euclidean_distance(r1, shorter), dlo::DimensionError);
}

TEST_CASE("feature distance: trivial, uniform, random oracle") {
    ShapeFeatures a, b;
    a.curvature.assign(98, 0.0);
    b.curvature.assign(98, 1.0);
    a.torsion.assign(97, 0.0);
    b.torsion.assign(97, 0.0);
    CHECK(feature_distance(a, a, true) == 0.0);
    CHECK(feature_distance(a, b, false) == doctest::Approx(std::sqrt(98.0)).epsilon(1e-12));

    dlo::Rng rng(7);
    ShapeFeatures x, y;
    for (int i = 0; i < 41; ++i) {
        x.curvature.push_back(rng.normal());
        y.curvature.push_back(rng.normal());
    }
    for (int i = 0; i < 40; ++i) {
        x.torsion.push_back(rng.normal());
        y.torsion.push_back(rng.normal());
    }
    double ck = 0.0, ct = 0.0;
    for (int i = 0; i < 41; ++i) ck += (x.curvature[i] - y.curvature[i]) * (x.curvature[i] - y.curvature[i]);
    for (int i = 0; i < 40; ++i) ct += (x.torsion[i] - y.torsion[i]) * (x.torsion[i] - y.torsion[i]);
    CHECK(feature_distance(x, y, false) == doctest::Approx(std::sqrt(ck)).epsilon(1e-13));
    CHECK(feature_distance(x, y, true) == doctest::Approx(std::sqrt(ck) + std::sqrt(ct)).epsilon(1e-13));

    ShapeFeatures bad = x;
    bad.curvature.pop_back();
    CHECK_THROWS_AS(feature_distance(x, bad, false), dlo::DimensionError);
}

TEST_CASE("rigid motions leave |kappa| and |tau| unchanged") {
    dlo::Rng rng(123);
    const auto hx = helix_curve(60, 0.04, 0.008, 0.2);
    const auto k0 = discrete_curvature(hx);
    const auto t0 = discrete_torsion(hx);

    for (int trial = 0; trial < 5; ++trial) {
        const Vec3 axis = Vec3{rng.normal(), rng.normal(), rng.normal()}.normalized();
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        const Vec3 shift{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        DiscreteCurve moved;
        moved.segment_length = hx.segment_length;
        for (const auto& p : hx.points) moved.points.push_back(rotate(p, axis, ang) + shift);

        const auto k1 = discrete_curvature(moved);
        const auto t1 = discrete_torsion(moved);
        for (size_t i = 0; i < k0.size(); ++i)
            CHECK(std::abs(std::abs(k1[i]) - std::abs(k0[i])) <= 1e-9 * std::max(1.0, std::abs(k0[i])));
        for (size_t i = 0; i < t0.size(); ++i)
            CHECK(std::abs(std::abs(t1[i]) - std::abs(t0[i])) <= 1e-9 * std::max(1.0, std::abs(t0[i])));
    }
}

TEST_CASE("curvature error decays second order on circles") {
    // Halving the central angle must cut max |kappa - 1/R| by >= 3.9.
    const double radius = 0.5;
    double prev_err = -1.0;
    for (int n : {50, 100, 200}) {
        const auto c = circle_curve(n, radius);
        double err = 0.0;
        for (double k : discrete_curvature(c)) err = std::max(err, std::abs(k - 1.0 / radius));
        if (prev_err > 0.0) CHECK(prev_err / err >= 3.9);
        prev_err = err;
    }
}

TEST_CASE("index counts: N points -> N-1, N-2, N-2, N-3") {
    for (int n : {4, 7, 23, 101}) {
        const auto hx = helix_curve(n, 0.05, 0.01, 0.11);
        const auto t = tangents(hx);
        CHECK(static_cast<int>(t.size()) == n - 1);
        CHECK(static_cast<int>(curvature_angles(t).size()) == n - 2);
        CHECK(static_cast<int>(discrete_curvature(hx).size()) == n - 2);
        CHECK(static_cast<int>(binormals(t).size()) == n - 2);
        CHECK(static_cast<int>(discrete_torsion(hx).size()) == n - 3);
    }
}

TEST_CASE("validate_uniform accepts analytic curves and rejects ragged ones") {
    auto c = circle_curve(100, 1.0);
    CHECK_NOTHROW(validate_uniform(c, 1e-6));
    c.points[50].x += 1e-4;
    CHECK_THROWS_AS(validate_uniform(c, 1e-6), dlo::GeometryError);

    DiscreteCurve tiny = straight_line(3, 0.1);
    CHECK_THROWS_AS(validate_uniform(tiny, 1e-6), dlo::ConfigError);
}

TEST_CASE("mirrored planar shapes get opposite signed curvature") {
    DiscreteCurve c;
    c.segment_length = 0.1;
    c.points = {{0, 0, 0}, {0.1, 0, 0}, {0.1941, 0.0342, 0}, {0.2803, 0.0850, 0}};
    // Re-normalize to uniform segments (points chosen close already).
    DiscreteCurve m = c;
    for (auto& p : m.points) p.y = -p.y;
    const auto kc = discrete_curvature(c, Vec3{0, 0, 1});
    const auto km = discrete_curvature(m, Vec3{0, 0, 1});
    for (size_t i = 0; i < kc.size(); ++i) {
        CHECK(kc[i] == doctest::Approx(-km[i]).epsilon(1e-12));
        CHECK(std::abs(kc[i]) > 0.1); // actually bent
    }
}
