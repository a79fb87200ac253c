#include "dlo/geometry.hpp"

#include <cmath>
#include <string>

#include "dlo/errors.hpp"

namespace dlo::geom {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr double kCoincidentTol = 1e-12;   // m; below this a segment is degenerate
constexpr double kBinormalTol = 1e-9;      // |T_i x T_{i+1}| below this: undefined plane

// Angle between unit vectors via atan2(||u x v||, u . v); robust near 0 and pi.
double angle_between(const Vec3& u, const Vec3& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

double clamp_angle(double theta, long& clamp_count) {
    if (theta > kHalfPi) {
        ++clamp_count;
        return kHalfPi;
    }
    if (theta < -kHalfPi) {
        ++clamp_count;
        return -kHalfPi;
    }
    return theta;
}

} // namespace

void validate_uniform(const DiscreteCurve& curve, double rel_tol) {
    const int n = curve.size();
    if (n < 4)
        throw ConfigError("curve needs at least 4 points, got " + std::to_string(n));
    if (!(curve.segment_length > 0.0))
        throw ConfigError("curve segment_length must be positive");
    for (int i = 0; i + 1 < n; ++i) {
        const double d = (curve.points[i + 1] - curve.points[i]).norm();
        if (std::abs(d - curve.segment_length) > rel_tol * curve.segment_length)
            throw GeometryError("segment " + std::to_string(i) + " length " + std::to_string(d) +
                                " deviates from nominal " + std::to_string(curve.segment_length));
    }
}

std::vector<Vec3> tangents(const DiscreteCurve& curve) {
    const int n = curve.size();
    if (n < 2)
        throw ConfigError("tangents need at least 2 points");
    std::vector<Vec3> out;
    out.reserve(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const Vec3 d = curve.points[i + 1] - curve.points[i];
        const double len = d.norm();
        if (len < kCoincidentTol)
            throw GeometryError("degenerate segment at index " + std::to_string(i) +
                                " (consecutive points coincide)");
        out.push_back(d / len);
    }
    return out;
}

std::vector<double> curvature_angles(const std::vector<Vec3>& tangent_dirs,
                                     const std::optional<Vec3>& reference_normal,
                                     FeatureDiagnostics* diag) {
    if (tangent_dirs.size() < 2)
        throw ConfigError("curvature_angles need at least 2 tangents");
    std::vector<double> out;
    out.reserve(tangent_dirs.size() - 1);
    long clamps = 0;
    for (size_t i = 0; i + 1 < tangent_dirs.size(); ++i) {
        double theta = angle_between(tangent_dirs[i], tangent_dirs[i + 1]);
        if (reference_normal) {
            const double side = tangent_dirs[i].cross(tangent_dirs[i + 1]).dot(*reference_normal);
            if (side < 0.0) theta = -theta;
        }
        out.push_back(clamp_angle(theta, clamps));
    }
    if (diag) diag->curvature_clamps += clamps;
    return out;
}

std::vector<double> discrete_curvature(const DiscreteCurve& curve,
                                       const std::optional<Vec3>& reference_normal,
                                       FeatureDiagnostics* diag) {
    const auto dirs = tangents(curve);
    const double l = curve.segment_length;
    std::vector<double> out;
    out.reserve(dirs.size() - 1);
    long clamps = 0;
    for (size_t i = 0; i + 1 < dirs.size(); ++i) {
        const Vec3 crossv = dirs[i].cross(dirs[i + 1]);
        const double s = crossv.norm();
        const double c = dirs[i].dot(dirs[i + 1]);
        if (c < 0.0 && s < 1e-9)
            throw GeometryError("reversed segment at joint " + std::to_string(i) +
                                " (turning angle ~ pi)");
        double theta = std::atan2(s, c);
        if (reference_normal && crossv.dot(*reference_normal) < 0.0) theta = -theta;
        theta = clamp_angle(theta, clamps);
        out.push_back(2.0 / l * std::tan(0.5 * theta));
    }
    if (diag) diag->curvature_clamps += clamps;
    return out;
}

std::vector<Vec3> binormals(const std::vector<Vec3>& tangent_dirs) {
    if (tangent_dirs.size() < 2)
        throw ConfigError("binormals need at least 2 tangents");
    std::vector<Vec3> out;
    out.reserve(tangent_dirs.size() - 1);
    Vec3 prev{};          // zero vector = still undefined
    bool have_prev = false;
    for (size_t i = 0; i + 1 < tangent_dirs.size(); ++i) {
        const Vec3 crossv = tangent_dirs[i].cross(tangent_dirs[i + 1]);
        const double n = crossv.norm();
        if (n >= kBinormalTol) {
            prev = crossv / n;
            have_prev = true;
            out.push_back(prev);
        } else {
            // Straight section: carry the last defined plane forward.
            out.push_back(have_prev ? prev : Vec3{});
        }
    }
    return out;
}

std::vector<double> discrete_torsion(const DiscreteCurve& curve, FeatureDiagnostics* diag) {
    const auto dirs = tangents(curve);
    auto bins = binormals(dirs);
    const double l = curve.segment_length;
    std::vector<double> out;
    out.reserve(bins.size() - 1);
    long clamps = 0;

    // The torsion angle measures the rotation of the osculating plane, which is
    // orientation-free; flip each binormal to keep B_{i+1} . B_i >= 0 so that a
    // planar inflection (antiparallel raw binormals) reads as zero twist.
    for (size_t i = 0; i + 1 < bins.size(); ++i) {
        if (bins[i + 1].dot(bins[i]) < 0.0) bins[i + 1] = -bins[i + 1];
    }

    for (size_t i = 0; i + 1 < bins.size(); ++i) {
        const Vec3& b0 = bins[i];
        const Vec3& b1 = bins[i + 1];
        if (b0.norm2() == 0.0 || b1.norm2() == 0.0) {
            out.push_back(0.0);
            continue;
        }
        double phi = angle_between(b0, b1);
        // T_{i+1} is the tangent shared by the two osculating planes.
        const double side = b0.cross(b1).dot(dirs[i + 1]);
        if (side < 0.0) phi = -phi;
        phi = clamp_angle(phi, clamps);
        out.push_back(2.0 / l * std::tan(0.5 * phi));
    }
    if (diag) diag->torsion_clamps += clamps;
    return out;
}

ShapeFeatures shape_features(const DiscreteCurve& curve,
                             const std::optional<Vec3>& reference_normal,
                             FeatureDiagnostics* diag) {
    ShapeFeatures f;
    f.curvature = discrete_curvature(curve, reference_normal, diag);
    f.torsion = discrete_torsion(curve, diag);
    return f;
}

double euclidean_distance(const DiscreteCurve& a, const DiscreteCurve& b) {
    if (a.size() != b.size())
        throw DimensionError("curve size mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double acc = 0.0;
    for (int i = 0; i < a.size(); ++i) acc += (a.points[i] - b.points[i]).norm2();
    return std::sqrt(acc);
}

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("feature length mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double feature_distance(const ShapeFeatures& a, const ShapeFeatures& b, bool include_torsion) {
    double d = l2_distance(a.curvature, b.curvature);
    if (include_torsion) d += l2_distance(a.torsion, b.torsion);
    return d;
}

} // namespace dlo::geom
