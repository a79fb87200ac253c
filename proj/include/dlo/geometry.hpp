#pragma once

#include <optional>
#include <vector>

#include "dlo/vec3.hpp"

namespace dlo::geom {

// Ordered centerline point cloud with (nominally) uniform segment length.
// All operations assume N >= 4 and near-uniform segments; uniformity is checked
// by validate_uniform() rather than on construction, because simulated curves
// carry up to ~1% strain while analytic curves are uniform to roundoff.
struct DiscreteCurve {
    std::vector<Vec3> points;
    double segment_length = 0.0;

    int size() const { return static_cast<int>(points.size()); }
};

// Signed curvature/torsion feature vectors: N points -> N-2 curvatures, N-3 torsions.
struct ShapeFeatures {
    std::vector<double> curvature; // 1/m
    std::vector<double> torsion;   // 1/m
};

// Counts of angle clamps (|theta| or |phi| > pi/2) applied during feature
// extraction; callers that care pass a struct and inspect it afterwards.
struct FeatureDiagnostics {
    long curvature_clamps = 0;
    long torsion_clamps = 0;
};

// Throws ConfigError if N < 4; GeometryError if any consecutive distance
// deviates from segment_length by more than rel_tol (or is near zero).
void validate_uniform(const DiscreteCurve& curve, double rel_tol = 1e-6);

// Unit chord directions, N-1 entries. Throws GeometryError on coincident
// consecutive points (distance < 1e-12 m).
std::vector<Vec3> tangents(const DiscreteCurve& curve);

// Signed exterior angles between consecutive tangents, length n_tangents-1.
// With a reference normal the sign is sign((T_i x T_{i+1}) . n); without one
// angles are unsigned. Angles beyond pi/2 are clamped (counted in diag).
std::vector<double> curvature_angles(const std::vector<Vec3>& tangent_dirs,
                                     const std::optional<Vec3>& reference_normal = std::nullopt,
                                     FeatureDiagnostics* diag = nullptr);

// kappa_i = (2/l) tan(theta_i/2); exactly zero for collinear triples.
// Throws GeometryError if some theta_i is a reversal (~pi).
std::vector<double> discrete_curvature(const DiscreteCurve& curve,
                                       const std::optional<Vec3>& reference_normal = std::nullopt,
                                       FeatureDiagnostics* diag = nullptr);

// Unit binormals T_i x T_{i+1}, N-2 entries. Near-collinear pairs inherit the
// previous valid binormal; leading undefined entries are zero vectors.
std::vector<Vec3> binormals(const std::vector<Vec3>& tangent_dirs);

// tau_i = (2/l) tan(phi_i/2) with phi_i the angle between consecutive
// osculating planes, signed by (B_i x B_{i+1}) . T_{i+1}. Zero wherever a
// binormal is undefined, and exactly zero for planar curves.
std::vector<double> discrete_torsion(const DiscreteCurve& curve, FeatureDiagnostics* diag = nullptr);

ShapeFeatures shape_features(const DiscreteCurve& curve,
                             const std::optional<Vec3>& reference_normal = std::nullopt,
                             FeatureDiagnostics* diag = nullptr);

// ||vec(a) - vec(b)||_2 over the flattened 3N coordinates. Throws DimensionError.
double euclidean_distance(const DiscreteCurve& a, const DiscreteCurve& b);

// L(kappa) = ||k_a - k_b||_2, plus ||t_a - t_b||_2 when include_torsion.
double feature_distance(const ShapeFeatures& a, const ShapeFeatures& b, bool include_torsion);

double l2_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace dlo::geom
