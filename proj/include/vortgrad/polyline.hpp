#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vortgrad/field.hpp"
#include "vortgrad/model_ode.hpp"

namespace vortgrad {

using Polyline = std::vector<Vec2>;

/// Velocity stored at increasing times, interpolated bilinearly (periodic)
/// in space and linearly in time.
class SnapshotSequence {
 public:
  void push(double t, VelocityField v);
  bool empty() const noexcept { return times_.empty(); }
  double t_front() const { return times_.front(); }
  double t_back() const { return times_.back(); }
  std::size_t size() const noexcept { return times_.size(); }
  /// Throws InvalidInput outside [t_front, t_back].
  Vec2 operator()(Vec2 p, double t) const;

 private:
  std::vector<double> times_;
  std::vector<VelocityField> fields_;
};

/// Periodic bilinear interpolation of a grid field at (x, y).
double bilinear(const ScalarField& f, double x, double y);

/// Something that moves points: a model-ODE variant plus perturbation, a
/// solver snapshot sequence, or any callable.
class VelocitySource {
 public:
  static VelocitySource model(CrossFieldVariant variant, Perturbation nu, AlephRegion region);
  static VelocitySource snapshots(SnapshotSequence seq);
  static VelocitySource function(std::function<Vec2(Vec2, double)> f);

  Vec2 operator()(Vec2 p, double t) const { return eval_(p, t); }
  /// Points outside the valid region are recorded as exits.
  bool valid(Vec2 p) const { return !region_ || region_->contains(p.x, p.y); }

 private:
  std::function<Vec2(Vec2, double)> eval_;
  std::optional<AlephRegion> region_;
};

struct AdvectOptions {
  double dt = 1e-3;
  /// Insert a vertex between neighbours whose images are farther apart than
  /// this; 0 disables refinement.
  double refine_threshold = 0.0;
  std::size_t max_vertices = 1 << 16;
  /// Closed polylines also refine the edge from the last vertex to the first.
  bool closed = false;
};

struct AdvectResult {
  /// Initial positions of every vertex, including inserted ones.
  Polyline initial;
  Polyline image;
  /// Per-vertex first time the vertex left the source's valid region.
  std::vector<std::optional<double>> exit_times;

  bool any_exit() const;
};

/// RK4 advection of every vertex from t = 0 to T. Inserted vertices are
/// midpoints of the initial polyline advected from t = 0, so refinement
/// never interpolates images.
AdvectResult advect_polyline(const VelocitySource& source, const Polyline& polyline, double T,
                             const AdvectOptions& opts = {});

double polyline_length(const Polyline& p);
/// Signed shoelace area of the closed polygon.
double polygon_area(const Polyline& p);
/// Minimum distance between open polyline a and closed polyline b
/// (vertex-to-segment both ways).
double polyline_distance(const Polyline& a, const Polyline& b);

Polyline circle_polyline(Vec2 center, double radius, std::size_t vertices);
/// Horizontal chord through the centre covering the middle half of the
/// diameter, offset vertically by `offset` (a fraction of the radius).
Polyline chord_polyline(Vec2 center, double radius, std::size_t vertices, double offset = 0.0);

struct StretchThickness {
  double L = 0.0;             ///< arclength of the segment image
  double d = 0.0;             ///< distance from segment image to circle image
  double area_product = 0.0;  ///< L * d
};

/// Throws InvalidInput on polylines with fewer than 2 (segment) or 3 (circle) vertices.
StretchThickness stretch_and_thickness(const Polyline& segment_image, const Polyline& circle_image);

}  // namespace vortgrad
