#include "vortgrad/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>

#include "vortgrad/error.hpp"

namespace vortgrad {

void SnapshotSequence::push(double t, VelocityField v) {
  if (!times_.empty() && !(t > times_.back()))
    throw InvalidInput("snapshot times must increase");
  if (!fields_.empty() && !(v.u.grid() == fields_.front().u.grid()))
    throw InvalidInput("snapshots must share one grid");
  times_.push_back(t);
  fields_.push_back(std::move(v));
}

double bilinear(const ScalarField& f, double x, double y) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  const auto n = static_cast<long>(g.n());
  const double fx = x / h, fy = y / h;
  const double bx = std::floor(fx), by = std::floor(fy);
  const double wx = fx - bx, wy = fy - by;
  auto wrap = [n](double i) {
    long k = static_cast<long>(i) % n;
    return static_cast<std::size_t>(k < 0 ? k + n : k);
  };
  const std::size_t x0 = wrap(bx), x1 = wrap(bx + 1), y0 = wrap(by), y1 = wrap(by + 1);
  return (1 - wy) * ((1 - wx) * f(x0, y0) + wx * f(x1, y0)) +
         wy * ((1 - wx) * f(x0, y1) + wx * f(x1, y1));
}

Vec2 SnapshotSequence::operator()(Vec2 p, double t) const {
  if (times_.empty()) throw InvalidInput("empty snapshot sequence");
  const double span = times_.back() - times_.front();
  if (t < times_.front() - 1e-12 * std::max(1.0, span) ||
      t > times_.back() + 1e-12 * std::max(1.0, span))
    throw InvalidInput("time outside the stored snapshot range");
  auto at = [&](std::size_t i) {
    return Vec2{bilinear(fields_[i].u, p.x, p.y), bilinear(fields_[i].v, p.x, p.y)};
  };
  if (times_.size() == 1) return at(0);
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = std::clamp<std::size_t>(it - times_.begin(), 1, times_.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = std::clamp((t - times_[lo]) / (times_[hi] - times_[lo]), 0.0, 1.0);
  const Vec2 a = at(lo), b = at(hi);
  return {(1 - w) * a.x + w * b.x, (1 - w) * a.y + w * b.y};
}

VelocitySource VelocitySource::model(CrossFieldVariant variant, Perturbation nu,
                                     AlephRegion region) {
  VelocitySource s;
  s.eval_ = [variant, nu = std::move(nu)](Vec2 p, double t) {
    const Vec2 m = cross_velocity(p.x, p.y, variant);
    const Vec2 n = nu.value(p.x, p.y, t);
    return Vec2{m.x + n.x, m.y + n.y};
  };
  s.region_ = region;
  return s;
}

VelocitySource VelocitySource::snapshots(SnapshotSequence seq) {
  VelocitySource s;
  s.eval_ = [seq = std::move(seq)](Vec2 p, double t) { return seq(p, t); };
  return s;
}

VelocitySource VelocitySource::function(std::function<Vec2(Vec2, double)> f) {
  VelocitySource s;
  s.eval_ = std::move(f);
  return s;
}

bool AdvectResult::any_exit() const {
  return std::any_of(exit_times.begin(), exit_times.end(), [](const auto& e) { return e.has_value(); });
}

namespace {

struct Vertex {
  Vec2 start;
  Vec2 end;
  std::optional<double> exit;
};

Vertex advect_point(const VelocitySource& src, Vec2 p, double T, double dt) {
  Vertex v{p, p, std::nullopt};
  double t = 0.0;
  while (t < T) {
    double h = dt;
    bool last = false;
    if (t + h >= T) {
      h = T - t;
      last = true;
    }
    const Vec2 k1 = src(p, t);
    const Vec2 k2 = src({p.x + 0.5 * h * k1.x, p.y + 0.5 * h * k1.y}, t + 0.5 * h);
    const Vec2 k3 = src({p.x + 0.5 * h * k2.x, p.y + 0.5 * h * k2.y}, t + 0.5 * h);
    const Vec2 k4 = src({p.x + h * k3.x, p.y + h * k3.y}, t + h);
    p.x += h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    p.y += h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    t = last ? T : t + h;
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw BlowUp(t, "polyline vertex");
    if (!v.exit && !src.valid(p)) v.exit = t;
  }
  v.end = p;
  return v;
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

}  // namespace

AdvectResult advect_polyline(const VelocitySource& source, const Polyline& polyline, double T,
                             const AdvectOptions& opts) {
  if (!(T >= 0.0)) throw InvalidInput("advection time must be >= 0");
  if (!(opts.dt > 0.0)) throw InvalidInput("advection dt must be positive");
  std::list<Vertex> verts;
  for (const Vec2& p : polyline) {
    if (!source.valid(p)) throw InvalidInput("polyline vertex starts outside the valid region");
    verts.push_back(advect_point(source, p, T, opts.dt));
  }
  if (opts.refine_threshold > 0.0 && verts.size() >= 2) {
    bool changed = true;
    while (changed && verts.size() < opts.max_vertices) {
      changed = false;
      for (auto it = verts.begin(); it != verts.end() && verts.size() < opts.max_vertices;) {
        auto nx = std::next(it);
        const bool wrap = nx == verts.end();
        if (wrap && !opts.closed) break;
        if (wrap) nx = verts.begin();
        if (dist(it->end, nx->end) > opts.refine_threshold) {
          const Vec2 mid{0.5 * (it->start.x + nx->start.x), 0.5 * (it->start.y + nx->start.y)};
          verts.insert(std::next(it), advect_point(source, mid, T, opts.dt));
          changed = true;
          // Stay on `it` so the new left half is checked again.
        } else {
          ++it;
        }
      }
    }
  }
  AdvectResult out;
  for (const auto& v : verts) {
    out.initial.push_back(v.start);
    out.image.push_back(v.end);
    out.exit_times.push_back(v.exit);
  }
  return out;
}

double polyline_length(const Polyline& p) {
  double L = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) L += dist(p[i - 1], p[i]);
  return L;
}

double polygon_area(const Polyline& p) {
  if (p.size() < 3) return 0.0;
  // Shift by the first vertex to limit cancellation.
  const Vec2 o = p.front();
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    a += (u.x - o.x) * (v.y - o.y) - (v.x - o.x) * (u.y - o.y);
  }
  return 0.5 * a;
}

double polyline_distance(const Polyline& a, const Polyline& b) {
  double d = std::numeric_limits<double>::infinity();
  auto one_way = [&d](const Polyline& pts, const Polyline& segs, bool closed) {
    const std::size_t m = segs.size();
    for (const Vec2& p : pts) {
      if (m == 1) d = std::min(d, dist(p, segs[0]));
      for (std::size_t i = 0; i + 1 < m; ++i) d = std::min(d, point_segment(p, segs[i], segs[i + 1]));
      if (closed && m > 2) d = std::min(d, point_segment(p, segs[m - 1], segs[0]));
    }
  };
  one_way(a, b, true);
  one_way(b, a, false);
  return d;
}

Polyline circle_polyline(Vec2 c, double r, std::size_t n) {
  Polyline p;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    p.push_back({c.x + r * std::cos(th), c.y + r * std::sin(th)});
  }
  return p;
}

Polyline chord_polyline(Vec2 c, double r, std::size_t n, double offset) {
  if (n < 2) throw InvalidInput("chord needs >= 2 vertices");
  Polyline p;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = -0.5 + static_cast<double>(i) / static_cast<double>(n - 1);
    p.push_back({c.x + r * s, c.y + r * offset});
  }
  return p;
}

StretchThickness stretch_and_thickness(const Polyline& seg, const Polyline& circle) {
  if (seg.size() < 2 || circle.size() < 3) throw InvalidInput("degenerate polylines");
  StretchThickness st;
  st.L = polyline_length(seg);
  st.d = polyline_distance(seg, circle);
  st.area_product = st.L * st.d;
  return st;
}

}  // namespace vortgrad
