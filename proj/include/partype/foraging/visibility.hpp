#pragma once

// View cones of foraging agents. A cone is a circular sector with its apex at
// the centre of the viewer's cell, oriented along the viewer's heading. The
// certainty with which a cell is seen is the fraction of an 8x8 grid of sample
// points in that cell that lie inside the sector.

#include <cmath>
#include <numbers>
#include <vector>

#include "partype/foraging/world.hpp"

namespace partype::foraging {

inline constexpr double kVisibilityThreshold = 0.1;
inline constexpr int kCertaintySamples = 8;

struct ViewCone {
  double cx = 0.0, cy = 0.0;  // apex
  double dx = 0.0, dy = 1.0;  // unit heading
  double radius = 0.0;
  double half_angle = 0.0;

  // radius_fraction scales the grid diagonal; angle_fraction scales 2*pi.
  static ViewCone make(const ForagingState& s, Cell apex, Heading heading, double radius_fraction,
                       double angle_fraction) {
    ViewCone v;
    v.cx = apex.x + 0.5;
    v.cy = apex.y + 0.5;
    switch (heading) {
      case Heading::kNorth: v.dx = 0; v.dy = 1; break;
      case Heading::kEast: v.dx = 1; v.dy = 0; break;
      case Heading::kSouth: v.dx = 0; v.dy = -1; break;
      case Heading::kWest: v.dx = -1; v.dy = 0; break;
    }
    v.radius = radius_fraction * std::hypot(double(s.width), double(s.height));
    v.half_angle = angle_fraction * std::numbers::pi;
    return v;
  }

  bool contains(double px, double py) const {
    const double ux = px - cx, uy = py - cy;
    const double r2 = ux * ux + uy * uy;
    if (r2 > radius * radius) return false;
    if (half_angle >= std::numbers::pi) return true;
    const double r = std::sqrt(r2);
    if (r == 0.0) return true;
    return (ux * dx + uy * dy) / r >= std::cos(half_angle) - 1e-12;
  }

  double certainty(Cell c) const {
    int inside = 0;
    for (int i = 0; i < kCertaintySamples; ++i)
      for (int j = 0; j < kCertaintySamples; ++j) {
        const double px = c.x + (i + 0.5) / kCertaintySamples;
        const double py = c.y + (j + 0.5) / kCertaintySamples;
        if (contains(px, py)) ++inside;
      }
    return static_cast<double>(inside) / (kCertaintySamples * kCertaintySamples);
  }
};

struct Visible {
  std::vector<std::size_t> agents;  // indices into ForagingState::agents
  std::vector<std::size_t> items;   // indices into ForagingState::items (uncollected only)
};

// Entities seen with certainty >= 0.1 from `viewer`'s cell; the viewer's own
// cell is excluded.
inline Visible visible_from(const ForagingState& s, std::size_t viewer, double radius_fraction,
                            double angle_fraction) {
  const auto& me = s.agents.at(viewer);
  const auto cone = ViewCone::make(s, me.pos, me.heading, radius_fraction, angle_fraction);
  Visible out;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    if (i == viewer || s.agents[i].pos == me.pos) continue;
    if (cone.certainty(s.agents[i].pos) >= kVisibilityThreshold) out.agents.push_back(i);
  }
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (s.items[i].collected || s.items[i].pos == me.pos) continue;
    if (cone.certainty(s.items[i].pos) >= kVisibilityThreshold) out.items.push_back(i);
  }
  return out;
}

}  // namespace partype::foraging
