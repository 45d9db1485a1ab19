#include "perimeter/geometry.h"

#include <algorithm>
#include <limits>

namespace perimeter {
namespace {

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) {
  return -FloorDiv(-a, b);
}

}  // namespace

Hull ConvexHull(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Hull hull;
  if (points.size() < 3) {
    hull.vertices = std::move(points);
    return hull;
  }
  std::vector<Point> chain(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && Cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point& p = points[i];
    while (k >= lower && Cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  chain.resize(k - 1);  // last point repeats the first
  if (chain.size() < 3) {
    // All points collinear: the chain collapses to the two extremes.
    hull.vertices = {points.front(), points.back()};
    return hull;
  }
  hull.vertices = std::move(chain);
  hull.degenerate = false;
  return hull;
}

Hull ConvexHull(std::span<const Vertex> vertices) {
  std::vector<Point> points;
  points.reserve(vertices.size());
  for (const Vertex& v : vertices) points.push_back(v.point());
  return ConvexHull(std::move(points));
}

std::vector<RowSpan> EnclosedSpans(const Hull& hull, int width, int height) {
  std::vector<RowSpan> spans;
  if (hull.degenerate) return spans;
  const auto& ring = hull.vertices;
  std::int64_t min_y = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_y = std::numeric_limits<std::int64_t>::min();
  for (const Point& p : ring) {
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  // Pixel row y has its center at doubled ordinate 2y + 1.
  const int y_begin = static_cast<int>(std::max<std::int64_t>(0, CeilDiv(2 * min_y - 1, 2)));
  const int y_end = static_cast<int>(std::min<std::int64_t>(height, FloorDiv(2 * max_y - 1, 2) + 1));
  for (int y = y_begin; y < y_end; ++y) {
    const std::int64_t cy = 2 * static_cast<std::int64_t>(y) + 1;
    // Doubled center abscissa cx must satisfy every edge half-plane:
    //   (b - a) x (c - a) >= 0 with a, b doubled edge endpoints.
    std::int64_t lo = 1;
    std::int64_t hi = 2 * static_cast<std::int64_t>(width) - 1;
    bool empty = false;
    for (std::size_t i = 0; i < ring.size() && !empty; ++i) {
      const Point& a = ring[i];
      const Point& b = ring[(i + 1) % ring.size()];
      const std::int64_t dx = 2 * (b.x - a.x);
      const std::int64_t dy = 2 * (b.y - a.y);
      // dx * (cy - 2 a.y) - dy * (cx - 2 a.x) >= 0
      const std::int64_t k = dx * (cy - 2 * a.y) + dy * 2 * a.x;
      if (dy == 0) {
        empty = k < 0;
      } else if (dy > 0) {
        hi = std::min(hi, FloorDiv(k, dy));
      } else {
        lo = std::max(lo, CeilDiv(k, dy));
      }
    }
    if (empty || lo > hi) continue;
    // cx = 2x + 1 within [lo, hi].
    const std::int64_t x_begin = std::max<std::int64_t>(0, CeilDiv(lo - 1, 2));
    const std::int64_t x_last = std::min<std::int64_t>(width - 1, FloorDiv(hi - 1, 2));
    if (x_begin > x_last) continue;
    spans.push_back({y, static_cast<int>(x_begin), static_cast<int>(x_last + 1)});
  }
  return spans;
}

std::vector<Pixel> EnclosedPixels(const Hull& hull, int width, int height) {
  std::vector<Pixel> pixels;
  for (const RowSpan& span : EnclosedSpans(hull, width, height)) {
    for (int x = span.x_begin; x < span.x_end; ++x) pixels.push_back({x, span.y});
  }
  return pixels;
}

std::int64_t TwiceSignedArea(std::span<const Point> ring) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    sum += a.x * b.y - b.x * a.y;
  }
  return sum;
}

Rational HullArea(const Hull& hull) {
  if (hull.degenerate) return Rational(0);
  return Rational(TwiceSignedArea(hull.vertices), 2);
}

bool ContainsDoubled(const Hull& hull, const Point& doubled) {
  if (hull.degenerate) return false;
  const auto& ring = hull.vertices;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a{2 * ring[i].x, 2 * ring[i].y};
    const Point& next = ring[(i + 1) % ring.size()];
    const Point b{2 * next.x, 2 * next.y};
    if (Cross(a, b, doubled) < 0) return false;
  }
  return true;
}

}  // namespace perimeter
