#ifndef PERIMETER_GEOMETRY_H_
#define PERIMETER_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "perimeter/rational.h"

namespace perimeter {

// Integer point on the pixel-corner lattice: (0, 0) is the top-left corner
// of pixel (0, 0) and (width, height) the bottom-right corner of the frame.
struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

// z-component of (a - o) x (b - o); positive for a counter-clockwise turn.
inline std::int64_t Cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Candidate intersection.
struct Vertex {
  int id = 0;
  int x = 0;
  int y = 0;

  Point point() const { return {x, y}; }
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Strictly convex ring, counter-clockwise in the (x, y) orientation with a
// positive shoelace sum, starting at the lexicographically smallest point.
// A degenerate hull (fewer than three non-collinear points) keeps its distinct
// extreme points (0, 1 or 2 of them) and encloses nothing.
struct Hull {
  std::vector<Point> vertices;
  bool degenerate = true;

  friend bool operator==(const Hull&, const Hull&) = default;
};

// Andrew's monotone chain. Duplicates and non-extreme points are dropped.
Hull ConvexHull(std::vector<Point> points);
Hull ConvexHull(std::span<const Vertex> vertices);

// Pixels of one row whose centers lie inside the hull: [x_begin, x_end).
struct RowSpan {
  int y = 0;
  int x_begin = 0;
  int x_end = 0;

  friend bool operator==(const RowSpan&, const RowSpan&) = default;
};

// Row spans of the pixels whose centers (x + 1/2, y + 1/2) lie inside or on
// the hull, clipped to the frame. Empty rows are omitted; degenerate hulls
// yield nothing.
std::vector<RowSpan> EnclosedSpans(const Hull& hull, int width, int height);

struct Pixel {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// Same membership as EnclosedSpans, listed in row-major order.
std::vector<Pixel> EnclosedPixels(const Hull& hull, int width, int height);

// Exact polygon area (an integer or a half-integer).
Rational HullArea(const Hull& hull);

// Twice the signed shoelace area.
std::int64_t TwiceSignedArea(std::span<const Point> ring);

// Inside-or-on test for the doubled point (2x, 2y) given in doubled
// coordinates.
bool ContainsDoubled(const Hull& hull, const Point& doubled);

}  // namespace perimeter

#endif  // PERIMETER_GEOMETRY_H_
