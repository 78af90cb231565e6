#include "lgp/grid.hpp"

#include <algorithm>

namespace lgp {

GridSpec GridSpec::covering(const ConvexDomain& domain, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one cell");
  const Box box = domain.bounding_box();
  const double span = std::max(box.max.x - box.min.x, box.max.y - box.min.y);
  const double pad = 1e-9 * span;
  GridSpec g;
  g.h = (span + 2.0 * pad) / static_cast<double>(n);
  const Vec2 mid = 0.5 * (box.min + box.max);
  g.origin = mid - Vec2{0.5 * g.h * static_cast<double>(n), 0.5 * g.h * static_cast<double>(n)};
  g.nx = n;
  g.ny = n;
  return g;
}

}  // namespace lgp
