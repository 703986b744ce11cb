#include "helmrbf/quadrature.hpp"

namespace helmrbf {

Slice slice_at(const Domain& domain, double x2) {
  if (const auto* r = std::get_if<Rectangle>(&domain)) return {0.0, r->width};
  if (const auto* w = std::get_if<Waveguide>(&domain)) return {w->lower(x2), w->upper(x2)};
  return {0.0, 1.0};
}

}  // namespace helmrbf
