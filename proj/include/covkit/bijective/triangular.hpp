#pragma once

// Triangular (Knothe-Rosenblatt) maps: x_j = g_j(z_j; x_{1:j-1}) with each
// coordinate map monotone increasing in z_j. The Jacobian is triangular and
// its determinant is the product of the diagonal derivatives.

#include <functional>
#include <utility>
#include <vector>

#include "covkit/core/dual.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit::bijective {

// A per-coordinate map (z_j, x_{1:j-1}) -> x_j usable with doubles and duals.
class CoordMap {
 public:
  CoordMap() = default;
  template <class F>
  CoordMap(F f)  // NOLINT: intentional converting constructor
      : f64_([f](double z, const std::vector<double>& prev) { return f(z, prev); }),
        fd_([f](const Dual& z, const DualVec& prev) { return f(z, prev); }) {}

  double operator()(double z, const std::vector<double>& prev) const {
    return f64_(z, prev);
  }
  Dual operator()(const Dual& z, const DualVec& prev) const { return fd_(z, prev); }

 private:
  std::function<double(double, const std::vector<double>&)> f64_;
  std::function<Dual(const Dual&, const DualVec&)> fd_;
};

struct TriangularMap {
  std::vector<CoordMap> coords;

  int dim() const { return static_cast<int>(coords.size()); }

  SmoothMap as_map() const {
    const auto cs = coords;
    const int d = dim();
    return make_map(d, d, [cs](const auto& z) {
      using S = std::decay_t<decltype(z[0])>;
      std::vector<S> x;
      x.reserve(z.size());
      for (std::size_t j = 0; j < z.size(); ++j) x.push_back(cs[j](z[j], x));
      return x;
    });
  }
};

// Sequential evaluation plus the triangular log-determinant; a non-positive
// diagonal derivative flags a non-monotone coordinate map.
inline std::pair<Vec, double> knothe_rosenblatt_apply(const TriangularMap& map,
                                                      const Vec& z) {
  require_dim(z, map.dim(), "knothe_rosenblatt_apply");
  const int d = map.dim();
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(d));
  double logdet = 0.0;
  for (int j = 0; j < d; ++j) {
    // Diagonal derivative from a single dual seeded on z_j.
    DualVec prev;
    prev.reserve(x.size());
    for (double v : x) prev.emplace_back(v);
    const Dual out = map.coords[static_cast<std::size_t>(j)](
        Dual::seeded(z(j), 1, 0), prev);
    const double deriv = out.d.size() ? out.d(0) : 0.0;
    if (!(deriv > 0.0))
      throw ModelError("knothe_rosenblatt_apply: coordinate " + std::to_string(j) +
                       " is non-monotone (diagonal derivative " +
                       std::to_string(deriv) + ")");
    logdet += std::log(deriv);
    x.push_back(out.v);
  }
  return {detail::from_std(x), logdet};
}

}  // namespace covkit::bijective
