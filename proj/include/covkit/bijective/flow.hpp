#pragma once

// Finite-composition bijective flows. A FlowMap is an ordered list of layers,
// each carrying its forward map (code -> data), its inverse, and a closed-form
// log|det| of the forward Jacobian; the whole-map determinant is the sum of
// the layer terms.

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "covkit/core/jacobian.hpp"
#include "covkit/core/linalg.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit::bijective {

struct FlowLayer {
  std::string kind;
  SmoothMap fwd;   // z -> x
  SmoothMap inv;   // x -> z
  std::function<double(const Vec&)> fwd_logdet;  // log|det d fwd / dz| at z
  bool unit_det = false;
};

class FlowMap {
 public:
  FlowMap() = default;
  explicit FlowMap(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::vector<FlowLayer>& layers() const { return layers_; }

  FlowMap& push(FlowLayer layer) {
    if (layer.fwd.in_dim() != dim_ || layer.fwd.out_dim() != dim_)
      throw DimensionError("FlowMap: layer dimension mismatch");
    layers_.push_back(std::move(layer));
    return *this;
  }

  Vec forward(const Vec& z) const {
    Vec v = z;
    for (const auto& l : layers_) v = l.fwd(v);
    return v;
  }

  Vec inverse(const Vec& x) const {
    Vec v = x;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) v = it->inv(v);
    return v;
  }

  // Sum of per-layer log|det| along the forward pass started at z.
  double forward_logdet(const Vec& z) const {
    Vec v = z;
    double s = 0.0;
    for (const auto& l : layers_) {
      s += l.fwd_logdet(v);
      v = l.fwd(v);
    }
    return s;
  }

  bool all_unit_det() const {
    for (const auto& l : layers_)
      if (!l.unit_det) return false;
    return true;
  }

  SmoothMap as_forward_map() const {
    SmoothMap m = identity_map(dim_);
    for (const auto& l : layers_) m = l.fwd.compose_after(m);
    return m;
  }

  SmoothMap as_inverse_map() const {
    SmoothMap m = identity_map(dim_);
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      m = it->inv.compose_after(m);
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<FlowLayer> layers_;
};

// --- layer factories --------------------------------------------------------

inline FlowLayer scale_layer(const Vec& s) {
  const int d = static_cast<int>(s.size());
  double ld = 0.0;
  for (int i = 0; i < d; ++i) {
    if (s(i) == 0.0) throw ModelError("scale_layer: zero scale");
    ld += std::log(std::abs(s(i)));
  }
  std::vector<double> sv(s.data(), s.data() + d);
  FlowLayer l;
  l.kind = "scale";
  l.fwd = make_map(d, d, [sv](const auto& z) {
    auto x = z;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] * sv[i];
    return x;
  });
  l.inv = make_map(d, d, [sv](const auto& x) {
    auto z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] / sv[i];
    return z;
  });
  l.fwd_logdet = [ld](const Vec&) { return ld; };
  l.unit_det = std::abs(ld) < 1e-15;
  return l;
}

inline FlowLayer actnorm_layer(const Vec& s, const Vec& b) {
  const int d = static_cast<int>(s.size());
  double ld = 0.0;
  for (int i = 0; i < d; ++i) ld += std::log(std::abs(s(i)));
  std::vector<double> sv(s.data(), s.data() + d), bv(b.data(), b.data() + d);
  FlowLayer l;
  l.kind = "actnorm";
  l.fwd = make_map(d, d, [sv, bv](const auto& z) {
    auto x = z;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] * sv[i] + bv[i];
    return x;
  });
  l.inv = make_map(d, d, [sv, bv](const auto& x) {
    auto z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (x[i] - bv[i]) / sv[i];
    return z;
  });
  l.fwd_logdet = [ld](const Vec&) { return ld; };
  l.unit_det = std::abs(ld) < 1e-15;
  return l;
}

inline FlowLayer permutation_layer(const std::vector<int>& perm) {
  const int d = static_cast<int>(perm.size());
  std::vector<int> inv_perm(perm.size());
  for (int i = 0; i < d; ++i) inv_perm[static_cast<std::size_t>(perm[i])] = i;
  FlowLayer l;
  l.kind = "permutation";
  l.fwd = make_map(d, d, [perm](const auto& z) {
    auto x = z;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[static_cast<std::size_t>(perm[i])];
    return x;
  });
  l.inv = make_map(d, d, [inv_perm](const auto& x) {
    auto z = x;
    for (std::size_t i = 0; i < z.size(); ++i)
      z[i] = x[static_cast<std::size_t>(inv_perm[i])];
    return z;
  });
  l.fwd_logdet = [](const Vec&) { return 0.0; };
  l.unit_det = true;
  return l;
}

// General invertible linear layer x = A z + b; determinant precomputed.
inline FlowLayer linear_layer(const Mat& A, const Vec& b = Vec()) {
  const int d = static_cast<int>(A.rows());
  const double ld = logdet_lu(A);
  const Mat Ainv = A.inverse();
  const Vec off = b.size() ? b : Vec(Vec::Zero(d));
  FlowLayer l;
  l.kind = "linear";
  l.fwd = linear_map(A, off);
  l.inv = linear_map(Ainv, Vec(-Ainv * off));
  l.fwd_logdet = [ld](const Vec&) { return ld; };
  l.unit_det = std::abs(ld) < 1e-12;
  return l;
}

// Orthogonal layer; verifies Q^T Q = I at construction.
inline FlowLayer orthogonal_layer(const Mat& Q) {
  if ((Q.transpose() * Q - Mat::Identity(Q.rows(), Q.cols())).norm() > 1e-10)
    throw ModelError("orthogonal_layer: matrix is not orthogonal");
  FlowLayer l = linear_layer(Q);
  l.kind = "orthogonal";
  l.fwd_logdet = [](const Vec&) { return 0.0; };
  l.unit_det = true;
  return l;
}

inline FlowLayer rotation2d_layer(double theta) {
  FlowLayer l = orthogonal_layer(rotation2d(theta));
  l.kind = "rotation2d";
  return l;
}

// Affine coupling: passes dims [0, split) through and transforms the rest as
//   x_j = exp(h_j(z_head)) * z_j + w_j(z_head).
// The exponential keeps the scales positive; h and w are arbitrary smooth
// maps of the untouched head.
inline FlowLayer affine_coupling_layer(int dim, int split, SmoothMap log_scale,
                                       SmoothMap shift, bool volume_preserving = false) {
  if (log_scale.in_dim() != split || log_scale.out_dim() != dim - split ||
      shift.in_dim() != split || shift.out_dim() != dim - split)
    throw DimensionError("affine_coupling_layer: net dimensions inconsistent");
  FlowLayer l;
  l.kind = volume_preserving ? "gin_coupling" : "affine_coupling";
  const int tail = dim - split;
  auto head_of = [split](const auto& v) {
    using S = std::decay_t<decltype(v[0])>;
    return std::vector<S>(v.begin(), v.begin() + split);
  };
  auto centered = [volume_preserving, tail](auto h) {
    if (!volume_preserving) return h;
    using S = typename decltype(h)::value_type;
    S mean(0.0);
    for (const auto& v : h) mean += v;
    mean = mean / static_cast<double>(tail);
    for (auto& v : h) v -= mean;
    return h;
  };
  l.fwd = make_map(dim, dim, [=](const auto& z) {
    auto x = z;
    const auto head = head_of(z);
    const auto h = centered(log_scale.eval(head));
    const auto w = shift.eval(head);
    for (int j = 0; j < tail; ++j)
      x[static_cast<std::size_t>(split + j)] =
          exp(h[static_cast<std::size_t>(j)]) * z[static_cast<std::size_t>(split + j)] +
          w[static_cast<std::size_t>(j)];
    return x;
  });
  l.inv = make_map(dim, dim, [=](const auto& x) {
    auto z = x;
    const auto head = head_of(x);
    const auto h = centered(log_scale.eval(head));
    const auto w = shift.eval(head);
    for (int j = 0; j < tail; ++j)
      z[static_cast<std::size_t>(split + j)] =
          (x[static_cast<std::size_t>(split + j)] - w[static_cast<std::size_t>(j)]) *
          exp(-h[static_cast<std::size_t>(j)]);
    return z;
  });
  l.fwd_logdet = [=](const Vec& z) {
    std::vector<double> head(z.data(), z.data() + split);
    auto h = log_scale.eval(head);
    if (volume_preserving) {
      double mean = std::accumulate(h.begin(), h.end(), 0.0) / tail;
      for (auto& v : h) v -= mean;
    }
    return std::accumulate(h.begin(), h.end(), 0.0);
  };
  l.unit_det = volume_preserving;
  return l;
}

// Escape hatch for analytically known bijections (closed-form inverse and
// determinant), e.g. the annulus flow.
inline FlowLayer custom_layer(std::string kind, SmoothMap fwd, SmoothMap inv,
                              std::function<double(const Vec&)> fwd_logdet,
                              bool unit_det = false) {
  return FlowLayer{std::move(kind), std::move(fwd), std::move(inv),
                   std::move(fwd_logdet), unit_det};
}

}  // namespace covkit::bijective
