#pragma once

// Type-erased smooth maps R^n -> R^m. A map is registered once as a generic
// callable over std::vector<S> and stored with both a double and a dual-number
// instantiation; the latter drives the forward-mode Jacobian engine.

#include <functional>
#include <utility>
#include <vector>

#include "covkit/core/dual.hpp"
#include "covkit/core/types.hpp"

namespace covkit {

namespace detail {
template <class S>
std::vector<S> to_std(const Vec& x) {
  std::vector<S> out(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = x(i);
  return out;
}
inline Vec from_std(const std::vector<double>& x) {
  Vec out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(i)) = x[i];
  return out;
}
}  // namespace detail

class SmoothMap {
 public:
  SmoothMap() = default;

  template <class F>
  SmoothMap(int in_dim, int out_dim, F f)
      : in_dim_(in_dim),
        out_dim_(out_dim),
        f64_([f](const std::vector<double>& x) { return f(x); }),
        fdual_([f](const DualVec& x) { return f(x); }) {}

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  bool valid() const { return static_cast<bool>(f64_); }

  Vec operator()(const Vec& x) const {
    require_dim(x, in_dim_, "SmoothMap input");
    return detail::from_std(f64_(detail::to_std<double>(x)));
  }

  std::vector<double> eval(const std::vector<double>& x) const { return f64_(x); }
  DualVec eval(const DualVec& x) const { return fdual_(x); }

  // Jacobian by one dual-number sweep with all inputs seeded.
  Mat jacobian_dual(const Vec& x) const {
    require_dim(x, in_dim_, "SmoothMap input");
    const int n = in_dim_;
    DualVec in(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      in[static_cast<std::size_t>(i)] = Dual::seeded(x(i), n, i);
    DualVec out = fdual_(in);
    Mat J = Mat::Zero(static_cast<Eigen::Index>(out.size()), n);
    for (std::size_t r = 0; r < out.size(); ++r) {
      if (out[r].d.size() != 0) J.row(static_cast<Eigen::Index>(r)) = out[r].d;
    }
    return J;
  }

  SmoothMap compose_after(const SmoothMap& inner) const {
    const SmoothMap outer = *this;
    return SmoothMap(inner.in_dim(), out_dim_, [outer, inner](const auto& x) {
      return outer.eval(inner.eval(x));
    });
  }

 private:
  // Dispatch helper so the composing lambda can stay generic.
  int in_dim_ = 0;
  int out_dim_ = 0;
  std::function<std::vector<double>(const std::vector<double>&)> f64_;
  std::function<DualVec(const DualVec&)> fdual_;
};

template <class F>
SmoothMap make_map(int in_dim, int out_dim, F f) {
  return SmoothMap(in_dim, out_dim, std::move(f));
}

inline SmoothMap identity_map(int dim) {
  return make_map(dim, dim, [](const auto& x) { return x; });
}

// Linear map x -> A x (+ b) registered through the generic interface so it is
// differentiable by the dual engine like any other map.
inline SmoothMap linear_map(const Mat& A, const Vec& b = Vec()) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  std::vector<double> a(static_cast<std::size_t>(n * m));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(r * n + c)] = A(r, c);
  std::vector<double> off(static_cast<std::size_t>(m), 0.0);
  if (b.size() != 0)
    for (int r = 0; r < m; ++r) off[static_cast<std::size_t>(r)] = b(r);
  return make_map(n, m, [a, off, n, m](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> y(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      S acc = off[static_cast<std::size_t>(r)];
      for (int c = 0; c < n; ++c)
        acc += a[static_cast<std::size_t>(r * n + c)] * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
  });
}

}  // namespace covkit
