#pragma once

// Uniform cubic (order 4) tensor-product B-spline surfaces: knot vectors,
// control grids, basis/derivative evaluation and normals.
//
// Conventions used throughout the library:
//   - the u direction is indexed by m (0..M-1) and the v direction by n
//     (0..N-1); knots_u has M+4 entries, knots_v has N+4;
//   - the flattened control vector b has length 3*M*N with layout
//     b[3*(m*N + n) + c], c in {x,y,z} -- row-major over (m,n), the three
//     components of one control point contiguous;
//   - clamped-uniform knots span the domain [0,1], so the whole parameter
//     square is evaluable and boundary control points are interpolated.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bsurf {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
// One 3D point per row; row-major so that .data() is the flattened b layout.
template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;
// One (u,v) sample per row.
template <typename Scalar>
using UVSamples = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using ArrayXb = Eigen::Array<bool, Eigen::Dynamic, 1>;

inline constexpr int kOrder = 4;  // cubic pieces, C2 across knots

// Knot vector for an order-4 basis. For `count()` = M basis functions it
// stores M+4 non-decreasing knots; the evaluable domain is
// [knots[3], knots[M]].
template <typename Scalar>
class KnotVector {
public:
  KnotVector() = default;

  explicit KnotVector(VectorX<Scalar> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2 * kOrder)
      throw std::invalid_argument("KnotVector: need at least 8 knots (4 control points)");
    for (Index i = 0; i + 1 < knots_.size(); ++i)
      if (knots_[i] > knots_[i + 1])
        throw std::invalid_argument("KnotVector: knots must be non-decreasing");
    if (!(domain_min() < domain_max()))
      throw std::invalid_argument("KnotVector: empty evaluation domain");
  }

  // First/last knot repeated 4 times, interior uniform, domain [0,1].
  static KnotVector clamped_uniform(Index count) {
    if (count < kOrder)
      throw std::invalid_argument("KnotVector: need at least 4 control points");
    VectorX<Scalar> t(count + kOrder);
    const Index spans = count - kOrder + 1;  // M-3 non-empty spans
    for (Index i = 0; i < kOrder; ++i) {
      t[i] = Scalar(0);
      t[count + i] = Scalar(1);
    }
    for (Index j = 1; j < spans; ++j) t[kOrder - 1 + j] = Scalar(j) / Scalar(spans);
    return KnotVector(std::move(t));
  }

  Index count() const { return knots_.size() - kOrder; }  // number of basis functions
  const VectorX<Scalar>& knots() const { return knots_; }
  Scalar domain_min() const { return knots_[kOrder - 1]; }
  Scalar domain_max() const { return knots_[count()]; }
  bool in_domain(Scalar u) const { return u >= domain_min() && u <= domain_max(); }

  // Index s with knots[s] <= u < knots[s+1]; u == domain_max() belongs to the
  // last non-empty span so the right domain edge stays evaluable.
  Index find_span(Scalar u) const {
    if (!in_domain(u)) throw std::domain_error("KnotVector: parameter outside evaluation domain");
    Index lo = kOrder - 1, hi = count();
    if (u >= knots_[hi]) {
      Index s = hi - 1;
      while (knots_[s] == knots_[s + 1]) --s;
      return s;
    }
    while (hi - lo > 1) {
      const Index mid = (lo + hi) / 2;
      (u < knots_[mid] ? hi : lo) = mid;
    }
    return lo;
  }

private:
  VectorX<Scalar> knots_;
};

// Single basis function N_{i,order}(u) by the Cox-de Boor recursion; any
// term with a zero denominator contributes 0. `i` is 0-based and must be
// valid for the requested order. The order-1 base case is the half-open
// indicator, closed on the right at the domain end.
template <typename Scalar>
Scalar basis_eval(const KnotVector<Scalar>& kv, int order, Index i, Scalar u) {
  if (order < 1 || order > kOrder) throw std::invalid_argument("basis_eval: order must be in 1..4");
  const auto& t = kv.knots();
  if (i < 0 || i + order > t.size() - 1)
    throw std::invalid_argument("basis_eval: basis index out of range");
  if (!kv.in_domain(u)) throw std::domain_error("basis_eval: parameter outside evaluation domain");

  if (order == 1) {
    if (t[i] <= u && u < t[i + 1]) return Scalar(1);
    // closed right end: u == domain_max falls into the last non-empty span
    if (u == kv.domain_max() && t[i] < t[i + 1] && t[i + 1] == kv.domain_max()) return Scalar(1);
    return Scalar(0);
  }
  Scalar acc = Scalar(0);
  const Scalar d1 = t[i + order - 1] - t[i];
  if (d1 > Scalar(0)) acc += (u - t[i]) / d1 * basis_eval(kv, order - 1, i, u);
  const Scalar d2 = t[i + order] - t[i + 1];
  if (d2 > Scalar(0)) acc += (t[i + order] - u) / d2 * basis_eval(kv, order - 1, i + 1, u);
  return acc;
}

// Values and first/second derivatives of the four order-4 basis functions
// active on the span containing u. Entry k corresponds to basis index
// span-3+k. Derivatives use the standard identity
//   N'_{i,4} = 3 N_{i,3}/(t_{i+3}-t_i) - 3 N_{i+1,3}/(t_{i+4}-t_{i+1})
// recursed once more for the second derivative.
template <typename Scalar>
struct BasisSpan {
  Index span = 0;
  Eigen::Array<Scalar, 4, 1> value;
  Eigen::Array<Scalar, 4, 1> d1;
  Eigen::Array<Scalar, 4, 1> d2;
};

template <typename Scalar>
BasisSpan<Scalar> basis_span(const KnotVector<Scalar>& kv, Scalar u) {
  const Index s = kv.find_span(u);
  const auto& t = kv.knots();

  auto ratio = [](Scalar num, Scalar den) { return den > Scalar(0) ? num / den : Scalar(0); };

  // Triangular Cox-de Boor sweep on the active span: ordK[k] = N_{s-K+1+k,K}.
  Scalar ord2[2], ord3[3], ord4[4];
  {
    const Scalar n1 = Scalar(1);  // N_{s,1}
    ord2[0] = ratio(t[s + 1] - u, t[s + 1] - t[s]) * n1;      // N_{s-1,2}
    ord2[1] = ratio(u - t[s], t[s + 1] - t[s]) * n1;          // N_{s,2}
    ord3[0] = ratio(t[s + 1] - u, t[s + 1] - t[s - 1]) * ord2[0];
    ord3[1] = ratio(u - t[s - 1], t[s + 1] - t[s - 1]) * ord2[0] +
              ratio(t[s + 2] - u, t[s + 2] - t[s]) * ord2[1];
    ord3[2] = ratio(u - t[s], t[s + 2] - t[s]) * ord2[1];
    ord4[0] = ratio(t[s + 1] - u, t[s + 1] - t[s - 2]) * ord3[0];
    ord4[1] = ratio(u - t[s - 2], t[s + 1] - t[s - 2]) * ord3[0] +
              ratio(t[s + 2] - u, t[s + 2] - t[s - 1]) * ord3[1];
    ord4[2] = ratio(u - t[s - 1], t[s + 2] - t[s - 1]) * ord3[1] +
              ratio(t[s + 3] - u, t[s + 3] - t[s]) * ord3[2];
    ord4[3] = ratio(u - t[s], t[s + 3] - t[s]) * ord3[2];
  }

  // d/du of the order-3 actives, needed for the second derivative.
  Scalar d3[3];
  for (int k = 0; k < 3; ++k) {
    const Index i = s - 2 + k;
    const Scalar a = (k > 0) ? ord2[k - 1] : Scalar(0);   // N_{i,2}
    const Scalar b = (k < 2) ? ord2[k] : Scalar(0);       // N_{i+1,2}
    d3[k] = Scalar(2) * (ratio(a, t[i + 2] - t[i]) - ratio(b, t[i + 3] - t[i + 1]));
  }

  BasisSpan<Scalar> out;
  out.span = s;
  for (int k = 0; k < 4; ++k) {
    const Index i = s - 3 + k;
    const Scalar n3a = (k > 0) ? ord3[k - 1] : Scalar(0);  // N_{i,3}
    const Scalar n3b = (k < 3) ? ord3[k] : Scalar(0);      // N_{i+1,3}
    const Scalar d3a = (k > 0) ? d3[k - 1] : Scalar(0);
    const Scalar d3b = (k < 3) ? d3[k] : Scalar(0);
    out.value[k] = ord4[k];
    out.d1[k] = Scalar(3) * (ratio(n3a, t[i + 3] - t[i]) - ratio(n3b, t[i + 4] - t[i + 1]));
    out.d2[k] = Scalar(3) * (ratio(d3a, t[i + 3] - t[i]) - ratio(d3b, t[i + 4] - t[i + 1]));
  }
  return out;
}

// Greville abscissae: the parameter at which each control point has the
// most influence; B-splines reproduce affine functions of these exactly.
template <typename Scalar>
VectorX<Scalar> greville_abscissae(const KnotVector<Scalar>& kv) {
  const auto& t = kv.knots();
  VectorX<Scalar> g(kv.count());
  for (Index i = 0; i < kv.count(); ++i) g[i] = (t[i + 1] + t[i + 2] + t[i + 3]) / Scalar(3);
  return g;
}

// M x N grid of 3D control points. Storage is row-major (m outer, n inner)
// so that data() viewed as a flat vector is exactly the control vector b.
template <typename Scalar>
class ControlGrid {
public:
  ControlGrid() = default;
  ControlGrid(Index m, Index n) : m_(m), n_(n), pts_(Points3<Scalar>::Zero(m * n, 3)) {
    check_dims();
  }
  ControlGrid(Index m, Index n, Points3<Scalar> pts) : m_(m), n_(n), pts_(std::move(pts)) {
    check_dims();
    if (pts_.rows() != m_ * n_) throw std::invalid_argument("ControlGrid: point count != M*N");
  }

  Index rows() const { return m_; }  // M, the u direction
  Index cols() const { return n_; }  // N, the v direction
  Index size() const { return m_ * n_; }

  Eigen::Map<const VectorX<Scalar>> b() const {
    return Eigen::Map<const VectorX<Scalar>>(pts_.data(), 3 * m_ * n_);
  }
  void set_b(const Eigen::Ref<const VectorX<Scalar>>& b) {
    if (b.size() != 3 * m_ * n_) throw std::invalid_argument("ControlGrid: bad control vector size");
    Eigen::Map<VectorX<Scalar>>(pts_.data(), b.size()) = b;
  }

  const Points3<Scalar>& points() const { return pts_; }
  Points3<Scalar>& points() { return pts_; }

  Eigen::Matrix<Scalar, 3, 1> point(Index m, Index n) const {
    return pts_.row(index(m, n)).transpose();
  }
  void set_point(Index m, Index n, const Eigen::Matrix<Scalar, 3, 1>& p) {
    pts_.row(index(m, n)) = p.transpose();
  }
  Index index(Index m, Index n) const {
    if (m < 0 || m >= m_ || n < 0 || n >= n_)
      throw std::invalid_argument("ControlGrid: index out of range");
    return m * n_ + n;
  }

private:
  void check_dims() const {
    if (m_ < kOrder || n_ < kOrder)
      throw std::invalid_argument("ControlGrid: grid must be at least 4x4");
  }
  Index m_ = 0, n_ = 0;
  Points3<Scalar> pts_;
};

template <typename Scalar>
struct Surface {
  ControlGrid<Scalar> grid;
  KnotVector<Scalar> knots_u;
  KnotVector<Scalar> knots_v;

  Surface() = default;
  Surface(ControlGrid<Scalar> g, KnotVector<Scalar> ku, KnotVector<Scalar> kv)
      : grid(std::move(g)), knots_u(std::move(ku)), knots_v(std::move(kv)) {
    if (knots_u.count() != grid.rows() || knots_v.count() != grid.cols())
      throw std::invalid_argument("Surface: knot vector sizes do not match the control grid");
  }

  static Surface with_uniform_knots(ControlGrid<Scalar> g) {
    const Index m = g.rows(), n = g.cols();
    return Surface(std::move(g), KnotVector<Scalar>::clamped_uniform(m),
                   KnotVector<Scalar>::clamped_uniform(n));
  }

  Eigen::Map<const VectorX<Scalar>> b() const { return grid.b(); }
  Surface with_b(const Eigen::Ref<const VectorX<Scalar>>& b) const {
    Surface s = *this;
    s.grid.set_b(b);
    return s;
  }
};

// Evaluate F(u,v) for every sample row of `uv` using the local 4x4
// tensor-product form: only the 16 active control points contribute.
template <typename Scalar, typename Derived>
Points3<Scalar> surface_eval(const Surface<Scalar>& surf, const Eigen::MatrixBase<Derived>& uv) {
  const Index p = uv.rows();
  const Index n_cols = surf.grid.cols();
  Points3<Scalar> out(p, 3);
  for (Index q = 0; q < p; ++q) {
    const auto bu = basis_span(surf.knots_u, Scalar(uv(q, 0)));
    const auto bv = basis_span(surf.knots_v, Scalar(uv(q, 1)));
    Eigen::Matrix<Scalar, 1, 3> acc = Eigen::Matrix<Scalar, 1, 3>::Zero();
    for (int a = 0; a < 4; ++a) {
      const Index m = bu.span - 3 + a;
      for (int c = 0; c < 4; ++c) {
        const Index n = bv.span - 3 + c;
        acc += bu.value[a] * bv.value[c] * surf.grid.points().row(m * n_cols + n);
      }
    }
    out.row(q) = acc;
  }
  return out;
}

// First-order tangents dF/du and dF/dv at every sample.
template <typename Scalar, typename Derived>
std::pair<Points3<Scalar>, Points3<Scalar>> surface_tangents(const Surface<Scalar>& surf,
                                                             const Eigen::MatrixBase<Derived>& uv) {
  const Index p = uv.rows();
  const Index n_cols = surf.grid.cols();
  Points3<Scalar> du(p, 3), dv(p, 3);
  for (Index q = 0; q < p; ++q) {
    const auto bu = basis_span(surf.knots_u, Scalar(uv(q, 0)));
    const auto bv = basis_span(surf.knots_v, Scalar(uv(q, 1)));
    Eigen::Matrix<Scalar, 1, 3> au = Eigen::Matrix<Scalar, 1, 3>::Zero();
    Eigen::Matrix<Scalar, 1, 3> av = Eigen::Matrix<Scalar, 1, 3>::Zero();
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        const auto row = surf.grid.points().row((bu.span - 3 + a) * n_cols + (bv.span - 3 + c));
        au += bu.d1[a] * bv.value[c] * row;
        av += bu.value[a] * bv.d1[c] * row;
      }
    du.row(q) = au;
    dv.row(q) = av;
  }
  return {std::move(du), std::move(dv)};
}

// Unit surface normals h = Fu x Fv / |Fu x Fv|, stacked 3 per sample.
// Samples with a near-degenerate cross product (< 1e-12) are flagged
// invalid and zeroed instead of raising.
template <typename Scalar>
struct NormalField {
  VectorX<Scalar> h;        // 3p stacked unit normals, invalid entries zero
  ArrayXb valid;            // p flags
  UVSamples<Scalar> uv;     // sample parameters, one row per normal

  Index size() const { return valid.size(); }
  Eigen::Matrix<Scalar, 3, 1> normal(Index i) const { return h.template segment<3>(3 * i); }
};

template <typename Scalar, typename Derived>
NormalField<Scalar> normals_at(const Surface<Scalar>& surf, const Eigen::MatrixBase<Derived>& uv) {
  auto [du, dv] = surface_tangents(surf, uv);
  const Index p = uv.rows();
  NormalField<Scalar> nf;
  nf.h = VectorX<Scalar>::Zero(3 * p);
  nf.valid = ArrayXb::Constant(p, false);
  nf.uv = uv;
  for (Index q = 0; q < p; ++q) {
    const Eigen::Matrix<Scalar, 3, 1> c =
        du.row(q).transpose().cross(dv.row(q).transpose());
    const Scalar len = c.norm();
    if (len < Scalar(1e-12)) continue;
    nf.h.template segment<3>(3 * q) = c / len;
    nf.valid[q] = true;
  }
  return nf;
}

// Dense W x H sampling of the unit parameter square in pixel order:
// sample index r*W + c maps to u = c/(W-1), v = 1 - r/(H-1). Row 0 is the
// top image row, so v decreases with the row index (images store y down,
// geometry keeps y up).
template <typename Scalar>
UVSamples<Scalar> dense_uv_grid(Index width, Index height) {
  if (width < 2 || height < 2) throw std::invalid_argument("dense_uv_grid: need at least 2x2");
  UVSamples<Scalar> uv(width * height, 2);
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) {
      uv(r * width + c, 0) = Scalar(c) / Scalar(width - 1);
      uv(r * width + c, 1) = Scalar(1) - Scalar(r) / Scalar(height - 1);
    }
  return uv;
}

using KnotVectord = KnotVector<double>;
using ControlGridd = ControlGrid<double>;
using Surfaced = Surface<double>;
using NormalFieldd = NormalField<double>;
using UVSamplesd = UVSamples<double>;
using Points3d = Points3<double>;

}  // namespace bsurf
