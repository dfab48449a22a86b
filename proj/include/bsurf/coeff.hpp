#pragma once

// Sparse coefficient matrices mapping the flattened control vector b (3MN)
// to stacked samples of the surface and its partial derivatives, plus the
// row/column selection operators and the blockwise cross-product operators
// used by the shading formulation.

#include "bsurf/surface.hpp"

#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace bsurf {

enum class CoeffKind { T, T1, T2, T11, T22, T12 };

inline const char* to_string(CoeffKind k) {
  switch (k) {
    case CoeffKind::T: return "T";
    case CoeffKind::T1: return "T1";
    case CoeffKind::T2: return "T2";
    case CoeffKind::T11: return "T11";
    case CoeffKind::T22: return "T22";
    case CoeffKind::T12: return "T12";
  }
  return "?";
}

// Stacked sparse linear map from b to 3*count() sample values. Each 3-row
// sample block touches at most 16 control points (48 columns).
template <typename Scalar>
struct CoeffMatrix {
  Eigen::SparseMatrix<Scalar> mat;
  CoeffKind kind = CoeffKind::T;

  Index samples() const { return mat.rows() / 3; }
  Index rows() const { return mat.rows(); }
  Index cols() const { return mat.cols(); }
};

// Assemble the coefficient matrix of the requested kind at every uv sample.
// Row layout: sample q occupies rows 3q..3q+2 (x,y,z).
template <typename Scalar, typename Derived>
CoeffMatrix<Scalar> assemble_coeff(const Surface<Scalar>& surf,
                                   const Eigen::MatrixBase<Derived>& uv, CoeffKind kind) {
  const Index p = uv.rows();
  const Index n_cols = surf.grid.cols();
  CoeffMatrix<Scalar> out;
  out.kind = kind;
  out.mat.resize(3 * p, 3 * surf.grid.size());

  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<size_t>(48 * p));
  for (Index q = 0; q < p; ++q) {
    const auto bu = basis_span(surf.knots_u, Scalar(uv(q, 0)));
    const auto bv = basis_span(surf.knots_v, Scalar(uv(q, 1)));
    const auto* wu = &bu.value;
    const auto* wv = &bv.value;
    switch (kind) {
      case CoeffKind::T: break;
      case CoeffKind::T1: wu = &bu.d1; break;
      case CoeffKind::T2: wv = &bv.d1; break;
      case CoeffKind::T11: wu = &bu.d2; break;
      case CoeffKind::T22: wv = &bv.d2; break;
      case CoeffKind::T12: wu = &bu.d1; wv = &bv.d1; break;
    }
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        const Scalar w = (*wu)[a] * (*wv)[c];
        if (w == Scalar(0)) continue;
        const Index pt = (bu.span - 3 + a) * n_cols + (bv.span - 3 + c);
        for (int comp = 0; comp < 3; ++comp)
          trip.emplace_back(3 * q + comp, 3 * pt + comp, w);
      }
  }
  out.mat.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// (sn)/(sf): keep the 3-row blocks of the listed samples, in list order.
template <typename Scalar>
CoeffMatrix<Scalar> select_samples(const CoeffMatrix<Scalar>& coeff,
                                   const std::vector<Index>& keep) {
  const Index p = coeff.samples();
  Eigen::SparseMatrix<Scalar> sel(3 * static_cast<Index>(keep.size()), coeff.rows());
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(3 * keep.size());
  for (size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= p)
      throw std::invalid_argument("select_samples: sample index out of range");
    for (int c = 0; c < 3; ++c)
      trip.emplace_back(static_cast<Index>(3 * k + c), 3 * keep[k] + c, Scalar(1));
  }
  sel.setFromTriplets(trip.begin(), trip.end());
  CoeffMatrix<Scalar> out;
  out.kind = coeff.kind;
  out.mat = sel * coeff.mat;
  return out;
}

template <typename Scalar>
CoeffMatrix<Scalar> select_samples(const CoeffMatrix<Scalar>& coeff, const ArrayXb& mask) {
  if (mask.size() != coeff.samples())
    throw std::invalid_argument("select_samples: mask size != sample count");
  std::vector<Index> keep;
  keep.reserve(mask.size());
  for (Index i = 0; i < mask.size(); ++i)
    if (mask[i]) keep.push_back(i);
  return select_samples(coeff, keep);
}

// (sxy): zero every column that multiplies a z control component. The
// matrix keeps its shape; the z rows of the product become zero because
// component rows only reference same-component columns.
template <typename Scalar>
CoeffMatrix<Scalar> select_xy(const CoeffMatrix<Scalar>& coeff) {
  CoeffMatrix<Scalar> out = coeff;
  for (Index col = 2; col < out.mat.cols(); col += 3)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(out.mat, col); it; ++it)
      it.valueRef() = Scalar(0);
  out.mat.prune(Scalar(0), Scalar(0));
  return out;
}

enum class SelectOp { sn, sxy, sf };

// Spec-facing dispatcher; sn/sf take the sample subset, sxy takes none.
template <typename Scalar>
CoeffMatrix<Scalar> select(const CoeffMatrix<Scalar>& coeff, SelectOp op,
                           const std::vector<Index>& arg = {}) {
  switch (op) {
    case SelectOp::sn:
    case SelectOp::sf: return select_samples(coeff, arg);
    case SelectOp::sxy:
      if (!arg.empty()) throw std::invalid_argument("select: sxy takes no argument");
      return select_xy(coeff);
  }
  throw std::invalid_argument("select: unknown operator");
}

// [w]_x for a single 3-vector.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> skew(const Eigen::Matrix<Scalar, 3, 1>& w) {
  Eigen::Matrix<Scalar, 3, 3> s;
  s << Scalar(0), -w.z(), w.y(),
       w.z(), Scalar(0), -w.x(),
       -w.y(), w.x(), Scalar(0);
  return s;
}

// [w]_ox: block-diagonal matrix of p skew blocks built from a 3p vector,
// so that [w]_ox * v stacks the per-triple cross products w_i x v_i.
template <typename Scalar>
Eigen::SparseMatrix<Scalar> skew_blocks(const Eigen::Ref<const VectorX<Scalar>>& w) {
  if (w.size() % 3 != 0) throw std::invalid_argument("skew_blocks: length must be a multiple of 3");
  const Index p = w.size() / 3;
  Eigen::SparseMatrix<Scalar> out(3 * p, 3 * p);
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(6 * p);
  for (Index i = 0; i < p; ++i) {
    const Scalar x = w[3 * i], y = w[3 * i + 1], z = w[3 * i + 2];
    trip.emplace_back(3 * i + 0, 3 * i + 1, -z);
    trip.emplace_back(3 * i + 0, 3 * i + 2, y);
    trip.emplace_back(3 * i + 1, 3 * i + 0, z);
    trip.emplace_back(3 * i + 1, 3 * i + 2, -x);
    trip.emplace_back(3 * i + 2, 3 * i + 0, -y);
    trip.emplace_back(3 * i + 2, 3 * i + 1, x);
  }
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// w (ox) v: stacked per-triple cross products of two 3p vectors.
template <typename Scalar>
VectorX<Scalar> cross_stacked(const Eigen::Ref<const VectorX<Scalar>>& w,
                              const Eigen::Ref<const VectorX<Scalar>>& v) {
  if (w.size() != v.size() || w.size() % 3 != 0)
    throw std::invalid_argument("cross_stacked: lengths must match and be multiples of 3");
  VectorX<Scalar> out(w.size());
  for (Index i = 0; i < w.size(); i += 3)
    out.template segment<3>(i) =
        w.template segment<3>(i).cross(v.template segment<3>(i));
  return out;
}

// Diagonal of reciprocal cross-product lengths (3 equal entries per sample);
// samples below the degeneracy threshold get weight 0 and a false flag.
template <typename Scalar>
std::pair<VectorX<Scalar>, ArrayXb> normal_scale(const Eigen::Ref<const VectorX<Scalar>>& cross) {
  const Index p = cross.size() / 3;
  VectorX<Scalar> lambda = VectorX<Scalar>::Zero(3 * p);
  ArrayXb valid = ArrayXb::Constant(p, false);
  for (Index i = 0; i < p; ++i) {
    const Scalar len = cross.template segment<3>(3 * i).norm();
    if (len < Scalar(1e-12)) continue;
    lambda.template segment<3>(3 * i).setConstant(Scalar(1) / len);
    valid[i] = true;
  }
  return {std::move(lambda), valid};
}

using CoeffMatrixd = CoeffMatrix<double>;

}  // namespace bsurf
