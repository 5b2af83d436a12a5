#pragma once

#include "minmax/types.hpp"

namespace minmax {

/// x ↦ Ax + b between coordinate spaces.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Matrix matrix, Vector offset) : matrix_(std::move(matrix)), offset_(std::move(offset)) {
    if (matrix_.rows() != offset_.size()) {
      throw DimensionError("AffineMap: offset length " + std::to_string(offset_.size()) + " does not match " +
                           std::to_string(matrix_.rows()) + " output rows");
    }
  }

  static AffineMap identity(int n) { return AffineMap(Matrix::Identity(n, n), Vector::Zero(n)); }
  static AffineMap linear(Matrix matrix) {
    Vector zero = Vector::Zero(matrix.rows());
    return AffineMap(std::move(matrix), std::move(zero));
  }
  /// Constant map from R^n_in onto `value`.
  static AffineMap constant(int n_in, Vector value) {
    Matrix zero = Matrix::Zero(value.size(), n_in);
    return AffineMap(std::move(zero), std::move(value));
  }
  /// Picks coordinates [first, first + count) out of R^n_in.
  static AffineMap select(int n_in, int first, int count) {
    Matrix m = Matrix::Zero(count, n_in);
    for (int i = 0; i < count; ++i) m(i, first + i) = 1.0;
    return linear(std::move(m));
  }

  int n_in() const { return static_cast<int>(matrix_.cols()); }
  int n_out() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Vector& offset() const { return offset_; }

  bool is_identity() const {
    return matrix_.rows() == matrix_.cols() && matrix_.isIdentity(0.0) && offset_.isZero(0.0);
  }

  /// Square with nonzero determinant.
  bool is_invertible() const {
    if (matrix_.rows() != matrix_.cols()) return false;
    if (matrix_.rows() == 0) return true;
    return Eigen::FullPivLU<Matrix>(matrix_).isInvertible();
  }

  Vector apply(const Vector& p) const {
    require_dim(p, n_in(), "AffineMap::apply");
    Vector out(n_out());
    for (int r = 0; r < n_out(); ++r) {
      double s = offset_[r];
      for (int c = 0; c < n_in(); ++c) s += matrix_(r, c) * p[c];
      out[r] = s;
    }
    return out;
  }

  Vector operator()(const Vector& p) const { return apply(p); }

  /// (this ∘ inner)(x) = this(inner(x)).
  AffineMap compose(const AffineMap& inner) const {
    if (inner.n_out() != n_in()) throw DimensionError("AffineMap::compose: dimension mismatch");
    return AffineMap(matrix_ * inner.matrix_, matrix_ * inner.offset_ + offset_);
  }

  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.matrix_.rows() == b.matrix_.rows() && a.matrix_.cols() == b.matrix_.cols() &&
           a.matrix_ == b.matrix_ && a.offset_ == b.offset_;
  }

 private:
  Matrix matrix_;
  Vector offset_;
};

inline Vector affine_apply(const AffineMap& map, const Vector& p) { return map.apply(p); }

}  // namespace minmax
