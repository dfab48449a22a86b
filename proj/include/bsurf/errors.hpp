#pragma once

#include <stdexcept>
#include <string>

namespace bsurf {

// Fewer than the minimum observations an operation needs (images, pixels,
// correspondences).
class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Geometric configuration that admits no unique answer (collinear points,
// rank-deficient landmark sets).
class DegenerateGeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A linear solve whose normal matrix is singular; carries the estimated
// null-space dimension.
class RankDeficiencyError : public std::runtime_error {
public:
  RankDeficiencyError(const std::string& what, int null_dim)
      : std::runtime_error(what + " (null-space dimension " + std::to_string(null_dim) + ")"),
        null_dim_(null_dim) {}
  int null_dim() const { return null_dim_; }

private:
  int null_dim_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace bsurf
