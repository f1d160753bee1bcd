#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace trieig {

enum class Shape { Lower, Upper };

inline Shape opposite(Shape s) { return s == Shape::Lower ? Shape::Upper : Shape::Lower; }

/// Dense n x n triangular matrix, row-major, 0-based element access.
/// Entries strictly on the wrong side of the diagonal are zero; the
/// constructor rejects anything else.
template <class T>
class BasicTriMatrix {
 public:
  BasicTriMatrix() = default;

  /// Zero matrix.
  BasicTriMatrix(std::size_t n, Shape shape) : n_(n), shape_(shape), entries_(n * n, T(0)) {}

  BasicTriMatrix(std::size_t n, Shape shape, std::vector<T> entries)
      : n_(n), shape_(shape), entries_(std::move(entries)) {
    if (entries_.size() != n_ * n_) {
      throw std::invalid_argument("BasicTriMatrix: entry count does not match dimension");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (!in_triangle(i, j) && !(entries_[i * n_ + j] == T(0))) {
          throw std::invalid_argument("BasicTriMatrix: nonzero entry outside the triangle");
        }
      }
    }
  }

  std::size_t size() const { return n_; }
  Shape shape() const { return shape_; }

  bool in_triangle(std::size_t i, std::size_t j) const {
    return shape_ == Shape::Lower ? j <= i : j >= i;
  }

  const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  /// Writable access, only inside the triangle.
  T& at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_triangle(i, j)) {
      throw std::out_of_range("BasicTriMatrix::at: outside the triangle");
    }
    return entries_[i * n_ + j];
  }

  const std::vector<T>& entries() const { return entries_; }

  friend bool operator==(const BasicTriMatrix& x, const BasicTriMatrix& y) {
    return x.n_ == y.n_ && x.shape_ == y.shape_ && x.entries_ == y.entries_;
  }

 private:
  std::size_t n_ = 0;
  Shape shape_ = Shape::Lower;
  std::vector<T> entries_;
};

using TriMatrix = BasicTriMatrix<double>;

/// J * M * J with J the anti-diagonal identity: reverses row and column order
/// and swaps Lower/Upper. An exact involution.
template <class T>
BasicTriMatrix<T> flip(const BasicTriMatrix<T>& m) {
  const std::size_t n = m.size();
  std::vector<T> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(m(n - 1 - i, n - 1 - j));
  }
  return BasicTriMatrix<T>(n, opposite(m.shape()), std::move(out));
}

}  // namespace trieig
