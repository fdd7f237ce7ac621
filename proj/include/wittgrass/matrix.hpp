#pragma once

#include <string>
#include <vector>

#include "wittgrass/errors.hpp"

namespace wittgrass {

/// Dense square or rectangular matrix, row-major, over any ring type R with
/// Elem, zero(), one(), add, sub, mul, neg.
template <class E>
using Matrix = std::vector<std::vector<E>>;

template <class R>
Matrix<typename R::Elem> mat_identity(const R& ring, int n) {
  Matrix<typename R::Elem> m(n, std::vector<typename R::Elem>(n, ring.zero()));
  for (int i = 0; i < n; ++i) m[i][i] = ring.one();
  return m;
}

template <class R>
Matrix<typename R::Elem> mat_mul(const R& ring, const Matrix<typename R::Elem>& a, const Matrix<typename R::Elem>& b) {
  const std::size_t rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  for (const auto& row : a)
    if (row.size() != inner) throw LengthMismatch("matrix shapes do not compose");
  Matrix<typename R::Elem> c(rows, std::vector<typename R::Elem>(cols, ring.zero()));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      auto acc = ring.zero();
      for (std::size_t k = 0; k < inner; ++k) acc = ring.add(acc, ring.mul(a[i][k], b[k][j]));
      c[i][j] = acc;
    }
  return c;
}

template <class R>
Matrix<typename R::Elem> mat_minor(const Matrix<typename R::Elem>& a, std::size_t row, std::size_t col) {
  Matrix<typename R::Elem> m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == row) continue;
    std::vector<typename R::Elem> r;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (j != col) r.push_back(a[i][j]);
    m.push_back(std::move(r));
  }
  return m;
}

/// Laplace expansion along the first row; intended for n <= 4.
template <class R>
typename R::Elem mat_det(const R& ring, const Matrix<typename R::Elem>& a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw LengthMismatch("determinant of a non-square matrix");
  if (n == 0) return ring.one();
  if (n == 1) return a[0][0];
  if (n == 2) return ring.sub(ring.mul(a[0][0], a[1][1]), ring.mul(a[0][1], a[1][0]));
  auto acc = ring.zero();
  for (std::size_t j = 0; j < n; ++j) {
    auto term = ring.mul(a[0][j], mat_det(ring, mat_minor<R>(a, 0, j)));
    acc = j % 2 == 0 ? ring.add(acc, term) : ring.sub(acc, term);
  }
  return acc;
}

/// adj(A) with A * adj(A) = det(A) * I.
template <class R>
Matrix<typename R::Elem> mat_adjugate(const R& ring, const Matrix<typename R::Elem>& a) {
  const std::size_t n = a.size();
  Matrix<typename R::Elem> adj(n, std::vector<typename R::Elem>(n, ring.zero()));
  if (n == 1) {
    adj[0][0] = ring.one();
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto c = mat_det(ring, mat_minor<R>(a, i, j));
      adj[j][i] = (i + j) % 2 == 0 ? c : ring.neg(c);
    }
  return adj;
}

/// Inverse over a ring where det(A) is a unit (R needs inverse()).
template <class R>
Matrix<typename R::Elem> mat_inverse(const R& ring, const Matrix<typename R::Elem>& a) {
  auto d_inv = ring.inverse(mat_det(ring, a));
  auto adj = mat_adjugate(ring, a);
  for (auto& row : adj)
    for (auto& x : row) x = ring.mul(x, d_inv);
  return adj;
}

template <class R>
bool mat_equal(const R& ring, const Matrix<typename R::Elem>& a, const Matrix<typename R::Elem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!ring.equal(a[i][j], b[i][j])) return false;
  }
  return true;
}

}  // namespace wittgrass
