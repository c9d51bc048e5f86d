#include "gsg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsg/errors.hpp"

namespace gsg {

Matrix Matrix::transposed() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::symmetrized() const {
  Matrix s(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
  return s;
}

double Matrix::quadratic_form(std::span<const double> z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += a_[i * n_ + j] * z[j];
    acc += z[i] * row;
  }
  return acc;
}

double Matrix::frobenius_inner(const Matrix& other) const {
  return std::inner_product(a_.begin(), a_.end(), other.a_.begin(), 0.0);
}

double Matrix::frobenius_inner_block(const Matrix& other, std::size_t begin,
                                     std::size_t end) const {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = begin; j < end; ++j)
      acc += (*this)(i, j) * other(i, j);
  return acc;
}

EigenDecomposition jacobi_eigensymmetric(const Matrix& a_in, int max_sweeps) {
  const std::size_t n = a_in.size();
  Matrix a = a_in;
  Matrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= 1e-15 * scale * static_cast<double>(n)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  // sort ascending, permuting eigenvector columns along
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return out.values[x] < out.values[y]; });
  Matrix vs(n);
  std::vector<double> ws(n);
  for (std::size_t c = 0; c < n; ++c) {
    ws[c] = out.values[order[c]];
    for (std::size_t r = 0; r < n; ++r) vs(r, c) = v(r, order[c]);
  }
  out.values = std::move(ws);
  out.vectors = std::move(vs);
  return out;
}

double largest_eigenvalue(const Matrix& a_sym) {
  auto eig = jacobi_eigensymmetric(a_sym);
  return eig.values.back();
}

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) { return dot(x, x); }

std::vector<double> mat_t_vec(const Matrix& a, std::span<const double> x) {
  const std::size_t n = a.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[j] += a(i, j) * x[i];
  return y;
}

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x) {
  const std::size_t n = a.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += a(i, j) * x[j];
  return y;
}

Matrix sandwich_diag(const Matrix& v, std::span<const double> d) {
  const std::size_t n = v.size();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * d[k] * v(j, k);
      out(i, j) = acc;
    }
  return out;
}

Matrix sandwich(const Matrix& v, const Matrix& b) {
  const std::size_t n = v.size();
  Matrix vb(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * b(k, j);
      vb(i, j) = acc;
    }
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += vb(i, k) * v(j, k);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace gsg
