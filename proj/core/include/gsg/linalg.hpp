#ifndef GSG_LINALG_HPP
#define GSG_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace gsg {

// Minimal dense square matrix, row-major. Sizes here are tiny (N <= 64).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  Matrix(std::size_t n, std::vector<double> data) : n_(n), a_(std::move(data)) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  Matrix transposed() const;
  Matrix symmetrized() const;  // (A + A^T)/2

  // z . A z
  double quadratic_form(std::span<const double> z) const;

  double frobenius_inner(const Matrix& other) const;
  // Frobenius inner product over a square sub-block [begin, end)
  double frobenius_inner_block(const Matrix& other, std::size_t begin,
                               std::size_t end) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors: A = V diag(w) V^T
};

// Cyclic Jacobi for symmetric matrices. Deterministic, accurate to ~1e-14
// relative for the sizes used here.
EigenDecomposition jacobi_eigensymmetric(const Matrix& a_sym,
                                         int max_sweeps = 64);

double largest_eigenvalue(const Matrix& a_sym);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);  // squared Euclidean norm

// y = A^T x (used to rotate coordinates/moments between bases)
std::vector<double> mat_t_vec(const Matrix& a, std::span<const double> x);
std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);
// V * diag(d) * V^T
Matrix sandwich_diag(const Matrix& v, std::span<const double> d);
// V * B * V^T
Matrix sandwich(const Matrix& v, const Matrix& b);

}  // namespace gsg

#endif
