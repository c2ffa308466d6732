#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "caponplus/errors.h"

namespace caponplus {

using cdouble = std::complex<double>;
using ComplexVector = std::vector<cdouble>;
using VectorView = std::span<const cdouble>;

/// Dense M x M Hermitian matrix, row-major.
///
/// Construction enforces conjugate symmetry: checked inputs must agree with
/// their mirror to 1e-12 (absolute) and are then made exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim);

  static HermitianMatrix identity(std::size_t dim, double scale = 1.0);
  static HermitianMatrix diagonal(std::span<const double> diag);
  /// Full row-major elements; throws DomainError when not Hermitian.
  static HermitianMatrix from_rows(std::size_t dim, std::vector<cdouble> elements,
                                   bool posdef_hint = false);
  /// Only the lower triangle of `elements` is read; the upper one is mirrored.
  static HermitianMatrix from_lower(std::size_t dim, std::vector<cdouble> elements,
                                    bool posdef_hint = false);

  std::size_t dim() const noexcept { return dim_; }
  cdouble operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  std::span<const cdouble> elements() const noexcept { return data_; }

  bool posdef_hint() const noexcept { return posdef_hint_; }
  void set_posdef_hint(bool hint) noexcept { posdef_hint_ = hint; }

  /// this += scale * v v^H
  void add_outer(double scale, VectorView v);
  void add_diagonal(double value);
  double max_diagonal() const;

  double frobenius_norm() const;

 private:
  void mirror_lower();

  std::size_t dim_ = 0;
  std::vector<cdouble> data_;
  bool posdef_hint_ = false;
};

/// Lower-triangular L with L L^H = A and real positive diagonal.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;

  std::size_t dim() const noexcept { return dim_; }
  cdouble operator()(std::size_t row, std::size_t col) const {
    return col <= row ? lower_[row * dim_ + col] : cdouble{};
  }

  /// x with A x = b.
  ComplexVector solve(VectorView b) const;
  /// L^{-1} b
  ComplexVector solve_lower(VectorView b) const;
  /// L z
  ComplexVector multiply(VectorView z) const;
  double log_det() const;

  /// L L^H as a Hermitian matrix.
  HermitianMatrix reconstruct() const;

 private:
  friend CholeskyFactor cholesky(const HermitianMatrix& a);

  std::size_t dim_ = 0;
  std::vector<cdouble> lower_;
};

/// Throws NotPositiveDefinite when a pivot falls to M * eps * max-diagonal or below.
CholeskyFactor cholesky(const HermitianMatrix& a);

ComplexVector solve_hpd(const HermitianMatrix& a, VectorView b);

/// v^H A v. Summed over the lower triangle and its mirror, so the result is
/// real by construction.
double quadratic_form(const HermitianMatrix& a, VectorView v);

ComplexVector multiply(const HermitianMatrix& a, VectorView v);

/// a^H b
cdouble inner(VectorView a, VectorView b);
double squared_norm(VectorView v);

/// Real part of a scalar that is real in exact arithmetic. Throws DomainError
/// if the imaginary residue exceeds 1e-10 relative to |z|.
double hermitian_real(cdouble z);

struct Rank1Inverse {
  ComplexVector minv_a;  // (Q + gamma a a^H)^{-1} a
  double aH_minv_a = 0.0;
};

/// Sherman-Morrison for Sigma = Q + gamma a a^H applied to a, given Q^{-1} a.
Rank1Inverse rank1_update_inverse(VectorView qinv_a, double aH_qinv_a, double gamma);

ComplexVector scaled(VectorView v, cdouble factor);

}  // namespace caponplus
