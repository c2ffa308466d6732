#include "caponplus/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace caponplus {

namespace {

void require_dims(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) +
                            ", got " + std::to_string(actual));
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

HermitianMatrix HermitianMatrix::identity(std::size_t dim, double scale) {
  HermitianMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = scale;
  m.posdef_hint_ = scale > 0.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  HermitianMatrix m(diag.size());
  bool positive = true;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m.data_[i * diag.size() + i] = diag[i];
    positive = positive && diag[i] > 0.0;
  }
  m.posdef_hint_ = positive;
  return m;
}

HermitianMatrix HermitianMatrix::from_rows(std::size_t dim, std::vector<cdouble> elements,
                                           bool posdef_hint) {
  require_dims(dim * dim, elements.size(), "HermitianMatrix::from_rows");
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < dim; ++i) {
    const cdouble d = elements[i * dim + i];
    if (std::abs(d.imag()) > kTol) throw DomainError("HermitianMatrix: diagonal entry not real");
    if (posdef_hint && d.real() <= 0.0) {
      throw DomainError("HermitianMatrix: non-positive diagonal with posdef hint");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(elements[i * dim + j] - std::conj(elements[j * dim + i])) > kTol) {
        throw DomainError("HermitianMatrix: entries (" + std::to_string(i) + "," +
                          std::to_string(j) + ") not conjugate-symmetric");
      }
    }
  }
  return from_lower(dim, std::move(elements), posdef_hint);
}

HermitianMatrix HermitianMatrix::from_lower(std::size_t dim, std::vector<cdouble> elements,
                                            bool posdef_hint) {
  require_dims(dim * dim, elements.size(), "HermitianMatrix::from_lower");
  HermitianMatrix m;
  m.dim_ = dim;
  m.data_ = std::move(elements);
  m.posdef_hint_ = posdef_hint;
  m.mirror_lower();
  return m;
}

void HermitianMatrix::mirror_lower() {
  for (std::size_t i = 0; i < dim_; ++i) {
    data_[i * dim_ + i] = data_[i * dim_ + i].real();
    for (std::size_t j = 0; j < i; ++j) data_[j * dim_ + i] = std::conj(data_[i * dim_ + j]);
  }
}

void HermitianMatrix::add_outer(double scale, VectorView v) {
  require_dims(dim_, v.size(), "HermitianMatrix::add_outer");
  for (std::size_t i = 0; i < dim_; ++i) {
    const cdouble vi = scale * v[i];
    for (std::size_t j = 0; j <= i; ++j) data_[i * dim_ + j] += vi * std::conj(v[j]);
  }
  mirror_lower();
}

void HermitianMatrix::add_diagonal(double value) {
  for (std::size_t i = 0; i < dim_; ++i) data_[i * dim_ + i] += value;
}

double HermitianMatrix::max_diagonal() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) m = std::max(m, data_[i * dim_ + i].real());
  return m;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cdouble& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

CholeskyFactor cholesky(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) throw DimensionMismatch("cholesky: empty matrix");
  const double threshold =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * a.max_diagonal();

  CholeskyFactor f;
  f.dim_ = n;
  f.lower_.assign(n * n, cdouble{});
  auto& l = f.lower_;
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(l[j * n + k]);
    if (!(pivot > threshold)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(pivot);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cdouble s = a(i, j);
      const cdouble* li = &l[i * n];
      const cdouble* lj = &l[j * n];
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * std::conj(lj[k]);
      l[i * n + j] = s / ljj;
    }
  }
  return f;
}

ComplexVector CholeskyFactor::solve_lower(VectorView b) const {
  require_dims(dim_, b.size(), "CholeskyFactor::solve_lower");
  ComplexVector y(b.begin(), b.end());
  for (std::size_t i = 0; i < dim_; ++i) {
    cdouble s = y[i];
    const cdouble* li = &lower_[i * dim_];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
    y[i] = s / li[i].real();
  }
  return y;
}

ComplexVector CholeskyFactor::solve(VectorView b) const {
  ComplexVector x = solve_lower(b);
  // L^H x = y
  for (std::size_t ii = dim_; ii-- > 0;) {
    cdouble s = x[ii];
    for (std::size_t k = ii + 1; k < dim_; ++k) s -= std::conj(lower_[k * dim_ + ii]) * x[k];
    x[ii] = s / lower_[ii * dim_ + ii].real();
  }
  return x;
}

ComplexVector CholeskyFactor::multiply(VectorView z) const {
  require_dims(dim_, z.size(), "CholeskyFactor::multiply");
  ComplexVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    cdouble s{};
    const cdouble* li = &lower_[i * dim_];
    for (std::size_t k = 0; k <= i; ++k) s += li[k] * z[k];
    out[i] = s;
  }
  return out;
}

double CholeskyFactor::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += std::log(lower_[i * dim_ + i].real());
  return 2.0 * s;
}

HermitianMatrix CholeskyFactor::reconstruct() const {
  std::vector<cdouble> out(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cdouble s{};
      for (std::size_t k = 0; k <= j; ++k) s += lower_[i * dim_ + k] * std::conj(lower_[j * dim_ + k]);
      out[i * dim_ + j] = s;
    }
  }
  return HermitianMatrix::from_lower(dim_, std::move(out), true);
}

ComplexVector solve_hpd(const HermitianMatrix& a, VectorView b) {
  require_dims(a.dim(), b.size(), "solve_hpd");
  return cholesky(a).solve(b);
}

double quadratic_form(const HermitianMatrix& a, VectorView v) {
  require_dims(a.dim(), v.size(), "quadratic_form");
  const std::size_t n = a.dim();
  const auto e = a.elements();
  double diag = 0.0;
  cdouble off{};
  for (std::size_t i = 0; i < n; ++i) {
    diag += e[i * n + i].real() * std::norm(v[i]);
    cdouble row{};
    for (std::size_t j = 0; j < i; ++j) row += e[i * n + j] * v[j];
    off += std::conj(v[i]) * row;
  }
  return diag + 2.0 * off.real();
}

ComplexVector multiply(const HermitianMatrix& a, VectorView v) {
  require_dims(a.dim(), v.size(), "multiply");
  const std::size_t n = a.dim();
  const auto e = a.elements();
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cdouble s{};
    for (std::size_t j = 0; j < n; ++j) s += e[i * n + j] * v[j];
    out[i] = s;
  }
  return out;
}

cdouble inner(VectorView a, VectorView b) {
  require_dims(a.size(), b.size(), "inner");
  cdouble s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double squared_norm(VectorView v) {
  double s = 0.0;
  for (const cdouble& z : v) s += std::norm(z);
  return s;
}

double hermitian_real(cdouble z) {
  if (std::abs(z.imag()) > 1e-10 * std::abs(z)) {
    throw DomainError("Hermitian form has a non-negligible imaginary part");
  }
  return z.real();
}

Rank1Inverse rank1_update_inverse(VectorView qinv_a, double aH_qinv_a, double gamma) {
  if (!(aH_qinv_a > 0.0)) throw NonPositiveQuadraticForm("rank1_update_inverse: a^H Q^{-1} a <= 0");
  if (gamma < 0.0) throw DomainError("rank1_update_inverse: gamma must be non-negative");
  const double denom = 1.0 + gamma * aH_qinv_a;
  Rank1Inverse out;
  out.minv_a.resize(qinv_a.size());
  for (std::size_t i = 0; i < qinv_a.size(); ++i) out.minv_a[i] = qinv_a[i] / denom;
  out.aH_minv_a = aH_qinv_a / denom;
  return out;
}

ComplexVector scaled(VectorView v, cdouble factor) {
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = factor * v[i];
  return out;
}

}  // namespace caponplus
