#include "caponplus/estimation.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace caponplus {

SampleCovariance scm(const SnapshotBatch& batch) {
  if (batch.count == 0) throw EmptyBatch("scm: batch has no snapshots");
  const std::size_t m = batch.elements;
  std::vector<cdouble> acc(m * m);
  for (std::size_t t = 0; t < batch.count; ++t) {
    const cdouble* x = batch.data.data() + t * m;
    for (std::size_t i = 0; i < m; ++i) {
      cdouble* row = acc.data() + i * m;
      const cdouble xi = x[i];
      for (std::size_t j = 0; j <= i; ++j) row[j] += xi * std::conj(x[j]);
    }
  }
  const double inv_t = 1.0 / static_cast<double>(batch.count);
  for (auto& v : acc) v *= inv_t;
  return {HermitianMatrix::from_lower(m, std::move(acc), batch.count > m), batch.count};
}

OutputMoments output_moments(VectorView outputs) {
  OutputMoments m;
  if (outputs.empty()) return m;
  for (const cdouble& y : outputs) {
    const double p = std::norm(y);
    m.power += p;
    m.fourth += p * p;
  }
  const double n = static_cast<double>(outputs.size());
  m.power /= n;
  m.fourth /= n;
  return m;
}

PowerEstimate power_estimate(VectorView w, const SnapshotBatch& batch) {
  if (batch.count == 0) throw EmptyBatch("power_estimate: batch has no snapshots");
  return {output_moments(beamform(w, batch)).power, PowerEstimator::Raw};
}

double fourth_moment(VectorView w, const SnapshotBatch& batch) {
  if (batch.count == 0) throw EmptyBatch("fourth_moment: batch has no snapshots");
  return output_moments(beamform(w, batch)).fourth;
}

double kurtosis_estimate(VectorView samples) {
  if (samples.size() < 2) throw DomainError("kurtosis_estimate: need at least 2 samples");
  const OutputMoments m = output_moments(samples);
  if (!(m.power > 0.0)) throw DegenerateSample("kurtosis_estimate: all samples are zero");
  return m.fourth / (m.power * m.power) - 2.0;
}

PowerEstimate debiased_power(double gamma_cap_hat, double aH_qinv_a) {
  if (!(aH_qinv_a > 0.0)) throw NonPositiveQuadraticForm("debiased_power: a^H Q^{-1} a <= 0");
  return {std::max(gamma_cap_hat - 1.0 / aH_qinv_a, 0.0), PowerEstimator::Debiased};
}

NegativeLogLikelihood::NegativeLogLikelihood(const HermitianMatrix& incm,
                                             const HermitianMatrix& scm, VectorView a) {
  if (incm.dim() != scm.dim() || incm.dim() != a.size()) {
    throw DimensionMismatch("negative_log_likelihood: dimensions differ");
  }
  const CholeskyFactor q = cholesky(incm);
  const ComplexVector u = q.solve(a);
  aqa_ = hermitian_real(inner(a, u));
  if (!(aqa_ > 0.0)) throw NonPositiveQuadraticForm("negative_log_likelihood: a^H Q^{-1} a <= 0");
  u_s_u_ = quadratic_form(scm, u);
  log_det_q_ = q.log_det();

  // tr(Q^{-1} S) = sum_j e_j^H Q^{-1} S e_j, column by column
  const std::size_t m = a.size();
  ComplexVector col(m);
  double trace = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) col[i] = scm(i, j);
    trace += q.solve(col)[j].real();
  }
  trace_qinv_s_ = trace;
}

double NegativeLogLikelihood::operator()(double gamma) const {
  if (!(gamma >= 0.0)) throw DomainError("negative_log_likelihood: gamma must be non-negative");
  const double denom = 1.0 + gamma * aqa_;
  // (Q + g a a^H)^{-1} = Q^{-1} - g u u^H / (1 + g a^H u)
  const double trace = trace_qinv_s_ - gamma * u_s_u_ / denom;
  return trace + log_det_q_ + std::log(denom);
}

double negative_log_likelihood(double gamma, const HermitianMatrix& incm,
                               const HermitianMatrix& scm, VectorView a) {
  return NegativeLogLikelihood(incm, scm, a)(gamma);
}

namespace {

ShrinkageFactor shrinkage_from_moments(double gamma_cap, double fourth_mom, double gamma_target,
                                       int snapshots, const char* who) {
  if (snapshots < 1) throw DomainError(std::string(who) + ": T must be >= 1");
  if (!(gamma_cap >= 0.0) || !(fourth_mom >= 0.0) || !(gamma_target >= 0.0)) {
    throw DomainError(std::string(who) + ": inputs must be non-negative");
  }
  const double t = snapshots;
  const double denom = fourth_mom + (t - 1.0) * gamma_cap * gamma_cap;
  if (!(denom > 0.0)) throw DegenerateDenominator(std::string(who) + ": denominator <= 0");
  return ShrinkageFactor::from_alpha(t * gamma_cap * gamma_target / denom);
}

}  // namespace

ShrinkageFactor alpha_hat_scenario_a(double gamma_cap_hat, double fourth_mom, double gamma_deb,
                                     int snapshots) {
  return shrinkage_from_moments(gamma_cap_hat, fourth_mom, gamma_deb, snapshots,
                                "alpha_hat_scenario_a");
}

ShrinkageFactor alpha_hat_scenario_b(double gamma_cap_hathat, double fourth_mom_adaptive,
                                     double gamma_known, int snapshots) {
  if (!(gamma_known >= 0.0)) throw DomainError("alpha_hat_scenario_b: gamma must be non-negative");
  return shrinkage_from_moments(gamma_cap_hathat, fourth_mom_adaptive, gamma_known, snapshots,
                                "alpha_hat_scenario_b");
}

double inverse_wishart_scale(std::size_t secondary_count, std::size_t elements) {
  if (secondary_count <= elements) {
    throw InsufficientSecondarySamples("T0 = " + std::to_string(secondary_count) +
                                       " must exceed M = " + std::to_string(elements));
  }
  return static_cast<double>(secondary_count) /
         static_cast<double>(secondary_count - elements);
}

PowerEstimate debiased_power_scaled(double gamma_cap_hat, double aH_qhatinv_a,
                                    std::size_t secondary_count, std::size_t elements) {
  const double c = inverse_wishart_scale(secondary_count, elements);
  if (!(aH_qhatinv_a > 0.0)) {
    throw NonPositiveQuadraticForm("debiased_power_scaled: a^H Qhat^{-1} a <= 0");
  }
  return {std::max(gamma_cap_hat - c / aH_qhatinv_a, 0.0), PowerEstimator::DebiasedScaled};
}

}  // namespace caponplus
