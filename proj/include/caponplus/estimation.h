#pragma once

#include <cstddef>

#include "caponplus/beamformers.h"
#include "caponplus/linalg.h"
#include "caponplus/signal_sim.h"

namespace caponplus {

struct SampleCovariance {
  HermitianMatrix matrix;
  std::size_t count = 0;
};

enum class PowerEstimator { Raw, Debiased, DebiasedScaled, MLE };

struct PowerEstimate {
  double value = 0.0;
  PowerEstimator estimator = PowerEstimator::Raw;
};

/// (1/T) sum_t x(t) x(t)^H
SampleCovariance scm(const SnapshotBatch& batch);

/// (1/T) sum_t |w^H x(t)|^2
PowerEstimate power_estimate(VectorView w, const SnapshotBatch& batch);

/// (1/T) sum_t |w^H x(t)|^4
double fourth_moment(VectorView w, const SnapshotBatch& batch);

/// Second and fourth absolute moments of beamformer outputs, one pass.
struct OutputMoments {
  double power = 0.0;
  double fourth = 0.0;
};
OutputMoments output_moments(VectorView outputs);

/// Sample kurtosis m4 / m2^2 - 2 of zero-mean circular samples.
double kurtosis_estimate(VectorView samples);

/// max(gamma_cap_hat - 1 / (a^H Q^{-1} a), 0). Coincides with the Gaussian MLE of
/// the SOI power when Q is known.
PowerEstimate debiased_power(double gamma_cap_hat, double aH_qinv_a);

/// ell(gamma) = tr((Q + gamma a a^H)^{-1} S) + log|Q + gamma a a^H|.
///
/// Precomputes Q^{-1} a, tr(Q^{-1} S), (Q^{-1} a)^H S (Q^{-1} a) and log|Q| so
/// each evaluation is O(1); the gamma-dependent parts follow from
/// Sherman-Morrison and the matrix determinant lemma.
class NegativeLogLikelihood {
 public:
  NegativeLogLikelihood(const HermitianMatrix& incm, const HermitianMatrix& scm, VectorView a);

  double operator()(double gamma) const;

  double aH_qinv_a() const noexcept { return aqa_; }

 private:
  double aqa_ = 0.0;
  double trace_qinv_s_ = 0.0;
  double u_s_u_ = 0.0;
  double log_det_q_ = 0.0;
};

double negative_log_likelihood(double gamma, const HermitianMatrix& incm,
                               const HermitianMatrix& scm, VectorView a);

/// T gamma_cap_hat gamma_deb / (m4 + (T - 1) gamma_cap_hat^2), Q known.
ShrinkageFactor alpha_hat_scenario_a(double gamma_cap_hat, double fourth_mom, double gamma_deb,
                                     int snapshots);

/// Same form with the known SOI power and moments of the adaptive Capon output.
ShrinkageFactor alpha_hat_scenario_b(double gamma_cap_hathat, double fourth_mom_adaptive,
                                     double gamma_known, int snapshots);

/// c = T0 / (T0 - M), so that E[a^H Qhat^{-1} a] = c a^H Q^{-1} a under Gaussian data.
double inverse_wishart_scale(std::size_t secondary_count, std::size_t elements);

/// max(gamma_cap_hat - c / (a^H Qhat^{-1} a), 0)
PowerEstimate debiased_power_scaled(double gamma_cap_hat, double aH_qhatinv_a,
                                    std::size_t secondary_count, std::size_t elements);

}  // namespace caponplus
