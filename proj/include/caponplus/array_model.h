#pragma once

#include <cstddef>
#include <vector>

#include "caponplus/linalg.h"
#include "caponplus/waveform_kind.h"

namespace caponplus {

/// Uniform linear array.
struct ArrayGeometry {
  std::size_t elements = 25;
  double spacing_wavelengths = 0.5;

  void validate() const;
};

struct SourceSpec {
  double doa_deg = 0.0;
  double power = 1.0;  // linear
};

struct SourceScene {
  SourceSpec soi;
  std::vector<SourceSpec> interferers;
  double noise_var = 1.0;

  void validate() const;
};

/// Sigma = gamma a a^H + Q together with the pieces it was built from.
struct CovarianceModel {
  ComplexVector steering;
  double gamma = 0.0;
  HermitianMatrix incm;
  HermitianMatrix full;

  CholeskyFactor incm_factor;
  ComplexVector qinv_a;     // Q^{-1} a
  double aH_qinv_a = 0.0;   // a^H Q^{-1} a

  std::vector<ComplexVector> interferer_steering;
  std::vector<double> interferer_powers;
  double noise_var = 1.0;
};

struct TheoryReport {
  double gamma_cap = 0.0;
  double gamma_mmse = 0.0;
  double capon_bias = 0.0;
  double mmse_bias = 0.0;
  double capon_waveform_mse = 0.0;
  double mmse_waveform_mse = 0.0;
  double alpha_o = 0.0;
  double tau = 0.0;
  double mse_min = 0.0;
  double delta_o = 0.0;
};

struct ShrinkageTheory {
  double alpha = 0.0;
  double tau = 0.0;
};

/// Element m is exp(-j m 2 pi (d/lambda) sin(theta)). DOA in degrees, [-90, 90).
ComplexVector steering_vector(const ArrayGeometry& geom, double doa_deg);

/// Q = sum_k gamma_k a_k a_k^H + sigma^2 I
HermitianMatrix build_incm(const ArrayGeometry& geom, const SourceScene& scene);

CovarianceModel build_cov_model(const ArrayGeometry& geom, const SourceScene& scene);

/// 1 / (a^H Sigma^{-1} a), solved against the full covariance.
double capon_output_power(const CovarianceModel& model);

/// (a^H Q^{-1} a)^{-1}
double capon_bias(const CovarianceModel& model);

/// Closed-form Capon bias for Q = gamma_I a_I a_I^H + sigma^2 I:
/// sigma^2 (1 + M INR) / (M (1 + M INR) - |a^H a_I|^2 INR), INR = gamma_I / sigma^2.
double single_interferer_capon_bias(const ArrayGeometry& geom, double soi_doa_deg,
                                    const SourceSpec& interferer, double noise_var);

/// Closed-form quantities under Gaussian snapshots.
TheoryReport theory_report(const CovarianceModel& model, int snapshots);

ShrinkageTheory alpha_from_kurtosis(double gamma, double gamma_cap, int snapshots, double kurtosis);

/// w^H Sigma w + gamma (1 - 2 Re[w^H a])
double waveform_mse_theory(const CovarianceModel& model, VectorView w);
/// w^H Q w + gamma |w^H a - 1|^2, evaluated independently of the form above.
double waveform_mse_theory_incm_form(const CovarianceModel& model, VectorView w);

/// gamma (|w^H a|^2 - 1) + w^H Q w
double bias_theory(const CovarianceModel& model, VectorView w);

/// (w^H Sigma w)^2 / T
double power_variance_gaussian(const CovarianceModel& model, VectorView w, int snapshots);

/// Population kurtosis of w^H x(t) when every source (SOI and interferers)
/// follows `kind` and the noise is circular Gaussian. Uses additivity of the
/// fourth cumulant over independent circular components.
double output_kurtosis(const CovarianceModel& model, WaveformKind kind, VectorView w);

/// Exact moments of the power estimate for a fixed weight.
struct FixedWeightTheory {
  double expected_power = 0.0;  // w^H Sigma w
  double bias = 0.0;
  double waveform_mse = 0.0;
  double power_variance = 0.0;  // (E|w^H x|^4 - (w^H Sigma w)^2) / T
};

FixedWeightTheory fixed_weight_theory(const CovarianceModel& model, WaveformKind kind,
                                      VectorView w, int snapshots);

}  // namespace caponplus
