#include "caponplus/array_model.h"

#include <cmath>
#include <numbers>
#include <string>

namespace caponplus {

namespace {

void check_doa(double doa_deg) {
  if (!(doa_deg >= -90.0 && doa_deg < 90.0)) {
    throw DomainError("DOA " + std::to_string(doa_deg) + " deg outside [-90, 90)");
  }
}

void check_snapshots(int snapshots) {
  if (snapshots < 1) throw DomainError("snapshot count must be >= 1");
}

}  // namespace

void ArrayGeometry::validate() const {
  if (elements < 2) throw DomainError("array needs at least 2 elements");
  if (!(spacing_wavelengths > 0.0)) throw DomainError("element spacing must be positive");
}

void SourceScene::validate() const {
  if (!(noise_var > 0.0)) throw DomainError("noise variance must be positive");
  // A zero-power SOI is admitted so that Sigma = Q can be represented.
  if (!(soi.power >= 0.0)) throw DomainError("SOI power must be non-negative");
  check_doa(soi.doa_deg);
  for (std::size_t k = 0; k < interferers.size(); ++k) {
    const auto& s = interferers[k];
    check_doa(s.doa_deg);
    if (!(s.power > 0.0)) throw DomainError("interferer power must be positive");
    if (s.doa_deg == soi.doa_deg) throw DomainError("interferer DOA coincides with the SOI");
    for (std::size_t j = 0; j < k; ++j) {
      if (interferers[j].doa_deg == s.doa_deg) throw DomainError("duplicate interferer DOA");
    }
  }
}

ComplexVector steering_vector(const ArrayGeometry& geom, double doa_deg) {
  geom.validate();
  check_doa(doa_deg);
  const double phase_step = 2.0 * std::numbers::pi * geom.spacing_wavelengths *
                            std::sin(doa_deg * std::numbers::pi / 180.0);
  ComplexVector a(geom.elements);
  for (std::size_t m = 0; m < geom.elements; ++m) {
    a[m] = std::polar(1.0, -static_cast<double>(m) * phase_step);
  }
  return a;
}

HermitianMatrix build_incm(const ArrayGeometry& geom, const SourceScene& scene) {
  geom.validate();
  scene.validate();
  HermitianMatrix q = HermitianMatrix::identity(geom.elements, scene.noise_var);
  for (const auto& s : scene.interferers) q.add_outer(s.power, steering_vector(geom, s.doa_deg));
  q.set_posdef_hint(true);
  return q;
}

CovarianceModel build_cov_model(const ArrayGeometry& geom, const SourceScene& scene) {
  CovarianceModel model;
  model.incm = build_incm(geom, scene);
  model.steering = steering_vector(geom, scene.soi.doa_deg);
  model.gamma = scene.soi.power;
  model.full = model.incm;
  model.full.add_outer(model.gamma, model.steering);

  model.incm_factor = cholesky(model.incm);
  model.qinv_a = model.incm_factor.solve(model.steering);
  model.aH_qinv_a = hermitian_real(inner(model.steering, model.qinv_a));

  for (const auto& s : scene.interferers) {
    model.interferer_steering.push_back(steering_vector(geom, s.doa_deg));
    model.interferer_powers.push_back(s.power);
  }
  model.noise_var = scene.noise_var;
  return model;
}

double capon_output_power(const CovarianceModel& model) {
  const ComplexVector sinv_a = solve_hpd(model.full, model.steering);
  return 1.0 / hermitian_real(inner(model.steering, sinv_a));
}

double capon_bias(const CovarianceModel& model) {
  if (!(model.aH_qinv_a > 0.0)) throw NonPositiveQuadraticForm("capon_bias: a^H Q^{-1} a <= 0");
  return 1.0 / model.aH_qinv_a;
}

double single_interferer_capon_bias(const ArrayGeometry& geom, double soi_doa_deg,
                                    const SourceSpec& interferer, double noise_var) {
  const ComplexVector a = steering_vector(geom, soi_doa_deg);
  const ComplexVector a_i = steering_vector(geom, interferer.doa_deg);
  const double inr = interferer.power / noise_var;
  const double m = static_cast<double>(geom.elements);
  const double overlap = std::norm(inner(a, a_i));
  const double inr_array = m * inr;  // ||a_I||^2 INR
  return noise_var * (1.0 + inr_array) / (m * (1.0 + inr_array) - overlap * inr);
}

TheoryReport theory_report(const CovarianceModel& model, int snapshots) {
  check_snapshots(snapshots);
  const double t = snapshots;
  const double gamma = model.gamma;
  TheoryReport r;
  r.capon_bias = capon_bias(model);
  r.gamma_cap = gamma + r.capon_bias;
  r.gamma_mmse = gamma * gamma / r.gamma_cap;
  r.mmse_bias = r.gamma_mmse - gamma;
  r.capon_waveform_mse = r.capon_bias;
  r.mmse_waveform_mse = (gamma / r.gamma_cap) * (r.gamma_cap - gamma);
  r.tau = t / (t + 1.0);
  r.delta_o = r.tau;
  r.alpha_o = (gamma / r.gamma_cap) * r.tau;
  r.mse_min = gamma * gamma / (t + 1.0);
  return r;
}

ShrinkageTheory alpha_from_kurtosis(double gamma, double gamma_cap, int snapshots, double kurtosis) {
  check_snapshots(snapshots);
  if (!(gamma_cap > 0.0)) throw DomainError("alpha_from_kurtosis: gamma_cap must be positive");
  const double denom = kurtosis + snapshots + 1.0;
  if (!(denom > 0.0)) throw DomainError("alpha_from_kurtosis: kurt + T + 1 <= 0");
  ShrinkageTheory out;
  out.tau = snapshots / denom;
  out.alpha = out.tau * gamma / gamma_cap;
  return out;
}

double waveform_mse_theory(const CovarianceModel& model, VectorView w) {
  const double power = quadratic_form(model.full, w);
  return power + model.gamma * (1.0 - 2.0 * inner(w, model.steering).real());
}

double waveform_mse_theory_incm_form(const CovarianceModel& model, VectorView w) {
  const double noise = quadratic_form(model.incm, w);
  return noise + model.gamma * std::norm(inner(w, model.steering) - 1.0);
}

double bias_theory(const CovarianceModel& model, VectorView w) {
  const double gain = std::norm(inner(w, model.steering));
  return model.gamma * (gain - 1.0) + quadratic_form(model.incm, w);
}

double power_variance_gaussian(const CovarianceModel& model, VectorView w, int snapshots) {
  check_snapshots(snapshots);
  const double p = quadratic_form(model.full, w);
  return p * p / snapshots;
}

namespace {

double fourth_cumulant(const CovarianceModel& model, WaveformKind kind, VectorView w) {
  const double kappa = source_kurtosis(kind);
  if (kappa == 0.0) return 0.0;
  double c4 = kappa * model.gamma * model.gamma * std::pow(std::norm(inner(w, model.steering)), 2);
  for (std::size_t k = 0; k < model.interferer_steering.size(); ++k) {
    const double g = model.interferer_powers[k];
    c4 += kappa * g * g * std::pow(std::norm(inner(w, model.interferer_steering[k])), 2);
  }
  return c4;
}

}  // namespace

double output_kurtosis(const CovarianceModel& model, WaveformKind kind, VectorView w) {
  const double p = quadratic_form(model.full, w);
  if (!(p > 0.0)) throw DegenerateSample("output_kurtosis: zero output power");
  return fourth_cumulant(model, kind, w) / (p * p);
}

FixedWeightTheory fixed_weight_theory(const CovarianceModel& model, WaveformKind kind,
                                      VectorView w, int snapshots) {
  check_snapshots(snapshots);
  FixedWeightTheory out;
  out.expected_power = quadratic_form(model.full, w);
  out.bias = bias_theory(model, w);
  out.waveform_mse = waveform_mse_theory(model, w);
  // E|y|^4 = 2 p^2 + c4 for circular y
  const double p = out.expected_power;
  out.power_variance = (p * p + fourth_cumulant(model, kind, w)) / snapshots;
  return out;
}

}  // namespace caponplus
