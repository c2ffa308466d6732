#include "caponplus/beamformers.h"

#include <algorithm>
#include <cmath>

namespace caponplus {

std::string_view to_string(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::CB: return "CB";
    case BeamformerKind::Capon: return "Capon";
    case BeamformerKind::MMSE: return "MMSE";
    case BeamformerKind::CaponPlus: return "CaponPlus";
  }
  return "?";
}

SteeringFingerprint SteeringFingerprint::of(VectorView a) {
  SteeringFingerprint f;
  f.norm_sq = squared_norm(a);
  if (!a.empty()) {
    f.first = a.front();
    f.middle = a[a.size() / 2];
    f.last = a.back();
  }
  return f;
}

bool SteeringFingerprint::matches(VectorView a) const {
  if (a.empty()) return norm_sq == 0.0;
  constexpr double kTol = 1e-12;
  return std::abs(squared_norm(a) - norm_sq) <= kTol * std::max(1.0, norm_sq) &&
         std::abs(a.front() - first) <= kTol && std::abs(a[a.size() / 2] - middle) <= kTol &&
         std::abs(a.back() - last) <= kTol;
}

double unit_gain_error(const BeamformerWeights& weights, VectorView a) {
  if (!weights.steering.matches(a)) {
    throw DomainError("unit_gain_error: weight was built for a different steering vector");
  }
  return std::abs(inner(weights.w, a) - 1.0);
}

ShrinkageFactor ShrinkageFactor::from_alpha(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("shrinkage factor alpha must be non-negative");
  return {alpha, std::sqrt(alpha)};
}

BeamformerWeights cb_weights(VectorView a) {
  const double n2 = squared_norm(a);
  if (!(n2 > 0.0)) throw DomainError("cb_weights: zero steering vector");
  return {scaled(a, 1.0 / n2), BeamformerKind::CB, true, SteeringFingerprint::of(a)};
}

namespace {

BeamformerWeights capon_from_solution(const ComplexVector& cinv_a, VectorView a) {
  const double denom = hermitian_real(inner(a, cinv_a));
  if (!(denom > 0.0)) throw NonPositiveQuadraticForm("capon_weights: a^H C^{-1} a <= 0");
  return {scaled(cinv_a, 1.0 / denom), BeamformerKind::Capon, true, SteeringFingerprint::of(a)};
}

}  // namespace

BeamformerWeights capon_weights(const HermitianMatrix& cov, VectorView a) {
  return capon_from_solution(solve_hpd(cov, a), a);
}

BeamformerWeights capon_weights(const CholeskyFactor& cov_factor, VectorView a) {
  return capon_from_solution(cov_factor.solve(a), a);
}

BeamformerWeights mmse_weights(double gamma, const HermitianMatrix& cov_or_incm, VectorView a,
                               bool use_incm_form) {
  if (!(gamma >= 0.0)) throw DomainError("mmse_weights: gamma must be non-negative");
  const ComplexVector cinv_a = solve_hpd(cov_or_incm, a);
  BeamformerWeights out{{}, BeamformerKind::MMSE, false, SteeringFingerprint::of(a)};
  if (use_incm_form) {
    const double aqa = hermitian_real(inner(a, cinv_a));
    const Rank1Inverse upd = rank1_update_inverse(cinv_a, aqa, gamma);
    out.w = scaled(upd.minv_a, gamma);
  } else {
    out.w = scaled(cinv_a, gamma);
  }
  return out;
}

BeamformerWeights capon_plus_weights(const BeamformerWeights& w_cap, const ShrinkageFactor& shrink) {
  if (w_cap.kind != BeamformerKind::Capon) {
    throw DomainError("capon_plus_weights: input must be a Capon weight");
  }
  const ShrinkageFactor checked = ShrinkageFactor::from_alpha(shrink.alpha);
  return {scaled(w_cap.w, checked.beta), BeamformerKind::CaponPlus, false, w_cap.steering};
}

AdaptiveCapon adaptive_capon_weights(const HermitianMatrix& scm, VectorView a) {
  const ComplexVector sinv_a = solve_hpd(scm, a);
  AdaptiveCapon out;
  out.weights = capon_from_solution(sinv_a, a);
  out.gamma_cap_hat = 1.0 / hermitian_real(inner(a, sinv_a));
  return out;
}

ComplexVector beamform(VectorView w, const SnapshotBatch& batch) {
  if (w.size() != batch.elements) {
    throw DimensionMismatch("beamform: weight length does not match snapshot dimension");
  }
  ComplexVector out(batch.count);
  for (std::size_t t = 0; t < batch.count; ++t) out[t] = inner(w, batch.snapshot(t));
  return out;
}

ComplexVector beamform(const BeamformerWeights& weights, const SnapshotBatch& batch) {
  return beamform(weights.w, batch);
}

}  // namespace caponplus
