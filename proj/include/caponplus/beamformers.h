#pragma once

#include <string_view>

#include "caponplus/linalg.h"
#include "caponplus/signal_sim.h"

namespace caponplus {

enum class BeamformerKind { CB, Capon, MMSE, CaponPlus };

std::string_view to_string(BeamformerKind kind);

/// Cheap identity of the steering vector a weight was designed for.
struct SteeringFingerprint {
  double norm_sq = 0.0;
  cdouble first{};
  cdouble middle{};
  cdouble last{};

  static SteeringFingerprint of(VectorView a);
  bool matches(VectorView a) const;
};

struct BeamformerWeights {
  ComplexVector w;
  BeamformerKind kind = BeamformerKind::Capon;
  bool unit_gain = false;  // w^H a = 1
  SteeringFingerprint steering;
};

/// |w^H a - 1|. Throws DomainError when `a` is not the vector the weight was built with.
double unit_gain_error(const BeamformerWeights& weights, VectorView a);

struct ShrinkageFactor {
  double alpha = 1.0;
  double beta = 1.0;  // sqrt(alpha)

  static ShrinkageFactor from_alpha(double alpha);
};

/// a / ||a||^2
BeamformerWeights cb_weights(VectorView a);

/// cov^{-1} a / (a^H cov^{-1} a); `cov` may be Sigma or Q.
BeamformerWeights capon_weights(const HermitianMatrix& cov, VectorView a);
BeamformerWeights capon_weights(const CholeskyFactor& cov_factor, VectorView a);

/// gamma Sigma^{-1} a, or with use_incm_form the Q-based
/// gamma Q^{-1} a / (1 + gamma a^H Q^{-1} a).
BeamformerWeights mmse_weights(double gamma, const HermitianMatrix& cov_or_incm, VectorView a,
                               bool use_incm_form);

/// beta * w_cap
BeamformerWeights capon_plus_weights(const BeamformerWeights& w_cap, const ShrinkageFactor& shrink);

struct AdaptiveCapon {
  BeamformerWeights weights;
  double gamma_cap_hat = 0.0;  // (a^H scm^{-1} a)^{-1}
};

/// Weight and power from the SCM of the same snapshots.
AdaptiveCapon adaptive_capon_weights(const HermitianMatrix& scm, VectorView a);

/// s_hat(t) = w^H x(t)
ComplexVector beamform(const BeamformerWeights& weights, const SnapshotBatch& batch);
ComplexVector beamform(VectorView w, const SnapshotBatch& batch);

}  // namespace caponplus
