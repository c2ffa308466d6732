#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "caponplus/array_model.h"
#include "caponplus/linalg.h"
#include "caponplus/waveform_kind.h"

namespace caponplus {

enum class StreamRole : std::uint64_t { Soi = 1, Interference = 2, Noise = 3, Secondary = 4 };

/// Seed for one (master_seed, trial_index, role) sub-stream. splitmix64 finaliser
/// applied to each field in turn; stable across platforms.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                                 StreamRole role);

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t trial_index, StreamRole role);

  /// CN(0, 1): independent N(0, 1/2) real and imaginary parts.
  cdouble circular_gaussian();
  /// Uniform on {0, ..., count - 1}.
  int uniform_index(int count);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> half_normal_;
};

/// Independent sub-streams owned by one Monte-Carlo trial.
struct TrialStreams {
  TrialStreams(std::uint64_t master_seed, std::uint64_t trial_index);

  RngStream soi;
  RngStream interference;
  RngStream noise;
  RngStream secondary;
};

/// T snapshots of dimension M stored snapshot-major.
struct SnapshotBatch {
  std::size_t elements = 0;
  std::size_t count = 0;
  std::vector<cdouble> data;
  ComplexVector truth;  // s(t); empty when contains_soi is false
  bool contains_soi = false;

  VectorView snapshot(std::size_t t) const { return {data.data() + t * elements, elements}; }
};

/// CircularGaussian: CN(0, gamma). Psk8: sqrt(gamma) exp(j 2 pi k / 8), k uniform.
ComplexVector draw_waveform(WaveformKind kind, double gamma, std::size_t count, RngStream& rng);

/// e(t) = L z(t), z(t) ~ CN(0, I).
SnapshotBatch draw_interference_noise(const CholeskyFactor& q_factor, std::size_t count,
                                      RngStream& rng);

/// e(t) = sum_k s_k(t) a_k + n(t), interferer waveforms of `kind`, n(t) ~ CN(0, sigma^2 I).
SnapshotBatch draw_scene_interference(const CovarianceModel& model, WaveformKind kind,
                                      std::size_t count, RngStream& interference_rng,
                                      RngStream& noise_rng);

/// x(t) = s(t) a + e(t), SOI and interference from separate sub-streams.
SnapshotBatch synth_snapshots(const CovarianceModel& model, WaveformKind kind, std::size_t count,
                              TrialStreams& streams);

/// SOI-free batch from CN(0, Q).
SnapshotBatch synth_secondary(const CholeskyFactor& q_factor, std::size_t count, RngStream& rng);

/// SOI-free batch from the scene's interferers and noise, drawn on one stream.
SnapshotBatch synth_secondary(const CovarianceModel& model, WaveformKind kind, std::size_t count,
                              RngStream& rng);

}  // namespace caponplus
