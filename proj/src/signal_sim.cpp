#include "caponplus/signal_sim.h"

#include <cmath>
#include <numbers>

namespace caponplus {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_count(std::size_t count) {
  if (count == 0) throw DomainError("sample count must be >= 1");
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                                 StreamRole role) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ trial_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trial_index, StreamRole role)
    : engine_(derive_stream_seed(master_seed, trial_index, role)),
      half_normal_(0.0, std::sqrt(0.5)) {}

cdouble RngStream::circular_gaussian() {
  const double re = half_normal_(engine_);
  const double im = half_normal_(engine_);
  return {re, im};
}

int RngStream::uniform_index(int count) {
  return std::uniform_int_distribution<int>(0, count - 1)(engine_);
}

TrialStreams::TrialStreams(std::uint64_t master_seed, std::uint64_t trial_index)
    : soi(master_seed, trial_index, StreamRole::Soi),
      interference(master_seed, trial_index, StreamRole::Interference),
      noise(master_seed, trial_index, StreamRole::Noise),
      secondary(master_seed, trial_index, StreamRole::Secondary) {}

ComplexVector draw_waveform(WaveformKind kind, double gamma, std::size_t count, RngStream& rng) {
  check_count(count);
  if (!(gamma >= 0.0)) throw DomainError("draw_waveform: power must be non-negative");
  ComplexVector s(count);
  const double amplitude = std::sqrt(gamma);
  switch (kind) {
    case WaveformKind::CircularGaussian:
      for (auto& v : s) v = amplitude * rng.circular_gaussian();
      break;
    case WaveformKind::Psk8:
      for (auto& v : s) {
        v = std::polar(amplitude, 2.0 * std::numbers::pi * rng.uniform_index(8) / 8.0);
      }
      break;
  }
  return s;
}

SnapshotBatch draw_interference_noise(const CholeskyFactor& q_factor, std::size_t count,
                                      RngStream& rng) {
  check_count(count);
  const std::size_t m = q_factor.dim();
  SnapshotBatch batch;
  batch.elements = m;
  batch.count = count;
  batch.data.resize(m * count);
  ComplexVector z(m);
  for (std::size_t t = 0; t < count; ++t) {
    for (auto& v : z) v = rng.circular_gaussian();
    const ComplexVector e = q_factor.multiply(z);
    std::copy(e.begin(), e.end(), batch.data.begin() + static_cast<std::ptrdiff_t>(t * m));
  }
  return batch;
}

SnapshotBatch draw_scene_interference(const CovarianceModel& model, WaveformKind kind,
                                      std::size_t count, RngStream& interference_rng,
                                      RngStream& noise_rng) {
  check_count(count);
  const std::size_t m = model.steering.size();
  SnapshotBatch batch;
  batch.elements = m;
  batch.count = count;
  batch.data.resize(m * count);

  const double sigma = std::sqrt(model.noise_var);
  for (std::size_t t = 0; t < count; ++t) {
    cdouble* x = batch.data.data() + t * m;
    for (std::size_t i = 0; i < m; ++i) x[i] = sigma * noise_rng.circular_gaussian();
  }
  for (std::size_t k = 0; k < model.interferer_steering.size(); ++k) {
    const ComplexVector s = draw_waveform(kind, model.interferer_powers[k], count, interference_rng);
    const ComplexVector& a = model.interferer_steering[k];
    for (std::size_t t = 0; t < count; ++t) {
      cdouble* x = batch.data.data() + t * m;
      for (std::size_t i = 0; i < m; ++i) x[i] += s[t] * a[i];
    }
  }
  return batch;
}

SnapshotBatch synth_snapshots(const CovarianceModel& model, WaveformKind kind, std::size_t count,
                              TrialStreams& streams) {
  SnapshotBatch batch =
      draw_scene_interference(model, kind, count, streams.interference, streams.noise);
  batch.truth = draw_waveform(kind, model.gamma, count, streams.soi);
  const std::size_t m = batch.elements;
  for (std::size_t t = 0; t < count; ++t) {
    cdouble* x = batch.data.data() + t * m;
    for (std::size_t i = 0; i < m; ++i) x[i] += batch.truth[t] * model.steering[i];
  }
  batch.contains_soi = true;
  return batch;
}

SnapshotBatch synth_secondary(const CholeskyFactor& q_factor, std::size_t count, RngStream& rng) {
  return draw_interference_noise(q_factor, count, rng);
}

SnapshotBatch synth_secondary(const CovarianceModel& model, WaveformKind kind, std::size_t count,
                              RngStream& rng) {
  return draw_scene_interference(model, kind, count, rng, rng);
}

}  // namespace caponplus
