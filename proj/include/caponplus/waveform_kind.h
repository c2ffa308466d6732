#pragma once

namespace caponplus {

enum class WaveformKind { CircularGaussian, Psk8 };

/// Population kurtosis E|s|^4 / (E|s|^2)^2 - 2 of a single source.
constexpr double source_kurtosis(WaveformKind kind) {
  return kind == WaveformKind::Psk8 ? -1.0 : 0.0;
}

}  // namespace caponplus
