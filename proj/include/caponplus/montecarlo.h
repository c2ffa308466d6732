#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "caponplus/array_model.h"
#include "caponplus/beamformers.h"
#include "caponplus/metrics.h"
#include "caponplus/waveform_kind.h"

namespace caponplus {

inline constexpr const char* kVersion = "caponplus 1.0.0";

/// Oracle: true Sigma, Q, gamma. A: Q known, gamma estimated. B: SCM of the
/// primary snapshots, gamma known. C: Q from secondary data, gamma known.
/// D: as C with gamma estimated.
enum class Regime { Oracle, A, B, C, D };

enum class SweepVariable { SnrDb, SecondarySnapshots, Alpha };

/// How the oracle Capon+ obtains the output kurtosis: exact population value
/// for the configured sources, or the constant-modulus shortcut kurt = -1.
enum class OracleKurtosis { Exact, ConstantModulus };

std::string_view to_string(Regime regime);
std::string_view to_string(SweepVariable variable);

struct InterfererTemplate {
  double doa_deg = 0.0;
  double offset_db = 0.0;  // power below the SOI
};

/// Source layout with interferer powers tied to the SOI power.
struct SceneTemplate {
  double soi_doa_deg = -45.02;
  std::vector<InterfererTemplate> interferers = {{-30.02, 2.0}, {-20.02, 4.0}, {-3.0, 6.0}};
  double noise_var = 1.0;
};

/// SOI power 10^(snr/10) relative to the noise; interferer k at SOI power
/// times 10^(-offset_k/10).
SourceScene snr_to_scene(const SceneTemplate& base, double snr_db);

struct Sweep {
  SweepVariable variable = SweepVariable::SnrDb;
  std::vector<double> values;
};

struct ScenarioConfig {
  Regime regime = Regime::Oracle;
  ArrayGeometry geom;
  SceneTemplate scene;
  WaveformKind waveform = WaveformKind::CircularGaussian;
  OracleKurtosis oracle_kurtosis = OracleKurtosis::Exact;
  int snapshots = 60;
  int secondary_snapshots = 0;  // regimes C and D
  double snr_db = 0.0;          // used when the sweep is not over SNR
  std::size_t trials = 15000;
  std::uint64_t master_seed = 1;
  Sweep sweep;
  bool emit_theory = false;

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing all violations.
  void validate() const;
};

struct SweepPointReport {
  double sweep_value = 0.0;
  std::vector<AggregateRecord> aggregates;
  std::size_t n_failed = 0;
};

struct ScenarioReport {
  ScenarioConfig config;
  std::vector<SweepPointReport> points;
  double wall_time_s = 0.0;
  std::string version = kVersion;
};

/// Thrown by run_scenario when more than 1% of the trials at a sweep point fail.
class TrialFailures : public Error {
 public:
  TrialFailures(const std::string& what, ScenarioReport report)
      : Error(what), report_(std::move(report)) {}
  const ScenarioReport& report() const noexcept { return report_; }

 private:
  ScenarioReport report_;
};

/// Everything about one sweep point that does not depend on the trial.
class ScenarioPoint {
 public:
  ScenarioPoint(const ScenarioConfig& config, double sweep_value);

  /// One record per method. Throws caponplus::Error if the trial degenerates
  /// (e.g. a singular sample covariance).
  std::vector<TrialRecord> run_trial(std::size_t trial_index) const;

  /// Closed-form rows for the known-statistics beamformers ("<method>_theory").
  std::vector<AggregateRecord> theory_rows() const;

  const CovarianceModel& model() const noexcept { return model_; }
  int snapshots() const noexcept { return snapshots_; }
  std::size_t secondary_snapshots() const noexcept { return secondary_; }
  double oracle_alpha() const noexcept { return oracle_alpha_; }

 private:
  std::vector<TrialRecord> oracle_trial(std::size_t trial_index) const;
  std::vector<TrialRecord> scenario_a_trial(std::size_t trial_index) const;
  std::vector<TrialRecord> scenario_b_trial(std::size_t trial_index) const;
  std::vector<TrialRecord> secondary_data_trial(std::size_t trial_index) const;

  ScenarioConfig config_;
  CovarianceModel model_;
  int snapshots_ = 0;
  std::size_t secondary_ = 0;
  BeamformerWeights w_cb_;
  BeamformerWeights w_cap_;
  BeamformerWeights w_mmse_;
  double oracle_alpha_ = 1.0;
};

std::vector<TrialRecord> run_trial(const ScenarioConfig& config, double sweep_value,
                                   std::size_t trial_index);

/// Closed-form row for the fixed-statistics estimator alpha * gamma_cap_hat.
std::vector<AggregateRecord> alpha_sweep_rows(const ScenarioConfig& config, double alpha);

struct RunOptions {
  unsigned threads = 1;
};

/// Trials run in parallel; aggregation is sequential in trial order, so the
/// report (apart from wall time) does not depend on the thread count.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace caponplus
