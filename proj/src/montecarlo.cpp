#include "caponplus/montecarlo.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include "caponplus/estimation.h"
#include "caponplus/signal_sim.h"

namespace caponplus {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Oracle: return "oracle";
    case Regime::A: return "a";
    case Regime::B: return "b";
    case Regime::C: return "c";
    case Regime::D: return "d";
  }
  return "?";
}

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::SnrDb: return "snr_db";
    case SweepVariable::SecondarySnapshots: return "secondary_snapshots";
    case SweepVariable::Alpha: return "alpha";
  }
  return "?";
}

SourceScene snr_to_scene(const SceneTemplate& base, double snr_db) {
  SourceScene scene;
  scene.noise_var = base.noise_var;
  scene.soi = {base.soi_doa_deg, std::pow(10.0, snr_db / 10.0)};
  for (const auto& i : base.interferers) {
    scene.interferers.push_back({i.doa_deg, scene.soi.power * std::pow(10.0, -i.offset_db / 10.0)});
  }
  return scene;
}

namespace {

bool uses_secondary(Regime r) { return r == Regime::C || r == Regime::D; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> out;
  const auto m = geom.elements;
  try {
    geom.validate();
  } catch (const Error& e) {
    out.push_back(std::string("array: ") + e.what());
  }
  try {
    snr_to_scene(scene, 0.0).validate();
  } catch (const Error& e) {
    out.push_back(std::string("scene: ") + e.what());
  }
  if (scene.noise_var != 1.0) out.push_back("noise_var: powers are relative to unit noise");
  if (snapshots < 1) out.push_back("snapshots: must be >= 1");
  if (regime == Regime::B && snapshots <= static_cast<int>(m)) {
    out.push_back("snapshots: regime B requires T > M (" + std::to_string(m) + ")");
  }
  if (sweep.values.empty()) out.push_back("sweep.values: must not be empty");

  const bool theory_only = sweep.variable == SweepVariable::Alpha;
  if (!theory_only && trials < 100) out.push_back("trials: must be >= 100");

  switch (sweep.variable) {
    case SweepVariable::SnrDb:
      for (double v : sweep.values) {
        if (!std::isfinite(v)) out.push_back("sweep.values: SNR must be finite");
      }
      if (uses_secondary(regime) && secondary_snapshots <= static_cast<int>(m)) {
        out.push_back("secondary_snapshots: regimes C/D require T0 > M (" + std::to_string(m) +
                      "), got " + std::to_string(secondary_snapshots));
      }
      break;
    case SweepVariable::SecondarySnapshots:
      if (!uses_secondary(regime)) {
        out.push_back("sweep.variable: secondary_snapshots sweep needs regime c or d");
      }
      for (double v : sweep.values) {
        if (v != std::floor(v) || v <= static_cast<double>(m)) {
          out.push_back("sweep.values: secondary_snapshots value " + fmt(v) +
                        " must be an integer T0 > M (" + std::to_string(m) + ")");
        }
      }
      break;
    case SweepVariable::Alpha:
      if (regime != Regime::Oracle) out.push_back("sweep.variable: alpha sweep needs regime oracle");
      for (double v : sweep.values) {
        if (!(v >= 0.0)) out.push_back("sweep.values: alpha " + fmt(v) + " must be >= 0");
      }
      break;
  }
  return out;
}

void ScenarioConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid scenario configuration:";
  for (const auto& s : v) msg += "\n  - " + s;
  throw ConfigError(msg);
}

ScenarioPoint::ScenarioPoint(const ScenarioConfig& config, double sweep_value) : config_(config) {
  double snr = config.snr_db;
  snapshots_ = config.snapshots;
  secondary_ = static_cast<std::size_t>(std::max(config.secondary_snapshots, 0));
  if (config.sweep.variable == SweepVariable::SnrDb) snr = sweep_value;
  if (config.sweep.variable == SweepVariable::SecondarySnapshots) {
    secondary_ = static_cast<std::size_t>(sweep_value);
  }
  model_ = build_cov_model(config.geom, snr_to_scene(config.scene, snr));

  w_cb_ = cb_weights(model_.steering);
  w_cap_ = capon_weights(model_.incm_factor, model_.steering);
  w_mmse_ = mmse_weights(model_.gamma, model_.full, model_.steering, false);

  const double gamma_cap = model_.gamma + capon_bias(model_);
  const double kurt = config.oracle_kurtosis == OracleKurtosis::ConstantModulus
                          ? -1.0
                          : output_kurtosis(model_, config.waveform, w_cap_.w);
  oracle_alpha_ = alpha_from_kurtosis(model_.gamma, gamma_cap, snapshots_, kurt).alpha;
}

namespace {

TrialRecord make_record(Method method, std::size_t trial, VectorView s_hat, VectorView truth,
                        double gamma_hat, double gamma, double alpha) {
  TrialRecord r;
  r.method = method;
  r.trial_index = trial;
  r.rel_bias = relative_bias(gamma_hat, gamma);
  r.se_nmse = se_nmse(s_hat, truth);
  r.sp_nmse = sp_nmse(gamma_hat, gamma);
  r.alpha_used = alpha;
  return r;
}

ComplexVector scaled_outputs(VectorView y, double factor) { return scaled(y, factor); }

}  // namespace

std::vector<TrialRecord> ScenarioPoint::run_trial(std::size_t trial_index) const {
  switch (config_.regime) {
    case Regime::Oracle: return oracle_trial(trial_index);
    case Regime::A: return scenario_a_trial(trial_index);
    case Regime::B: return scenario_b_trial(trial_index);
    case Regime::C:
    case Regime::D: return secondary_data_trial(trial_index);
  }
  return {};
}

std::vector<TrialRecord> ScenarioPoint::oracle_trial(std::size_t trial_index) const {
  TrialStreams streams(config_.master_seed, trial_index);
  const SnapshotBatch batch =
      synth_snapshots(model_, config_.waveform, static_cast<std::size_t>(snapshots_), streams);
  const double gamma = model_.gamma;
  const double mmse_scale = std::norm(inner(w_mmse_.w, model_.steering));

  const ComplexVector y_cb = beamform(w_cb_, batch);
  const ComplexVector y_cap = beamform(w_cap_, batch);
  const ComplexVector y_mmse = beamform(w_mmse_, batch);
  const BeamformerWeights w_plus =
      capon_plus_weights(w_cap_, ShrinkageFactor::from_alpha(oracle_alpha_));
  const ComplexVector y_plus = beamform(w_plus, batch);

  std::vector<TrialRecord> out;
  out.push_back(make_record(Method::CB, trial_index, y_cb, batch.truth,
                            output_moments(y_cb).power, gamma, 1.0));
  out.push_back(make_record(Method::Capon, trial_index, y_cap, batch.truth,
                            output_moments(y_cap).power, gamma, 1.0));
  out.push_back(make_record(Method::MMSE, trial_index, y_mmse, batch.truth,
                            output_moments(y_mmse).power, gamma, mmse_scale));
  out.push_back(make_record(Method::CaponPlus, trial_index, y_plus, batch.truth,
                            output_moments(y_plus).power, gamma, oracle_alpha_));
  return out;
}

std::vector<TrialRecord> ScenarioPoint::scenario_a_trial(std::size_t trial_index) const {
  TrialStreams streams(config_.master_seed, trial_index);
  const SnapshotBatch batch =
      synth_snapshots(model_, config_.waveform, static_cast<std::size_t>(snapshots_), streams);
  const double gamma = model_.gamma;

  const ComplexVector y_cap = beamform(w_cap_, batch);
  const OutputMoments mom = output_moments(y_cap);
  const double gamma_deb = debiased_power(mom.power, model_.aH_qinv_a).value;
  const ShrinkageFactor shrink = alpha_hat_scenario_a(mom.power, mom.fourth, gamma_deb, snapshots_);

  // MMSE weight with the debiased power in the Q-based form
  const Rank1Inverse upd = rank1_update_inverse(model_.qinv_a, model_.aH_qinv_a, gamma_deb);
  const ComplexVector w_mmse = scaled(upd.minv_a, gamma_deb);
  const ComplexVector y_mmse = beamform(w_mmse, batch);

  const ComplexVector y_plus = scaled_outputs(y_cap, shrink.beta);
  const double deb_scale = mom.power > 0.0 ? gamma_deb / mom.power : 0.0;
  const ComplexVector y_deb = scaled_outputs(y_cap, std::sqrt(deb_scale));

  std::vector<TrialRecord> out;
  out.push_back(make_record(Method::Capon, trial_index, y_cap, batch.truth, mom.power, gamma, 1.0));
  out.push_back(make_record(Method::MMSE, trial_index, y_mmse, batch.truth,
                            output_moments(y_mmse).power, gamma,
                            std::norm(inner(w_mmse, model_.steering))));
  out.push_back(make_record(Method::CaponPlus, trial_index, y_plus, batch.truth,
                            shrink.alpha * mom.power, gamma, shrink.alpha));
  out.push_back(make_record(Method::Debiased, trial_index, y_deb, batch.truth, gamma_deb, gamma,
                            deb_scale));
  return out;
}

std::vector<TrialRecord> ScenarioPoint::scenario_b_trial(std::size_t trial_index) const {
  TrialStreams streams(config_.master_seed, trial_index);
  const SnapshotBatch batch =
      synth_snapshots(model_, config_.waveform, static_cast<std::size_t>(snapshots_), streams);
  const double gamma = model_.gamma;

  const SampleCovariance sigma_hat = scm(batch);
  const AdaptiveCapon adaptive = adaptive_capon_weights(sigma_hat.matrix, model_.steering);
  const ComplexVector y_cap = beamform(adaptive.weights, batch);
  const OutputMoments mom = output_moments(y_cap);
  const ShrinkageFactor shrink =
      alpha_hat_scenario_b(adaptive.gamma_cap_hat, mom.fourth, gamma, snapshots_);

  // gamma Sigma_hat^{-1} a = (gamma / gamma_cap_hat) w_cap_hat
  const double mmse_gain = gamma / adaptive.gamma_cap_hat;
  const ComplexVector y_mmse = scaled_outputs(y_cap, mmse_gain);
  const ComplexVector y_plus = scaled_outputs(y_cap, shrink.beta);

  std::vector<TrialRecord> out;
  out.push_back(make_record(Method::Capon, trial_index, y_cap, batch.truth, mom.power, gamma, 1.0));
  out.push_back(make_record(Method::MMSE, trial_index, y_mmse, batch.truth,
                            mmse_gain * mmse_gain * mom.power, gamma, mmse_gain * mmse_gain));
  out.push_back(make_record(Method::CaponPlus, trial_index, y_plus, batch.truth,
                            shrink.alpha * mom.power, gamma, shrink.alpha));
  return out;
}

std::vector<TrialRecord> ScenarioPoint::secondary_data_trial(std::size_t trial_index) const {
  TrialStreams streams(config_.master_seed, trial_index);
  const SnapshotBatch batch =
      synth_snapshots(model_, config_.waveform, static_cast<std::size_t>(snapshots_), streams);
  const SnapshotBatch secondary =
      synth_secondary(model_, config_.waveform, secondary_, streams.secondary);
  const double gamma = model_.gamma;

  const SampleCovariance q_hat = scm(secondary);
  const BeamformerWeights w_cap = capon_weights(q_hat.matrix, model_.steering);
  const ComplexVector y_cap = beamform(w_cap, batch);
  const OutputMoments mom = output_moments(y_cap);
  if (!(mom.power > 0.0)) throw DegenerateSample("Capon output has zero power");

  std::vector<TrialRecord> out;
  out.push_back(make_record(Method::Capon, trial_index, y_cap, batch.truth, mom.power, gamma, 1.0));

  if (config_.regime == Regime::C) {
    const ShrinkageFactor shrink = alpha_hat_scenario_b(mom.power, mom.fourth, gamma, snapshots_);
    const double mmse_gain = gamma / mom.power;
    out.push_back(make_record(Method::MMSE, trial_index, scaled_outputs(y_cap, mmse_gain),
                              batch.truth, mmse_gain * mmse_gain * mom.power, gamma,
                              mmse_gain * mmse_gain));
    out.push_back(make_record(Method::CaponPlus, trial_index, scaled_outputs(y_cap, shrink.beta),
                              batch.truth, shrink.alpha * mom.power, gamma, shrink.alpha));
    return out;
  }

  // w^H Qhat w = 1 / (a^H Qhat^{-1} a) for the unit-gain Capon weight
  const double aH_qhatinv_a = 1.0 / quadratic_form(q_hat.matrix, w_cap.w);
  const double gamma_deb =
      debiased_power_scaled(mom.power, aH_qhatinv_a, secondary_, model_.steering.size()).value;
  const ShrinkageFactor shrink = alpha_hat_scenario_a(mom.power, mom.fourth, gamma_deb, snapshots_);
  const double mmse_gain = gamma_deb / mom.power;
  const double deb_scale = gamma_deb / mom.power;
  out.push_back(make_record(Method::MMSE, trial_index, scaled_outputs(y_cap, mmse_gain),
                            batch.truth, mmse_gain * mmse_gain * mom.power, gamma,
                            mmse_gain * mmse_gain));
  out.push_back(make_record(Method::CaponPlus, trial_index, scaled_outputs(y_cap, shrink.beta),
                            batch.truth, shrink.alpha * mom.power, gamma, shrink.alpha));
  out.push_back(make_record(Method::Debiased, trial_index,
                            scaled_outputs(y_cap, std::sqrt(deb_scale)), batch.truth, gamma_deb,
                            gamma, deb_scale));
  return out;
}

namespace {

AggregateRecord theory_row(const std::string& name, const CovarianceModel& model,
                           WaveformKind kind, VectorView w, int snapshots) {
  const FixedWeightTheory th = fixed_weight_theory(model, kind, w, snapshots);
  const double g = model.gamma;
  AggregateRecord r;
  r.method = name;
  r.mean_rel_bias = th.bias / g;
  r.mean_se_nmse = th.waveform_mse / g;
  r.mean_sp_nmse = (th.power_variance + th.bias * th.bias) / (g * g);
  return r;
}

}  // namespace

std::vector<AggregateRecord> ScenarioPoint::theory_rows() const {
  const BeamformerWeights w_plus =
      capon_plus_weights(w_cap_, ShrinkageFactor::from_alpha(oracle_alpha_));
  std::vector<AggregateRecord> rows;
  rows.push_back(theory_row("CB_theory", model_, config_.waveform, w_cb_.w, snapshots_));
  rows.push_back(theory_row("Capon_theory", model_, config_.waveform, w_cap_.w, snapshots_));
  rows.push_back(theory_row("MMSE_theory", model_, config_.waveform, w_mmse_.w, snapshots_));
  rows.push_back(theory_row("CaponPlus_theory", model_, config_.waveform, w_plus.w, snapshots_));
  return rows;
}

std::vector<TrialRecord> run_trial(const ScenarioConfig& config, double sweep_value,
                                   std::size_t trial_index) {
  return ScenarioPoint(config, sweep_value).run_trial(trial_index);
}

std::vector<AggregateRecord> alpha_sweep_rows(const ScenarioConfig& config, double alpha) {
  const CovarianceModel model = build_cov_model(config.geom, snr_to_scene(config.scene, config.snr_db));
  const BeamformerWeights w_cap = capon_weights(model.incm_factor, model.steering);
  const BeamformerWeights w = capon_plus_weights(w_cap, ShrinkageFactor::from_alpha(alpha));
  return {theory_row("CaponPlus", model, config.waveform, w.w, config.snapshots)};
}

namespace {

SweepPointReport run_point(const ScenarioConfig& config, double sweep_value, unsigned threads) {
  SweepPointReport report;
  report.sweep_value = sweep_value;
  if (config.sweep.variable == SweepVariable::Alpha) {
    report.aggregates = alpha_sweep_rows(config, sweep_value);
    return report;
  }

  const ScenarioPoint point(config, sweep_value);
  std::vector<std::optional<std::vector<TrialRecord>>> results(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      try {
        results[i] = point.run_trial(i);
      } catch (const Error&) {
        results[i].reset();
      }
    }
  };
  const unsigned n = std::max(1u, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  std::vector<TrialRecord> records;
  for (auto& r : results) {
    if (!r) {
      ++report.n_failed;
      continue;
    }
    records.insert(records.end(), r->begin(), r->end());
  }
  report.aggregates = aggregate(records);
  for (auto& a : report.aggregates) a.n_failed = report.n_failed;
  if (config.emit_theory) {
    auto rows = point.theory_rows();
    report.aggregates.insert(report.aggregates.end(), rows.begin(), rows.end());
  }
  return report;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport report;
  report.config = config;
  std::string failures;
  for (double v : config.sweep.values) {
    SweepPointReport point = run_point(config, v, options.threads);
    if (point.n_failed * 100 > config.trials && config.sweep.variable != SweepVariable::Alpha) {
      failures += "\n  " + std::string(to_string(config.sweep.variable)) + "=" + fmt(v) + ": " +
                  std::to_string(point.n_failed) + "/" + std::to_string(config.trials) +
                  " trials failed";
    }
    report.points.push_back(std::move(point));
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!failures.empty()) {
    throw TrialFailures("more than 1% of trials failed:" + failures, std::move(report));
  }
  return report;
}

}  // namespace caponplus
