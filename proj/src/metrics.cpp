#include "caponplus/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "caponplus/errors.h"

namespace caponplus {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::CB: return "CB";
    case Method::Capon: return "Capon";
    case Method::MMSE: return "MMSE";
    case Method::CaponPlus: return "CaponPlus";
    case Method::Debiased: return "Debiased";
  }
  return "?";
}

double relative_bias(double gamma_hat, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("relative_bias: gamma must be positive");
  return (gamma_hat - gamma) / gamma;
}

double se_nmse(VectorView s_hat, VectorView s) {
  if (s_hat.size() != s.size()) throw DimensionMismatch("se_nmse: length mismatch");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    err += std::norm(s_hat[t] - s[t]);
    ref += std::norm(s[t]);
  }
  if (!(ref > 0.0)) throw DegenerateSample("se_nmse: reference waveform has zero energy");
  return err / ref;
}

double sp_nmse(double gamma_hat, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("sp_nmse: gamma must be positive");
  const double d = (gamma_hat - gamma) / gamma;
  return d * d;
}

MeanStderr mean_and_stderr(std::span<const double> values) {
  MeanStderr out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

std::vector<AggregateRecord> aggregate(const std::vector<TrialRecord>& records) {
  constexpr std::array kOrder = {Method::CB, Method::Capon, Method::MMSE, Method::CaponPlus,
                                 Method::Debiased};
  std::vector<AggregateRecord> out;
  for (Method method : kOrder) {
    std::vector<const TrialRecord*> rows;
    for (const auto& r : records) {
      if (r.method == method) rows.push_back(&r);
    }
    if (rows.empty()) continue;
    if (rows.size() < 2) {
      throw InsufficientTrials("aggregate: method " + std::string(to_string(method)) +
                               " has fewer than 2 trials");
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TrialRecord* a, const TrialRecord* b) {
      return a->trial_index < b->trial_index;
    });

    std::vector<double> bias, se, sp;
    bias.reserve(rows.size());
    se.reserve(rows.size());
    sp.reserve(rows.size());
    for (const TrialRecord* r : rows) {
      bias.push_back(r->rel_bias);
      se.push_back(r->se_nmse);
      sp.push_back(r->sp_nmse);
    }
    AggregateRecord agg;
    agg.method = std::string(to_string(method));
    const MeanStderr b = mean_and_stderr(bias);
    const MeanStderr s = mean_and_stderr(se);
    const MeanStderr p = mean_and_stderr(sp);
    agg.mean_rel_bias = b.mean;
    agg.stderr_rel_bias = b.stderr_;
    agg.mean_se_nmse = s.mean;
    agg.stderr_se_nmse = s.stderr_;
    agg.mean_sp_nmse = p.mean;
    agg.stderr_sp_nmse = p.stderr_;
    agg.n_trials = rows.size();
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace caponplus
