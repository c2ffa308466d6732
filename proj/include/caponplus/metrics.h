#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "caponplus/linalg.h"

namespace caponplus {

/// Methods reported per trial. Declaration order is the canonical output order.
enum class Method { CB, Capon, MMSE, CaponPlus, Debiased };

std::string_view to_string(Method method);

struct TrialRecord {
  Method method = Method::Capon;
  std::size_t trial_index = 0;
  double rel_bias = 0.0;  // (gamma_hat - gamma) / gamma
  double se_nmse = 0.0;
  double sp_nmse = 0.0;
  double alpha_used = 1.0;
};

struct AggregateRecord {
  std::string method;
  double mean_rel_bias = 0.0;
  double stderr_rel_bias = 0.0;
  double mean_se_nmse = 0.0;
  double stderr_se_nmse = 0.0;
  double mean_sp_nmse = 0.0;
  double stderr_sp_nmse = 0.0;
  std::size_t n_trials = 0;
  std::size_t n_failed = 0;
};

double relative_bias(double gamma_hat, double gamma);

/// sum |s_hat - s|^2 / sum |s|^2
double se_nmse(VectorView s_hat, VectorView s);

/// (gamma_hat - gamma)^2 / gamma^2
double sp_nmse(double gamma_hat, double gamma);

/// Mean and standard error (sample std / sqrt(n)) per method.
///
/// Records are summed in ascending trial_index order whatever the input order,
/// so the output is bitwise reproducible. Throws InsufficientTrials when a
/// method has fewer than two records.
std::vector<AggregateRecord> aggregate(const std::vector<TrialRecord>& records);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Two-pass mean and standard error of `values` in the given order.
MeanStderr mean_and_stderr(std::span<const double> values);

}  // namespace caponplus
