// Copyright 2026 The pooltest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Diagnostic accuracy: confusion-matrix summaries, single-batch closed forms
// and Bayes predictive values.

#ifndef POOLTEST_METRICS_HPP_
#define POOLTEST_METRICS_HPP_

#include <optional>

#include "pooltest/probability.hpp"

namespace pooltest {

/// nullopt marks a ratio with an empty denominator.
using Measure = std::optional<double>;

/// Counts, or probabilities when built analytically.
struct ConfusionMatrix {
  double true_positive = 0.0;
  double false_positive = 0.0;
  double true_negative = 0.0;
  double false_negative = 0.0;

  double total() const {
    return true_positive + false_positive + true_negative + false_negative;
  }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

struct AccuracyMeasures {
  Measure accuracy;
  Measure sensitivity;
  Measure specificity;
  Measure ppv;
  Measure npv;
};

/// Throws InvalidArgument on negative cells.
AccuracyMeasures summarize(const ConfusionMatrix& cm);

/// 1 - beta(2 - beta): a positive person is found only if both the pooled
/// test and the follow-up individual test are positive.
double single_batch_sensitivity(const ErrorModel& err);

/// (1 - alpha + alpha beta) + alpha (1 - alpha - beta) (1 - p)^(n - 1).
double single_batch_specificity(int n, double p, const ErrorModel& err);

struct PredictiveValues {
  Measure ppv;
  Measure npv;
};

PredictiveValues ppv_npv(double p, double sensitivity, double specificity);
PredictiveValues single_batch_ppv_npv(int n, double p, const ErrorModel& err);

}  // namespace pooltest

#endif  // POOLTEST_METRICS_HPP_
