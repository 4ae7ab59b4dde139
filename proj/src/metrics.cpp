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

#include "pooltest/metrics.hpp"

#include "pooltest/error.hpp"

namespace pooltest {
namespace {

Measure ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

void require_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  true_positive += o.true_positive;
  false_positive += o.false_positive;
  true_negative += o.true_negative;
  false_negative += o.false_negative;
  return *this;
}

AccuracyMeasures summarize(const ConfusionMatrix& cm) {
  if (cm.true_positive < 0 || cm.false_positive < 0 || cm.true_negative < 0 ||
      cm.false_negative < 0) {
    throw InvalidArgument("confusion matrix cells must be non-negative");
  }
  AccuracyMeasures m;
  m.accuracy = ratio(cm.true_positive + cm.true_negative, cm.total());
  m.sensitivity =
      ratio(cm.true_positive, cm.true_positive + cm.false_negative);
  m.specificity =
      ratio(cm.true_negative, cm.true_negative + cm.false_positive);
  m.ppv = ratio(cm.true_positive, cm.true_positive + cm.false_positive);
  m.npv = ratio(cm.true_negative, cm.true_negative + cm.false_negative);
  return m;
}

double single_batch_sensitivity(const ErrorModel& err) {
  const double b = err.beta();
  return 1.0 - b * (2.0 - b);
}

double single_batch_specificity(int n, double p, const ErrorModel& err) {
  if (n < 1) throw InvalidArgument("batch size must be at least 1");
  require_probability(p, "infection rate");
  const double a = err.alpha();
  return (1.0 - a + a * err.beta()) +
         a * err.discrimination() * pow_q(1.0 - p, n - 1);
}

PredictiveValues ppv_npv(double p, double se, double sp) {
  require_probability(p, "infection rate");
  require_probability(se, "sensitivity");
  require_probability(sp, "specificity");
  const double tp = se * p;
  const double fp = (1.0 - sp) * (1.0 - p);
  const double tn = sp * (1.0 - p);
  const double fn = (1.0 - se) * p;
  return {ratio(tp, tp + fp), ratio(tn, tn + fn)};
}

PredictiveValues single_batch_ppv_npv(int n, double p, const ErrorModel& err) {
  return ppv_npv(p, single_batch_sensitivity(err),
                 single_batch_specificity(n, p, err));
}

}  // namespace pooltest
