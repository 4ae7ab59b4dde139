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

// Closed-form outcome probabilities for pooled tests under a binomial
// infection model. Every function here is pure and thread-safe.

#ifndef POOLTEST_PROBABILITY_HPP_
#define POOLTEST_PROBABILITY_HPP_

namespace pooltest {

/// Per-test error rates of a single (individual) assay. The same rates apply
/// to a pooled assay regardless of pool size.
class ErrorModel {
 public:
  constexpr ErrorModel() = default;

  /// Throws InvalidArgument unless 0 <= alpha, beta < 1 and alpha + beta < 1.
  ErrorModel(double alpha, double beta);

  static constexpr ErrorModel Perfect() { return ErrorModel(); }

  double alpha() const { return alpha_; }  ///< false positive rate
  double beta() const { return beta_; }    ///< false negative rate

  /// 1 - alpha - beta; strictly positive for a valid model.
  double discrimination() const { return 1.0 - alpha_ - beta_; }

  bool is_perfect() const { return alpha_ == 0.0 && beta_ == 0.0; }

  friend bool operator==(const ErrorModel&, const ErrorModel&) = default;

 private:
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// Infection rate p of a (sub)population; q = 1 - p.
class InfectionModel {
 public:
  explicit InfectionModel(double p);

  double p() const { return p_; }
  double q() const { return 1.0 - p_; }

 private:
  double p_;
};

struct BatchOutcomeProbs {
  double negative = 0.0;
  double positive = 0.0;
};

/// State of one subpopulation entering a round: infection rate, expected
/// size (kept real-valued) and the batch size used in that round.
struct RoundState {
  double p = 0.0;
  double size = 0.0;
  int batch_size = 0;
};

/// Expected state of a child subpopulation after one round of pooling.
struct BranchEstimate {
  double p = 0.0;     ///< infection rate of the child
  double size = 0.0;  ///< expected number of people in the child
  double r = 0.0;     ///< P(batch holds an infected member | this branch)
  bool degenerate = false;  ///< parent rate was 0 or 1; limits were used
};

/// q^n evaluated as exp(n * log1p(-p)) so it stays accurate for q near 1.
double pow_q(double q, double n);

/// C(n, k) p^k (1-p)^(n-k).
double binom_pmf(int n, double p, int k);

/// (1 - alpha - beta) q^n + beta.
double p_batch_negative(int n, double q, const ErrorModel& err);

/// (1 - beta) - (1 - alpha - beta) q^n.
double p_batch_positive(int n, double q, const ErrorModel& err);

BatchOutcomeProbs batch_outcome_probs(int n, double q, const ErrorModel& err);

/// Recovers q from an observed batch-negative rate A. Throws
/// OutOfInvertibleRange unless beta < A < 1 - alpha, except that A == 1 - alpha
/// maps to q == 1.
double invert_batch_negative_rate(double A, int n, const ErrorModel& err);

BranchEstimate subpop_after_negative(const RoundState& prev,
                                     const ErrorModel& err);
BranchEstimate subpop_after_positive(const RoundState& prev,
                                     const ErrorModel& err);

}  // namespace pooltest

#endif  // POOLTEST_PROBABILITY_HPP_
