#pragma once

#include <span>
#include <vector>

#include "mgplan/estimator.hpp"

namespace mgplan::losses {

// Clamp applied to BCE probabilities and to component losses before log.
inline constexpr double kEpsilon = 1e-12;

// -sum[ y log(yhat) + (1 - y) log(1 - yhat) ] over all pixels, yhat clamped
// to [eps, 1 - eps]. Throws ShapeMismatch.
double bce(const RegionMask& y, const RegionMask& yhat);

// 1 - 2 sum(y yhat) / (sum y^2 + sum yhat^2). Throws ShapeMismatch, or
// DegenerateInput when both masks are all zero.
double dice(const RegionMask& y, const RegionMask& yhat);

// (1/N) sum (c_i - chat_i)^2 with c the true and chat the estimated
// distances. Throws LengthMismatch / EmptyInput.
double mse(std::span<const double> c, std::span<const double> chat);

// Importance weights of the component losses (BCE, Dice, MSE by default).
struct LossWeights {
  std::vector<double> alpha{1.0, 1.0, 1.0};

  void validate() const;  // every alpha > 0 and finite
};

// sum alpha_i * log(max(L_i, eps)). Throws LengthMismatch.
double total(std::span<const double> losses, const LossWeights& weights);

struct LabelPair {
  RegionMask y;
  double c = 0.0;

  void validate() const;  // binary mask, c >= 0
};

struct PairScore {
  double bce = 0.0;
  double dice = 0.0;
  double mse = 0.0;
  double total = 0.0;
};

// Per-pair score with MSE over the single distance.
PairScore score_pair(const LabelPair& label, const PairEstimate& prediction, const LossWeights& weights);

// Aggregate: BCE and Dice averaged over pairs, MSE over all distances.
PairScore score_all(std::span<const LabelPair> labels, std::span<const PairEstimate> predictions,
                    const LossWeights& weights);

}  // namespace mgplan::losses
