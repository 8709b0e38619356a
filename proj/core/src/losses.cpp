#include "mgplan/losses.hpp"

#include <algorithm>
#include <cmath>

#include "mgplan/errors.hpp"

namespace mgplan::losses {

namespace {

void require_same_shape(const RegionMask& y, const RegionMask& yhat) {
  if (y.width() != yhat.width() || y.height() != yhat.height()) {
    throw ShapeMismatch("label is " + std::to_string(y.width()) + "x" + std::to_string(y.height()) +
                        ", prediction is " + std::to_string(yhat.width()) + "x" + std::to_string(yhat.height()));
  }
}

}  // namespace

double bce(const RegionMask& y, const RegionMask& yhat) {
  require_same_shape(y, yhat);
  const auto yv = y.values();
  const auto pv = yhat.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < yv.size(); ++k) {
    const double p = std::clamp(pv[k], kEpsilon, 1.0 - kEpsilon);
    sum += yv[k] * std::log(p) + (1.0 - yv[k]) * std::log(1.0 - p);
  }
  return -sum;
}

double dice(const RegionMask& y, const RegionMask& yhat) {
  require_same_shape(y, yhat);
  const auto yv = y.values();
  const auto pv = yhat.values();
  double inter = 0.0, yy = 0.0, pp = 0.0;
  for (std::size_t k = 0; k < yv.size(); ++k) {
    inter += yv[k] * pv[k];
    yy += yv[k] * yv[k];
    pp += pv[k] * pv[k];
  }
  const double denom = yy + pp;
  if (denom == 0.0) throw DegenerateInput("dice loss undefined for two all-zero masks");
  return 1.0 - 2.0 * inter / denom;
}

double mse(std::span<const double> c, std::span<const double> chat) {
  if (c.size() != chat.size()) {
    throw LengthMismatch("distance lists differ in length (" + std::to_string(c.size()) + " vs " +
                         std::to_string(chat.size()) + ")");
  }
  if (c.empty()) throw EmptyInput("mse of an empty list");
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = c[i] - chat[i];
    sum += d * d;
  }
  return sum / static_cast<double>(c.size());
}

void LossWeights::validate() const {
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("loss weights must be positive and finite");
  }
}

double total(std::span<const double> losses, const LossWeights& weights) {
  if (losses.size() != weights.alpha.size()) {
    throw LengthMismatch(std::to_string(losses.size()) + " losses for " + std::to_string(weights.alpha.size()) +
                         " weights");
  }
  weights.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) sum += weights.alpha[i] * std::log(std::max(losses[i], kEpsilon));
  return sum;
}

void LabelPair::validate() const {
  if (!y.is_binary()) throw InvalidArgument("label mask is not binary");
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("label distance must be finite and nonnegative");
}

PairScore score_pair(const LabelPair& label, const PairEstimate& prediction, const LossWeights& weights) {
  PairScore s;
  s.bce = bce(label.y, prediction.mask);
  s.dice = dice(label.y, prediction.mask);
  const double c[1] = {label.c};
  const double chat[1] = {prediction.distance};
  s.mse = mse(c, chat);
  const double parts[3] = {s.bce, s.dice, s.mse};
  s.total = total(parts, weights);
  return s;
}

PairScore score_all(std::span<const LabelPair> labels, std::span<const PairEstimate> predictions,
                    const LossWeights& weights) {
  if (labels.size() != predictions.size()) throw LengthMismatch("label and prediction counts differ");
  if (labels.empty()) throw EmptyInput("nothing to score");
  PairScore s;
  std::vector<double> c, chat;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    s.bce += bce(labels[k].y, predictions[k].mask);
    s.dice += dice(labels[k].y, predictions[k].mask);
    c.push_back(labels[k].c);
    chat.push_back(predictions[k].distance);
  }
  const auto n = static_cast<double>(labels.size());
  s.bce /= n;
  s.dice /= n;
  s.mse = mse(c, chat);
  const double parts[3] = {s.bce, s.dice, s.mse};
  s.total = total(parts, weights);
  return s;
}

}  // namespace mgplan::losses
