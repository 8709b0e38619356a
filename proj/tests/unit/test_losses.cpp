#include <doctest.h>

#include <cmath>

#include "mgplan/errors.hpp"
#include "mgplan/losses.hpp"
#include "mgplan/rng.hpp"

using namespace mgplan;
using namespace mgplan::losses;

namespace {

RegionMask row(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return RegionMask(n, 1, std::move(v));
}

}  // namespace

TEST_CASE("bce") {
  CHECK(bce(row({1, 0, 1}), row({1, 0, 1})) < 3e-9);
  CHECK(bce(row({1, 0}), row({0.5, 0.5})) == doctest::Approx(1.3862944).epsilon(1e-7));
  CHECK(std::abs(bce(row({1, 0}), row({0.5, 0.5})) - 2.0 * std::log(2.0)) < 1e-12);
  CHECK(bce(row({1}), row({0})) == doctest::Approx(-std::log(kEpsilon)));
  CHECK(bce(row({1}), row({0})) == doctest::Approx(27.631).epsilon(1e-4));
  CHECK_THROWS_AS(bce(row({1, 0}), row({1})), ShapeMismatch);
  CHECK_THROWS_AS(bce(RegionMask(1, 2, {1, 0}), row({1, 0})), ShapeMismatch);
}

TEST_CASE("dice") {
  CHECK(dice(row({1, 0, 1}), row({1, 0, 1})) == 0.0);
  CHECK(dice(row({1, 1, 0, 0}), row({0, 0, 1, 1})) == 1.0);
  CHECK(std::abs(dice(row({1, 0}), row({0.5, 0.5})) - 1.0 / 3.0) < 1e-12);
  CHECK_THROWS_AS(dice(row({0, 0}), row({0, 0})), DegenerateInput);
  CHECK_THROWS_AS(dice(row({1}), row({0, 0})), ShapeMismatch);
}

TEST_CASE("mse") {
  const std::vector<double> a{1, 2, 3};
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(std::vector<double>{3}, std::vector<double>{5}) == 4.0);
  CHECK(std::abs(mse(a, std::vector<double>{2, 2, 5}) - 5.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(mse(a, std::vector<double>{1}), LengthMismatch);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), EmptyInput);
}

TEST_CASE("total") {
  const double e = std::exp(1.0);
  CHECK(total(std::vector<double>{e, e, e}, {}) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(total(std::vector<double>{1, 1, 1}, {{2, 1, 1}}) == 0.0);
  // log 0.5 + log(1/3) + log(5/3) = log(5/18)
  CHECK(std::abs(total(std::vector<double>{0.5, 1.0 / 3.0, 5.0 / 3.0}, {}) - std::log(5.0 / 18.0)) < 1e-12);
  CHECK(total(std::vector<double>{0.5, 1.0 / 3.0, 5.0 / 3.0}, {}) == doctest::Approx(-1.2809339).epsilon(1e-7));
  // Zero losses are clamped before the logarithm.
  CHECK(total(std::vector<double>{0, 1, 1}, {}) == doctest::Approx(std::log(kEpsilon)));
  CHECK_THROWS_AS(total(std::vector<double>{1, 1}, {}), LengthMismatch);
  CHECK_THROWS_AS((LossWeights{{1, 0, 1}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((LossWeights{{1, NAN, 1}}.validate()), InvalidArgument);
}

TEST_CASE("properties over random inputs") {
  Rng rng(77);
  for (int n = 0; n < 1000; ++n) {
    const int w = rng.range(1, 8), h = rng.range(1, 8);
    std::vector<double> y(static_cast<std::size_t>(w * h)), p(y.size());
    for (auto& v : y) v = rng.uniform01() < 0.4 ? 1.0 : 0.0;
    for (auto& v : p) v = rng.uniform01();
    y[rng.below(y.size())] = 1.0;
    const RegionMask my(w, h, y), mp(w, h, p);
    const double d = dice(my, mp);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(bce(my, mp) >= 0.0);
    // Pure functions: identical inputs give identical bits.
    CHECK(dice(my, mp) == d);
  }
}

TEST_CASE("score_pair and score_all") {
  const LabelPair label{row({1, 0}), 3.0};
  const PairEstimate pred{5.0, row({0.5, 0.5})};
  const PairScore s = score_pair(label, pred, {});
  CHECK(s.bce == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(s.dice == doctest::Approx(1.0 / 3.0));
  CHECK(s.mse == 4.0);
  CHECK(s.total == doctest::Approx(std::log(2.0 * std::log(2.0)) + std::log(1.0 / 3.0) + std::log(4.0)));

  const std::vector<LabelPair> labels{label, {row({0, 1}), 1.0}};
  const std::vector<PairEstimate> preds{pred, {1.0, row({0, 1})}};
  const PairScore all = score_all(labels, preds, {});
  CHECK(all.mse == 2.0);
  CHECK(all.dice == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(score_all(labels, std::vector<PairEstimate>{pred}, {}), LengthMismatch);
  CHECK_THROWS_AS((LabelPair{row({0.5, 1}), 1.0}.validate()), InvalidArgument);
}
