#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mgplan {

// Dense M x M cost table. Construction does not validate; consumers that
// need a proper TSP instance call validate().
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t m) : m_(m), w_(m * m, 0.0) {}

  static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return w_[i * m_ + j]; }
  double& at(std::size_t i, std::size_t j) noexcept { return w_[i * m_ + j]; }

  // Sets both (i,j) and (j,i) from one value.
  void set_symmetric(std::size_t i, std::size_t j, double v) noexcept {
    w_[i * m_ + j] = v;
    w_[j * m_ + i] = v;
  }

  // Throws InvalidMatrix unless square, finite, exactly symmetric,
  // nonnegative, with a zero diagonal.
  void validate() const;

  WeightMatrix scaled(double factor) const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> w_;
};

// Row i = comma-separated w[i][0..M-1].
std::string format_weight_csv(const WeightMatrix& w);
WeightMatrix parse_weight_csv(const std::string& text, const std::string& source = "<weights>");

// Position of the unordered pair {i, j} (i != j) in the lexicographic list
// (0,1), (0,2), ..., (M-2,M-1).
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m) noexcept {
  if (i > j) std::swap(i, j);
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}

inline std::size_t pair_count(std::size_t m) noexcept { return m * (m - 1) / 2; }

}  // namespace mgplan
