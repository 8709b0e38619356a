#include "mgplan/weight_matrix.hpp"

#include <cmath>

#include "mgplan/errors.hpp"
#include "mgplan/text_util.hpp"

namespace mgplan {

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  WeightMatrix w(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw InvalidMatrix("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                          " entries, expected " + std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) w.at(i, j) = rows[i][j];
  }
  return w;
}

void WeightMatrix::validate() const {
  if (w_.size() != m_ * m_) throw InvalidMatrix("matrix storage is not square");
  for (std::size_t i = 0; i < m_; ++i) {
    if ((*this)(i, i) != 0.0) throw InvalidMatrix("nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < m_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v)) {
        throw InvalidMatrix("non-finite entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw InvalidMatrix("negative entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (v != (*this)(j, i)) {
        throw InvalidMatrix("asymmetric entries (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

WeightMatrix WeightMatrix::scaled(double factor) const {
  WeightMatrix out = *this;
  for (double& v : out.w_) v *= factor;
  return out;
}

std::string format_weight_csv(const WeightMatrix& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) out += ',';
      out += format_double(w(i, j));
    }
    out += '\n';
  }
  return out;
}

WeightMatrix parse_weight_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<double> row;
    for (auto field : split(lines[i], ',')) {
      double v = 0.0;
      if (!parse_double(field, v)) throw FormatError(source, i + 1, "bad number \"" + std::string(field) + "\"");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw FormatError(source, i + 1, "expected " + std::to_string(rows.size()) + " columns");
    }
  }
  return WeightMatrix::from_rows(rows);
}

}  // namespace mgplan
