#include "sessbot/matrix.hpp"

#include <algorithm>

#include "sessbot/error.hpp"

namespace sessbot {

FeatureMatrix::FeatureMatrix(std::vector<std::string> column_names)
    : names_(std::move(column_names)) {}

void FeatureMatrix::add_row(std::span<const double> values, std::uint8_t label) {
  if (values.size() != cols()) {
    throw DomainError("row has " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(cols()));
  }
  if (label > 1) throw DomainError("labels must be 0 or 1");
  if (!groups_.empty()) throw DomainError("matrix rows carry groups; pass one");
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

void FeatureMatrix::add_row(std::span<const double> values, std::uint8_t label,
                            std::uint32_t group) {
  if (groups_.size() != labels_.size()) throw DomainError("matrix rows carry no groups");
  if (values.size() != cols()) {
    throw DomainError("row has " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(cols()));
  }
  if (label > 1) throw DomainError("labels must be 0 or 1");
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  groups_.push_back(group);
}

void FeatureMatrix::reserve(std::size_t rows) {
  values_.reserve(rows * cols());
  labels_.reserve(rows);
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  FeatureMatrix out(names_);
  out.values_.reserve(indices.size() * cols());
  out.labels_.reserve(indices.size());
  for (auto r : indices) {
    const auto src = row(r);
    out.values_.insert(out.values_.end(), src.begin(), src.end());
    out.labels_.push_back(labels_[r]);
    if (has_groups()) out.groups_.push_back(groups_[r]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  for (auto c : columns) {
    if (c >= cols()) throw DomainError("column index out of range");
    names.push_back(names_[c]);
  }
  FeatureMatrix out(std::move(names));
  out.values_.reserve(rows() * columns.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (auto c : columns) out.values_.push_back(at(r, c));
  }
  out.labels_ = labels_;
  out.groups_ = groups_;
  return out;
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DomainError("no column named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

}  // namespace sessbot
