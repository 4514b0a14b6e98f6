#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sessbot {

/// Dense row-major feature matrix with binary labels.
///
/// `groups` is optional per-row group membership (the account a tweet
/// belongs to); it is either empty or has one entry per row.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<std::string> column_names);

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return names_.size(); }

  const std::vector<std::string>& column_names() const noexcept { return names_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  std::uint8_t label(std::size_t r) const { return labels_[r]; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::span<const double> values() const noexcept { return values_; }

  bool has_groups() const noexcept { return !groups_.empty(); }
  std::span<const std::uint32_t> groups() const noexcept { return groups_; }

  // Throws DomainError on arity mismatch or a label outside {0, 1}.
  void add_row(std::span<const double> values, std::uint8_t label);
  void add_row(std::span<const double> values, std::uint8_t label, std::uint32_t group);

  void reserve(std::size_t rows);

  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
  FeatureMatrix select_columns(std::span<const std::size_t> columns) const;

  std::size_t column_index(const std::string& name) const;  // throws DomainError

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint32_t> groups_;
};

}  // namespace sessbot
