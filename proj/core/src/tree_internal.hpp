#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sessbot/matrix.hpp"
#include "sessbot/models.hpp"

namespace sessbot::detail {

// Column-major copy of a feature matrix; split scans walk one column at a time.
struct ColumnData {
  explicit ColumnData(const FeatureMatrix& m);

  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> labels;

  std::span<const double> column(std::size_t c) const {
    return {values.data() + c * n_rows, n_rows};
  }
};

struct GrowParams {
  SplitRule rule = SplitRule::Midpoint;
  FeaturesPerSplit features = FeaturesPerSplit::All;
  std::optional<int> max_depth;
  int min_samples_split = 2;
};

// Grows one tree over the rows with positive weight.
Tree grow_tree(const ColumnData& data, std::span<const double> weights, const GrowParams& params,
               Rng& rng);

std::optional<Split> best_split_rows(const ColumnData& data, std::span<const double> weights,
                                     std::span<std::uint32_t> rows,
                                     std::span<const std::size_t> candidates, SplitRule rule,
                                     Rng& rng);

}  // namespace sessbot::detail
