#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trendnet/timeseries.hpp"

namespace trendnet {

// Symmetric N x N Spearman matrix, row-major, labelled in panel order.
class CorrelationMatrix {
 public:
  CorrelationMatrix(std::vector<std::string> labels, std::vector<double> values,
                    std::string method = "spearman");

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& method() const { return method_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }

  // Throws InvalidMatrix unless symmetric with unit diagonal and |rho| <= 1.
  void validate() const;

  bool operator==(const CorrelationMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  std::string method_;
};

enum class ConstantPolicy { Error, Drop };

ConstantPolicy parse_constant_policy(std::string_view text);
std::string_view to_string(ConstantPolicy p);

// 1-based average ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Tie-corrected Spearman rho: Pearson correlation of the average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Pearson correlation of two rank vectors (used by spearman_rho and the
// matrix kernels so both paths produce bit-identical cells).
double pearson_of_ranks(std::span<const double> rx, std::span<const double> ry);

// Pairwise matrix over the panel. The parallel kernel distributes the
// N(N-1)/2 pairs with OpenMP when available; the serial kernel is the
// reference it is tested against. Both return identical bytes.
CorrelationMatrix correlation_matrix(const Panel& panel,
                                     ConstantPolicy policy = ConstantPolicy::Error);
CorrelationMatrix correlation_matrix_serial(const Panel& panel,
                                            ConstantPolicy policy = ConstantPolicy::Error);

// Threads the parallel kernel will use (1 without OpenMP).
int parallel_threads();

// Exports. CSV: header "geo,<labels...>", one labelled row each, 17
// significant digits. JSON: {"method", "labels", "values"} row-major.
std::string matrix_to_csv(const CorrelationMatrix& m);
std::string matrix_to_json(const CorrelationMatrix& m);
CorrelationMatrix matrix_from_json(std::string_view text);
CorrelationMatrix matrix_from_csv(std::string_view text);

}  // namespace trendnet
