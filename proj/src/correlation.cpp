#include "trendnet/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

namespace trendnet {

CorrelationMatrix::CorrelationMatrix(std::vector<std::string> labels, std::vector<double> values,
                                     std::string method)
    : labels_(std::move(labels)), values_(std::move(values)), method_(std::move(method)) {
  if (values_.size() != labels_.size() * labels_.size())
    throw Error(ErrorKind::InvalidMatrix,
                fmt::format("{} values for {} labels", values_.size(), labels_.size()));
}

void CorrelationMatrix::validate() const {
  const std::size_t n = size();
  if (n < 2) throw Error(ErrorKind::InvalidMatrix, "matrix needs at least 2 labels");
  for (std::size_t i = 1; i < n; ++i)
    if (!(labels_[i - 1] < labels_[i]))
      throw Error(ErrorKind::InvalidMatrix, "labels must be unique and sorted");
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 1.0)
      throw Error(ErrorKind::InvalidMatrix, fmt::format("diagonal at {} is not 1", labels_[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-12)
        throw Error(ErrorKind::InvalidMatrix,
                    fmt::format("rho({},{}) = {} outside [-1,1]", labels_[i], labels_[j], v));
      if (v != (*this)(j, i))
        throw Error(ErrorKind::InvalidMatrix,
                    fmt::format("asymmetric at ({},{})", labels_[i], labels_[j]));
    }
  }
}

ConstantPolicy parse_constant_policy(std::string_view text) {
  if (text == "error") return ConstantPolicy::Error;
  if (text == "drop") return ConstantPolicy::Drop;
  throw Error(ErrorKind::InvalidValue, fmt::format("unknown constant policy '{}'", text));
}

std::string_view to_string(ConstantPolicy p) {
  return p == ConstantPolicy::Error ? "error" : "drop";
}

std::vector<double> average_ranks(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySeries, "cannot rank an empty sequence");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidValue, "non-finite value in ranking");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(values.size());
  std::size_t lo = 0;
  while (lo < order.size()) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && values[order[hi + 1]] == values[order[lo]]) ++hi;
    // positions lo..hi (0-based) share rank mean(lo+1 .. hi+1)
    const double rank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (std::size_t k = lo; k <= hi; ++k) ranks[order[k]] = rank;
    lo = hi + 1;
  }
  return ranks;
}

double pearson_of_ranks(std::span<const double> rx, std::span<const double> ry) {
  const std::size_t n = rx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorKind::GridMismatch,
                fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
  if (x.size() < 3)
    throw Error(ErrorKind::InsufficientData,
                fmt::format("spearman needs at least 3 points, got {}", x.size()));
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_of_ranks(rx, ry);
}

namespace {

bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

// Series that survive the constant-series policy, in panel order.
std::vector<const LocationSeries*> usable_series(const Panel& panel, ConstantPolicy policy) {
  if (panel.grid().size() < 3)
    throw Error(ErrorKind::InsufficientData,
                fmt::format("grid of {} dates is too short for correlation", panel.grid().size()));
  std::vector<const LocationSeries*> kept;
  for (const auto& s : panel.series()) {
    if (is_constant(s.values())) {
      if (policy == ConstantPolicy::Error)
        throw Error(ErrorKind::ZeroVariance, fmt::format("series {} is constant", s.geo()));
      continue;
    }
    kept.push_back(&s);
  }
  if (kept.size() < 2)
    throw Error(ErrorKind::InsufficientData,
                fmt::format("{} non-constant series left; need at least 2", kept.size()));
  return kept;
}

std::vector<std::string> labels_of(const std::vector<const LocationSeries*>& kept) {
  std::vector<std::string> labels;
  labels.reserve(kept.size());
  for (const auto* s : kept) labels.push_back(s->geo());
  return labels;
}

}  // namespace

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

CorrelationMatrix correlation_matrix_serial(const Panel& panel, ConstantPolicy policy) {
  const auto kept = usable_series(panel, policy);
  const std::size_t n = kept.size();
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double rho = spearman_rho(kept[i]->values(), kept[j]->values());
      values[i * n + j] = rho;
      values[j * n + i] = rho;
    }
  }
  return CorrelationMatrix(labels_of(kept), std::move(values));
}

CorrelationMatrix correlation_matrix(const Panel& panel, ConstantPolicy policy) {
  const auto kept = usable_series(panel, policy);
  const auto n = static_cast<long>(kept.size());

  std::vector<std::vector<double>> ranks(kept.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) ranks[i] = average_ranks(kept[i]->values());

  // Pair k of the strict upper triangle -> (i, j); each pair is written once
  // along with its mirror, so the schedule cannot change the result.
  const long pairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> index(static_cast<std::size_t>(pairs));
  for (long i = 0, k = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j, ++k) index[k] = {static_cast<int>(i), static_cast<int>(j)};

  std::vector<double> values(kept.size() * kept.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k < pairs; ++k) {
    const auto [i, j] = index[k];
    const double rho = pearson_of_ranks(ranks[i], ranks[j]);
    values[i * n + j] = rho;
    values[j * n + i] = rho;
  }
  for (long i = 0; i < n; ++i) values[i * n + i] = 1.0;
  return CorrelationMatrix(labels_of(kept), std::move(values));
}

std::string matrix_to_csv(const CorrelationMatrix& m) {
  std::string out = "geo";
  for (const auto& l : m.labels()) out += "," + l;
  out += "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out += "," + format_real(m(i, j));
    out += "\n";
  }
  return out;
}

std::string matrix_to_json(const CorrelationMatrix& m) {
  std::string out = fmt::format("{{\n  \"method\": \"{}\",\n  \"labels\": [", m.method());
  for (std::size_t i = 0; i < m.size(); ++i)
    out += fmt::format("{}\"{}\"", i ? ", " : "", m.labels()[i]);
  out += "],\n  \"values\": [\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += "    [";
    for (std::size_t j = 0; j < m.size(); ++j) out += (j ? ", " : "") + format_real(m(i, j));
    out += i + 1 < m.size() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

CorrelationMatrix matrix_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    auto labels = doc.at("labels").get<std::vector<std::string>>();
    std::vector<double> values;
    values.reserve(labels.size() * labels.size());
    for (const auto& row : doc.at("values")) {
      if (row.size() != labels.size())
        throw Error(ErrorKind::InvalidMatrix, "row length differs from label count");
      for (const auto& v : row) values.push_back(v.get<double>());
    }
    CorrelationMatrix m(std::move(labels), std::move(values),
                        doc.value("method", std::string("spearman")));
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, fmt::format("correlation JSON: {}", e.what()));
  }
}

CorrelationMatrix matrix_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::ParseError, "correlation CSV is empty");
  auto header = split_csv_row(lines[0]);
  if (header.empty() || header[0] != "geo")
    throw Error(ErrorKind::ParseError, "correlation CSV header must start with 'geo'");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  std::vector<double> values;
  std::size_t row = 0;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cells = split_csv_row(lines[ln]);
    if (cells.size() != labels.size() + 1 || row >= labels.size() || cells[0] != labels[row])
      throw Error(ErrorKind::ParseError, fmt::format("correlation CSV line {}: bad row", ln + 1));
    for (std::size_t j = 1; j < cells.size(); ++j) {
      auto v = parse_real(cells[j]);
      if (!v) throw Error(ErrorKind::ParseError, fmt::format("line {}: bad number", ln + 1));
      values.push_back(*v);
    }
    ++row;
  }
  if (row != labels.size()) throw Error(ErrorKind::ParseError, "correlation CSV row count");
  CorrelationMatrix m(std::move(labels), std::move(values));
  m.validate();
  return m;
}

}  // namespace trendnet
