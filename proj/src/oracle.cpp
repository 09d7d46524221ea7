#include "adba/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace adba {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)) {}

ImageVector::ImageVector(std::vector<double> data) : data_(std::move(data)) {
  if (data_.empty()) throw std::invalid_argument("image must have at least one entry");
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("image entry " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

ImageVector::ImageVector(std::size_t n, double fill)
    : ImageVector(std::vector<double>(n, fill)) {}

QueryLedger::QueryLedger(std::uint64_t budget) : budget_(budget) {
  if (budget == 0) throw std::invalid_argument("query budget must be positive");
}

void QueryLedger::require_available() const {
  if (exhausted()) throw BudgetExhausted();
}

void QueryLedger::charge() {
  require_available();
  ++used_;
}

Oracle::Oracle(std::size_t dimension, std::uint32_t class_count, std::uint64_t budget)
    : dimension_(dimension), class_count_(class_count), ledger_(budget) {
  if (dimension == 0) throw std::invalid_argument("oracle dimension must be positive");
  if (class_count < 2) throw std::invalid_argument("oracle needs at least two classes");
}

Label Oracle::query(std::span<const double> image) {
  ledger_.require_available();
  const Label label = evaluate(image);
  ledger_.charge();
  return label;
}

Label Oracle::query_uncounted(std::span<const double> image) { return evaluate(image); }

Label Oracle::evaluate(std::span<const double> image) {
  if (image.size() != dimension_) throw DimensionMismatch(dimension_, image.size());
  const Label label = classify(image);
  ++evaluations_;
  if (label.class_id >= class_count_) {
    throw ProtocolError("model returned class " + std::to_string(label.class_id) +
                        " outside [0, " + std::to_string(class_count_) + ")");
  }
  return label;
}

ToyLinearOracle::ToyLinearOracle(std::vector<double> weights, std::vector<double> bias,
                                 std::size_t dimension, std::uint64_t budget)
    : Oracle(dimension, static_cast<std::uint32_t>(bias.size()), budget),
      weights_(std::move(weights)),
      bias_(std::move(bias)) {
  if (weights_.size() != bias_.size() * dimension) {
    throw std::invalid_argument("weights must be K x N");
  }
}

Label ToyLinearOracle::classify(std::span<const double> image) {
  const std::size_t n = image.size();
  std::uint32_t best = 0;
  double best_score = 0.0;
  for (std::size_t k = 0; k < bias_.size(); ++k) {
    const auto row = std::span<const double>(weights_).subspan(k * n, n);
    const double score = std::inner_product(row.begin(), row.end(), image.begin(), bias_[k]);
    // Strict comparison keeps the lowest index on ties.
    if (k == 0 || score > best_score) {
      best = static_cast<std::uint32_t>(k);
      best_score = score;
    }
  }
  return Label{best};
}

MeanThresholdOracle::MeanThresholdOracle(double threshold, std::size_t dimension,
                                         std::uint64_t budget, bool inverted)
    : Oracle(dimension, 2, budget), threshold_(threshold), inverted_(inverted) {}

Label MeanThresholdOracle::classify(std::span<const double> image) {
  const double mean =
      std::accumulate(image.begin(), image.end(), 0.0) / static_cast<double>(image.size());
  const bool fires = inverted_ ? mean < threshold_ : mean > threshold_;
  return Label{fires ? 1U : 0U};
}

ConstantOracle::ConstantOracle(Label label, std::uint32_t class_count, std::size_t dimension,
                               std::uint64_t budget)
    : Oracle(dimension, class_count, budget), label_(label) {}

Label ConstantOracle::classify(std::span<const double>) { return label_; }

}  // namespace adba
