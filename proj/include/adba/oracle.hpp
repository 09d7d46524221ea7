#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adba {

/// Thrown when a counted query is attempted with no budget left.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("query budget exhausted") {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got);
};

/// Transport failure or malformed reply from a remote model.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HandshakeMismatch : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Flat normalized image, every channel value in [0, 1].
class ImageVector {
 public:
  ImageVector() = default;
  explicit ImageVector(std::vector<double> data);
  ImageVector(std::size_t n, double fill);

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> values() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const ImageVector&, const ImageVector&) = default;

 private:
  std::vector<double> data_;
};

/// 0-based class index.
struct Label {
  std::uint32_t class_id = 0;

  friend bool operator==(const Label&, const Label&) = default;
};

class QueryLedger {
 public:
  explicit QueryLedger(std::uint64_t budget);

  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t budget() const noexcept { return budget_; }
  std::uint64_t remaining() const noexcept { return budget_ - used_; }
  bool exhausted() const noexcept { return used_ >= budget_; }

  // Throws BudgetExhausted when used == budget.
  void require_available() const;
  void charge();

 private:
  std::uint64_t used_ = 0;
  std::uint64_t budget_;
};

/// A hard-label classifier behind a query ledger.
///
/// Every counted query goes through query(); the ledger is charged only after
/// the model has produced a label, so a transport failure never consumes
/// budget. query_uncounted() is the side channel used for the initial
/// correctness check and for test-only ground truth.
class Oracle {
 public:
  Oracle(std::size_t dimension, std::uint32_t class_count,
         std::uint64_t budget);
  virtual ~Oracle() = default;

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  Label query(std::span<const double> image);
  Label query_uncounted(std::span<const double> image);

  std::size_t dimension() const noexcept { return dimension_; }
  std::uint32_t class_count() const noexcept { return class_count_; }
  const QueryLedger& ledger() const noexcept { return ledger_; }

  /// Invocations that reached the model, counted or not.
  std::uint64_t evaluations() const noexcept { return evaluations_; }

 protected:
  virtual Label classify(std::span<const double> image) = 0;

 private:
  Label evaluate(std::span<const double> image);

  std::size_t dimension_;
  std::uint32_t class_count_;
  QueryLedger ledger_;
  std::uint64_t evaluations_ = 0;
};

/// Linear scores W x + b, argmax with ties to the lowest index.
class ToyLinearOracle : public Oracle {
 public:
  // weights is row-major K x N.
  ToyLinearOracle(std::vector<double> weights, std::vector<double> bias,
                  std::size_t dimension, std::uint64_t budget);

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> bias() const noexcept { return bias_; }

 protected:
  Label classify(std::span<const double> image) override;

 private:
  std::vector<double> weights_;
  std::vector<double> bias_;
};

/// Two-class model on the image mean: label 1 iff mean > threshold (or
/// mean < threshold when inverted), else label 0.
class MeanThresholdOracle : public Oracle {
 public:
  MeanThresholdOracle(double threshold, std::size_t dimension,
                      std::uint64_t budget, bool inverted = false);

  double threshold() const noexcept { return threshold_; }

 protected:
  Label classify(std::span<const double> image) override;

 private:
  double threshold_;
  bool inverted_;
};

/// Always answers the same class.
class ConstantOracle : public Oracle {
 public:
  ConstantOracle(Label label, std::uint32_t class_count, std::size_t dimension,
                 std::uint64_t budget);

 protected:
  Label classify(std::span<const double> image) override;

 private:
  Label label_;
};

}  // namespace adba
