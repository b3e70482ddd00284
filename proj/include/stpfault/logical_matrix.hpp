#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stpfault {

using Index = std::uint32_t;

/// Canonical basis column delta_k^i. Stored with a 0-based offset; every
/// user-facing rendering is 1-based.
class DeltaVector {
 public:
  DeltaVector() = default;
  /// `offset` is 0-based.
  DeltaVector(std::size_t dim, std::size_t offset);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t position() const noexcept { return offset_ + 1; }

  friend bool operator==(const DeltaVector&, const DeltaVector&) = default;
  friend auto operator<=>(const DeltaVector&, const DeltaVector&) = default;

 private:
  std::size_t dim_ = 1;
  std::size_t offset_ = 0;
};

/// delta_dim^position with a 1-based position.
DeltaVector delta(std::size_t dim, std::size_t position);

/// The last basis vector of a space, e.g. F0 = delta_{3^g}^{3^g}.
inline DeltaVector last_delta(std::size_t dim) { return delta(dim, dim); }

/// Left-to-right STP of delta vectors.
DeltaVector delta_product(std::span<const DeltaVector> factors);

/// Splits an offset in a product space back into its factors.
std::vector<std::size_t> split_offset(std::size_t offset, std::span<const std::size_t> dims);
std::size_t join_offsets(std::span<const std::size_t> offsets, std::span<const std::size_t> dims);

struct ArgSpec {
  std::string name;
  std::size_t dim = 1;
  friend bool operator==(const ArgSpec&, const ArgSpec&) = default;
};

using ArgSignature = std::vector<ArgSpec>;

std::size_t signature_product(const ArgSignature& sig);
std::string format_signature(const ArgSignature& sig);

/// Matrix with exactly one 1 per column, stored as a row offset per column.
/// The optional argument signature names the STP factors of the column space.
class LogicalMatrix {
 public:
  LogicalMatrix() = default;
  /// `column_rows` holds 0-based row offsets.
  LogicalMatrix(std::size_t rows, std::vector<Index> column_rows, ArgSignature args = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return col_.size(); }
  Index operator[](std::size_t col) const noexcept { return col_[col]; }
  std::span<const Index> columns() const noexcept { return col_; }
  const ArgSignature& args() const noexcept { return args_; }
  bool has_args() const noexcept { return !args_.empty(); }
  bool is_square() const noexcept { return rows_ == col_.size(); }

  /// Position of the named argument, or npos.
  std::size_t arg_position(std::string_view name) const;
  bool has_arg(std::string_view name) const { return arg_position(name) != npos; }
  std::size_t arg_dim(std::string_view name) const;

  LogicalMatrix with_args(ArgSignature args) const;
  LogicalMatrix without_args() const { return LogicalMatrix(rows_, col_); }

  /// Column `v.offset()` as a delta vector; requires v.dim() == cols().
  DeltaVector apply(const DeltaVector& v) const;

  friend bool operator==(const LogicalMatrix&, const LogicalMatrix&) = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t rows_ = 1;
  std::vector<Index> col_;
  ArgSignature args_;
};

/// delta_rows[p_1, ..., p_c] with 1-based positions, as printed.
LogicalMatrix delta_matrix(std::size_t rows, std::initializer_list<std::size_t> positions);
LogicalMatrix delta_matrix(std::size_t rows, std::span<const std::size_t> positions);

LogicalMatrix identity_matrix(std::size_t n);
LogicalMatrix column_matrix(const DeltaVector& v);

/// "delta4[1,3,2,4]"
std::string format_delta_matrix(const LogicalMatrix& m);

/// Sorted set of basis vectors of one space, rendered as "delta9{2,4,5}".
class DeltaSet {
 public:
  DeltaSet() = default;
  explicit DeltaSet(std::size_t dim) : dim_(dim) {}
  DeltaSet(std::size_t dim, std::initializer_list<std::size_t> positions);

  static DeltaSet full(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  bool empty() const noexcept { return offsets_.empty(); }
  bool contains(const DeltaVector& v) const { return v.dim() == dim_ && offsets_.contains(v.offset()); }
  void insert(const DeltaVector& v);
  void erase(const DeltaVector& v) { offsets_.erase(v.offset()); }

  std::vector<DeltaVector> members() const;
  std::vector<std::size_t> positions() const;
  const std::set<std::size_t>& offsets() const noexcept { return offsets_; }

  DeltaSet united(const DeltaSet& other) const;
  DeltaSet intersected(const DeltaSet& other) const;
  DeltaSet minus(const DeltaSet& other) const;
  bool is_subset_of(const DeltaSet& other) const;

  std::string to_string() const;

  friend bool operator==(const DeltaSet&, const DeltaSet&) = default;

 private:
  std::size_t dim_ = 1;
  std::set<std::size_t> offsets_;
};

}  // namespace stpfault
