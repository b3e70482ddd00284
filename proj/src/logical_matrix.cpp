#include "stpfault/logical_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "stpfault/errors.hpp"

namespace stpfault {

DeltaVector::DeltaVector(std::size_t dim, std::size_t offset) : dim_(dim), offset_(offset) {
  if (dim == 0) throw DimensionError("delta vector dimension must be positive");
  if (offset >= dim) {
    throw DimensionError("delta index " + std::to_string(offset + 1) + " out of range 1.." +
                         std::to_string(dim));
  }
}

DeltaVector delta(std::size_t dim, std::size_t position) {
  if (position == 0) throw DimensionError("delta positions are 1-based");
  return DeltaVector(dim, position - 1);
}

DeltaVector delta_product(std::span<const DeltaVector> factors) {
  std::size_t dim = 1;
  std::size_t offset = 0;
  for (const auto& f : factors) {
    offset = offset * f.dim() + f.offset();
    dim *= f.dim();
  }
  return DeltaVector(dim, offset);
}

std::vector<std::size_t> split_offset(std::size_t offset, std::span<const std::size_t> dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    out[i] = offset % dims[i];
    offset /= dims[i];
  }
  return out;
}

std::size_t join_offsets(std::span<const std::size_t> offsets, std::span<const std::size_t> dims) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) offset = offset * dims[i] + offsets[i];
  return offset;
}

std::size_t signature_product(const ArgSignature& sig) {
  std::size_t p = 1;
  for (const auto& a : sig) p *= a.dim;
  return p;
}

std::string format_signature(const ArgSignature& sig) {
  std::string out;
  for (const auto& a : sig) {
    if (!out.empty()) out += ',';
    out += a.name + ':' + std::to_string(a.dim);
  }
  return out;
}

LogicalMatrix::LogicalMatrix(std::size_t rows, std::vector<Index> column_rows, ArgSignature args)
    : rows_(rows), col_(std::move(column_rows)), args_(std::move(args)) {
  if (rows_ == 0) throw DimensionError("logical matrix needs at least one row");
  if (col_.empty()) throw DimensionError("logical matrix needs at least one column");
  for (auto r : col_) {
    if (r >= rows_) throw DimensionError("column entry exceeds row count");
  }
  if (!args_.empty() && signature_product(args_) != col_.size()) {
    throw DimensionError("argument signature (" + format_signature(args_) + ") does not match " +
                         std::to_string(col_.size()) + " columns");
  }
}

std::size_t LogicalMatrix::arg_position(std::string_view name) const {
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (args_[i].name == name) return i;
  }
  return npos;
}

std::size_t LogicalMatrix::arg_dim(std::string_view name) const {
  auto pos = arg_position(name);
  if (pos == npos) throw ArgumentError("matrix has no argument named '" + std::string(name) + "'");
  return args_[pos].dim;
}

LogicalMatrix LogicalMatrix::with_args(ArgSignature args) const {
  return LogicalMatrix(rows_, col_, std::move(args));
}

DeltaVector LogicalMatrix::apply(const DeltaVector& v) const {
  if (v.dim() != cols()) {
    throw DimensionError("cannot apply " + std::to_string(rows_) + "x" + std::to_string(cols()) +
                         " matrix to a vector of dimension " + std::to_string(v.dim()));
  }
  return DeltaVector(rows_, col_[v.offset()]);
}

LogicalMatrix delta_matrix(std::size_t rows, std::initializer_list<std::size_t> positions) {
  return delta_matrix(rows, std::span<const std::size_t>(positions.begin(), positions.size()));
}

LogicalMatrix delta_matrix(std::size_t rows, std::span<const std::size_t> positions) {
  std::vector<Index> cols;
  cols.reserve(positions.size());
  for (auto p : positions) {
    if (p == 0 || p > rows) throw DimensionError("delta position out of range");
    cols.push_back(static_cast<Index>(p - 1));
  }
  return LogicalMatrix(rows, std::move(cols));
}

LogicalMatrix identity_matrix(std::size_t n) {
  std::vector<Index> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<Index>(i);
  return LogicalMatrix(n, std::move(cols));
}

LogicalMatrix column_matrix(const DeltaVector& v) {
  return LogicalMatrix(v.dim(), {static_cast<Index>(v.offset())});
}

std::string format_delta_matrix(const LogicalMatrix& m) {
  std::ostringstream os;
  os << "delta" << m.rows() << '[';
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) os << ',';
    os << m[j] + 1;
  }
  os << ']';
  return os.str();
}

DeltaSet::DeltaSet(std::size_t dim, std::initializer_list<std::size_t> positions) : dim_(dim) {
  for (auto p : positions) insert(delta(dim, p));
}

DeltaSet DeltaSet::full(std::size_t dim) {
  DeltaSet s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.offsets_.insert(i);
  return s;
}

void DeltaSet::insert(const DeltaVector& v) {
  if (v.dim() != dim_) {
    throw DimensionError("delta" + std::to_string(v.dim()) + " vector in a delta" + std::to_string(dim_) +
                         " set");
  }
  offsets_.insert(v.offset());
}

std::vector<DeltaVector> DeltaSet::members() const {
  std::vector<DeltaVector> out;
  out.reserve(offsets_.size());
  for (auto o : offsets_) out.emplace_back(dim_, o);
  return out;
}

std::vector<std::size_t> DeltaSet::positions() const {
  std::vector<std::size_t> out;
  out.reserve(offsets_.size());
  for (auto o : offsets_) out.push_back(o + 1);
  return out;
}

DeltaSet DeltaSet::united(const DeltaSet& other) const {
  DeltaSet out = *this;
  for (auto o : other.offsets_) out.insert(DeltaVector(other.dim_, o));
  return out;
}

DeltaSet DeltaSet::intersected(const DeltaSet& other) const {
  DeltaSet out(dim_);
  for (auto o : offsets_) {
    if (other.dim_ == dim_ && other.offsets_.contains(o)) out.offsets_.insert(o);
  }
  return out;
}

DeltaSet DeltaSet::minus(const DeltaSet& other) const {
  DeltaSet out(dim_);
  for (auto o : offsets_) {
    if (!(other.dim_ == dim_ && other.offsets_.contains(o))) out.offsets_.insert(o);
  }
  return out;
}

bool DeltaSet::is_subset_of(const DeltaSet& other) const {
  return std::all_of(offsets_.begin(), offsets_.end(), [&](auto o) { return other.offsets_.contains(o); });
}

std::string DeltaSet::to_string() const {
  std::string out = "delta" + std::to_string(dim_) + "{";
  bool first = true;
  for (auto o : offsets_) {
    if (!first) out += ',';
    out += std::to_string(o + 1);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace stpfault
