#include "stpfault/stp.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "stpfault/errors.hpp"

namespace stpfault {

namespace {

constexpr std::size_t kMaxColumns = std::size_t{1} << 31;

void check_size(std::size_t rows, std::size_t cols) {
  if (cols > kMaxColumns || rows > std::numeric_limits<Index>::max()) {
    throw DimensionError("structure matrix too large (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
}

std::string dims(const LogicalMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  const std::size_t n = a.cols();
  const std::size_t p = b.rows();
  if (n == p) {
    std::vector<Index> col(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) col[j] = a[b[j]];
    return LogicalMatrix(a.rows(), std::move(col), b.args());
  }
  if (n % p == 0) {
    // A (B ⊗ I_t)
    const std::size_t t = n / p;
    check_size(a.rows(), b.cols() * t);
    std::vector<Index> col(b.cols() * t);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t s = 0; s < t; ++s) col[j * t + s] = a[b[j] * t + s];
    }
    return LogicalMatrix(a.rows(), std::move(col));
  }
  if (p % n == 0) {
    // (A ⊗ I_t) B
    const std::size_t t = p / n;
    check_size(a.rows() * t, b.cols());
    std::vector<Index> col(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      col[j] = static_cast<Index>(a[b[j] / t] * t + b[j] % t);
    }
    return LogicalMatrix(a.rows() * t, std::move(col));
  }
  throw UnsupportedDimensions("stp of " + dims(a) + " and " + dims(b) +
                              ": inner dimensions are not multiples of one another");
}

LogicalMatrix stp_chain(std::initializer_list<LogicalMatrix> factors) {
  if (factors.size() == 0) throw DimensionError("empty stp chain");
  auto it = factors.begin();
  LogicalMatrix acc = *it++;
  for (; it != factors.end(); ++it) acc = stp(acc, *it);
  return acc;
}

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b) {
  check_size(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Index> col(a.cols() * b.cols());
  const std::size_t rb = b.rows();
  const std::size_t cb = b.cols();
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < cb; ++j) col[i * cb + j] = static_cast<Index>(a[i] * rb + b[j]);
  }
  return LogicalMatrix(a.rows() * rb, std::move(col));
}

LogicalMatrix swap_matrix(std::size_t p, std::size_t q) {
  if (p == 0 || q == 0) throw DimensionError("swap matrix dimensions must be positive");
  std::vector<Index> col(p * q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) col[i * q + j] = static_cast<Index>(j * p + i);
  }
  return LogicalMatrix(p * q, std::move(col));
}

LogicalMatrix power_reduction_matrix(std::size_t p) {
  if (p == 0) throw DimensionError("power reduction dimension must be positive");
  std::vector<Index> col(p);
  for (std::size_t i = 0; i < p; ++i) col[i] = static_cast<Index>(i * (p + 1));
  return LogicalMatrix(p * p, std::move(col));
}

LogicalMatrix dummy_matrix(std::size_t p, std::size_t q) {
  if (p == 0 || q == 0) throw DimensionError("dummy matrix dimensions must be positive");
  std::vector<Index> col(p * q);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) col[j * p + i] = static_cast<Index>(i);
  }
  return LogicalMatrix(p, std::move(col));
}

LogicalMatrix lift_reduce(const LogicalMatrix& m, std::size_t k) {
  if (k == 0 || m.cols() % k != 0) {
    // literal (I_k ⊗ M) Φ_k; throws for unsupported shapes
    return stp(kron(identity_matrix(k), m), power_reduction_matrix(k));
  }
  // columns of M split as (A, rest); result keeps A and prepends it to M's row
  const std::size_t r = m.rows();
  const std::size_t t = m.cols() / k;
  check_size(k * r, m.cols());
  std::vector<Index> col(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) col[c] = static_cast<Index>((c / t) * r + m[c]);
  return LogicalMatrix(k * r, std::move(col));
}

LogicalMatrix compose_repeated(std::span<const LogicalMatrix> ms, std::size_t k) {
  if (ms.empty()) throw DimensionError("compose_repeated needs at least one matrix");
  LogicalMatrix acc = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (ms[i].cols() != k) {
      throw DimensionError("compose_repeated: factor " + std::to_string(i + 1) + " has " +
                           std::to_string(ms[i].cols()) + " columns, expected " + std::to_string(k));
    }
    acc = stp(acc, lift_reduce(ms[i], k));
  }
  if (acc.cols() != k) {
    throw DimensionError("compose_repeated: result has " + std::to_string(acc.cols()) + " columns, expected " +
                         std::to_string(k));
  }
  return acc.without_args();
}

LogicalMatrix compose_repeated(std::initializer_list<LogicalMatrix> ms, std::size_t k) {
  return compose_repeated(std::span<const LogicalMatrix>(ms.begin(), ms.size()), k);
}

LogicalMatrix pin_argument(const LogicalMatrix& m, std::string_view name, const DeltaVector& value) {
  const auto pos = m.arg_position(name);
  if (pos == LogicalMatrix::npos) {
    throw ArgumentError("cannot pin '" + std::string(name) + "': matrix arguments are (" +
                        format_signature(m.args()) + ")");
  }
  const auto& args = m.args();
  if (args[pos].dim != value.dim()) {
    throw DimensionError("cannot pin '" + std::string(name) + "' of dimension " + std::to_string(args[pos].dim) +
                         " to a delta" + std::to_string(value.dim()) + " vector");
  }
  std::size_t after = 1;
  for (std::size_t i = pos + 1; i < args.size(); ++i) after *= args[i].dim;
  const std::size_t d = args[pos].dim;
  const std::size_t new_cols = m.cols() / d;
  std::vector<Index> col(new_cols);
  for (std::size_t c = 0; c < new_cols; ++c) {
    const std::size_t hi = c / after;
    const std::size_t lo = c % after;
    col[c] = m[(hi * d + value.offset()) * after + lo];
  }
  ArgSignature rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i != pos) rest.push_back(args[i]);
  }
  if (rest.empty()) return LogicalMatrix(m.rows(), std::move(col));
  return LogicalMatrix(m.rows(), std::move(col), std::move(rest));
}

LogicalMatrix reorder_arguments(const LogicalMatrix& m, std::span<const std::string> order) {
  const auto& args = m.args();
  if (order.size() != args.size()) throw ArgumentError("reorder_arguments: order is not a permutation");
  std::vector<std::size_t> perm(order.size());
  std::vector<bool> seen(order.size(), false);
  ArgSignature sig;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto pos = m.arg_position(order[i]);
    if (pos == LogicalMatrix::npos || seen[pos]) {
      throw ArgumentError("reorder_arguments: '" + order[i] + "' is not a unique argument");
    }
    seen[pos] = true;
    perm[i] = pos;
    sig.push_back(args[pos]);
  }
  std::vector<std::size_t> new_dims(sig.size());
  std::vector<std::size_t> old_dims(args.size());
  for (std::size_t i = 0; i < sig.size(); ++i) new_dims[i] = sig[i].dim;
  for (std::size_t i = 0; i < args.size(); ++i) old_dims[i] = args[i].dim;
  std::vector<Index> col(m.cols());
  std::vector<std::size_t> old_offsets(args.size());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto parts = split_offset(c, new_dims);
    for (std::size_t i = 0; i < parts.size(); ++i) old_offsets[perm[i]] = parts[i];
    col[c] = m[join_offsets(old_offsets, old_dims)];
  }
  return LogicalMatrix(m.rows(), std::move(col), std::move(sig));
}

DeltaVector evaluate(const LogicalMatrix& m, std::span<const std::pair<std::string_view, DeltaVector>> values) {
  const auto& args = m.args();
  if (args.empty()) throw ArgumentError("evaluate needs a matrix with an argument signature");
  std::size_t offset = 0;
  for (const auto& a : args) {
    const auto it = std::find_if(values.begin(), values.end(), [&](const auto& v) { return v.first == a.name; });
    if (it == values.end()) throw ArgumentError("no value given for argument '" + a.name + "'");
    if (it->second.dim() != a.dim) {
      throw DimensionError("argument '" + a.name + "' has dimension " + std::to_string(a.dim) + ", got delta" +
                           std::to_string(it->second.dim()));
    }
    offset = offset * a.dim + it->second.offset();
  }
  return DeltaVector(m.rows(), m[offset]);
}

DeltaVector evaluate(const LogicalMatrix& m,
                     std::initializer_list<std::pair<std::string_view, DeltaVector>> values) {
  return evaluate(m, std::span<const std::pair<std::string_view, DeltaVector>>(values.begin(), values.size()));
}

LogicalMatrix compose_square(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionError("compose_square needs square matrices of equal size, got " + dims(a) + " and " + dims(b));
  }
  std::vector<Index> col(b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) col[j] = a[b[j]];
  return LogicalMatrix(a.rows(), std::move(col));
}

LogicalMatrix matrix_power(const LogicalMatrix& a, std::size_t k) {
  if (!a.is_square()) throw DimensionError("matrix power of non-square " + dims(a));
  LogicalMatrix result = identity_matrix(a.rows());
  LogicalMatrix base = a.without_args();
  while (k > 0) {
    if (k & 1) result = compose_square(result, base);
    k >>= 1;
    if (k) base = compose_square(base, base);
  }
  return result;
}

std::size_t trace(const LogicalMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace of non-square " + dims(a));
  std::size_t t = 0;
  for (std::size_t i = 0; i < a.cols(); ++i) t += a[i] == i;
  return t;
}

namespace {

std::size_t diag_mismatch(const LogicalMatrix& ak, const LogicalMatrix& bk) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < ak.cols(); ++i) count += (ak[i] == i) != (bk[i] == i);
  return count;
}

void check_pair(const LogicalMatrix& a, const LogicalMatrix& b) {
  if (!a.is_square() || !b.is_square()) throw DimensionError("trace comparison needs square matrices");
  if (a.rows() != b.rows()) throw DimensionError("trace comparison of " + dims(a) + " and " + dims(b));
}

}  // namespace

std::size_t diag_diff_trace(const LogicalMatrix& a, const LogicalMatrix& b, std::size_t k) {
  check_pair(a, b);
  if (k == 0) throw ArgumentError("power k must be positive");
  return diag_mismatch(matrix_power(a, k), matrix_power(b, k));
}

PowerCache::PowerCache(LogicalMatrix base) : base_(base.without_args()) {
  if (!base_.is_square()) throw DimensionError("power cache needs a square matrix");
}

const LogicalMatrix& PowerCache::power(std::size_t k) {
  if (k == 0) throw ArgumentError("power k must be positive");
  if (auto it = powers_.find(k); it != powers_.end()) return it->second;
  LogicalMatrix value = base_;
  if (k > 1) {
    // reuse the largest cached power not above k
    auto it = powers_.upper_bound(k);
    if (it != powers_.begin()) {
      --it;
      value = compose_square(it->second, matrix_power(base_, k - it->first));
    } else {
      value = matrix_power(base_, k);
    }
  }
  return powers_.emplace(k, std::move(value)).first->second;
}

std::size_t diag_diff_trace(PowerCache& a, PowerCache& b, std::size_t k) {
  check_pair(a.base(), b.base());
  return diag_mismatch(a.power(k), b.power(k));
}

}  // namespace stpfault
