#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stpfault/expression.hpp"
#include "stpfault/logical_matrix.hpp"

namespace stpfault {

/// Fault values in their delta offsets: 0 = stuck-at-1, 1 = stuck-at-0, 2 = none.
enum FaultValue : int { kStuckAt1 = 0, kStuckAt0 = 1, kNoFault = 2 };

struct Annotation {
  enum class Kind { None, Fault, Drug };
  Kind kind = Kind::None;
  std::size_t id = 0;  // index into BlockDiagram::faults or ::drugs
};

/// Sub-block x^i_j. level and index are 1-based.
struct SubBlock {
  std::string name;
  std::size_t level = 1;
  std::size_t index = 1;
  Expr expr;
  Annotation annotation;
  bool feedback = false;
  /// Drug added after construction (controllability rebuild); applied after `annotation`.
  std::optional<std::size_t> added_drug;
  std::size_t line = 0;
};

struct OutputBlock {
  std::string name;
  Expr expr;
  std::optional<std::size_t> added_drug;
  std::size_t line = 0;
};

struct Declared {
  std::string id;
  std::string node;  // target node name
};

class BlockDiagram {
 public:
  std::vector<std::string> inputs;
  std::vector<Declared> faults;
  std::vector<Declared> drugs;
  std::vector<std::vector<SubBlock>> levels;
  std::vector<OutputBlock> outputs;
  std::vector<std::string> feedback;  // state order of X

  std::size_t alpha() const { return inputs.size(); }
  std::size_t beta() const { return outputs.size(); }
  std::size_t gamma() const { return faults.size(); }
  std::size_t lambda() const { return drugs.size(); }
  std::size_t n_feedback() const { return feedback.size(); }
  std::size_t depth() const { return levels.size(); }
  std::size_t node_count() const;
  bool is_bcn() const { return !feedback.empty(); }

  std::size_t input_dim() const;   // 2^alpha
  std::size_t fault_dim() const;   // 3^gamma
  std::size_t drug_dim() const;    // 2^lambda
  std::size_t state_dim() const;   // 2^N
  std::size_t output_dim() const;  // 2^beta
  std::size_t omega() const;       // 2^(alpha+lambda) 3^gamma

  /// Block count rule: sub-blocks = faults + drugs + outputs.
  bool satisfies_block_count() const;

  const SubBlock* find_node(std::string_view name) const;
  SubBlock* find_node(std::string_view name);
  /// Position of a feedback node in X, or npos.
  std::size_t state_position(std::string_view name) const;

  /// Value slots: inputs, then state reads (BCN), then level nodes in order.
  std::size_t slot_count() const;
  std::size_t node_slot(std::size_t level, std::size_t index) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Parse and validate DSL source.
BlockDiagram parse_network(std::string_view text);

/// Check structural rules and bind expression slots. parse_network calls this;
/// programmatically built diagrams must go through it before use.
void validate_network(BlockDiagram& d);

/// DSL text that parses back to an equivalent diagram (added drugs are not representable).
std::string format_network(const BlockDiagram& d);

// Vector encodings. Booleans: value 1 is offset 0, first variable most significant.
std::size_t encode_bools(std::span<const char> bits);
std::vector<char> decode_bools(std::size_t offset, std::size_t count);
std::size_t encode_faults(std::span<const int> values);
std::vector<int> decode_faults(std::size_t offset, std::size_t count);

inline DeltaVector no_fault(const BlockDiagram& d) { return last_delta(d.fault_dim()); }
inline DeltaVector no_drug(const BlockDiagram& d) { return last_delta(d.drug_dim()); }

/// Fault and drug transforms on a single value.
bool apply_fault(bool x, int fault);
inline bool apply_drug(bool x, bool drug_on) { return x && !drug_on; }

/// Direct recursive evaluation (the reference semantics the assembly is checked against).
struct Scenario {
  std::vector<char> u;
  std::vector<int> f;
  std::vector<char> d;
  std::vector<char> x;  // BCN state
};

Scenario decode_scenario(const BlockDiagram& d, std::size_t u, std::size_t f, std::size_t dr, std::size_t x = 0);

/// All slot values of a BM: inputs then every node after its own fault/drug.
std::vector<char> evaluate_bm_slots(const BlockDiagram& d, const Scenario& s);
std::vector<char> evaluate_bm(const BlockDiagram& d, const Scenario& s);
/// Next state. Fault and drug of a state node act where its previous value is read.
std::vector<char> evaluate_bcn_step(const BlockDiagram& d, const Scenario& s);
std::vector<char> evaluate_bcn_output(const BlockDiagram& d, const Scenario& s);

/// Value of a node's own transform chain (annotation then added drug).
bool transform_node_value(const BlockDiagram& d, const SubBlock& b, bool value, const Scenario& s);

}  // namespace stpfault
