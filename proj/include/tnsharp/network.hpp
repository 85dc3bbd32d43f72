// Wire-graph tensor networks for Boolean states: construction from CNF and
// expressions, COPY-tensor branching and exact contraction of forests.
//
// A closed network built from a formula f evaluates to #f. Each variable
// that occurs in k >= 2 clauses becomes a COPY-tensor of degree k fed by a
// plus-cap; a variable occurring once feeds its clause through a plus-cap
// directly; every clause output is post-selected by a one-cap. Variables
// that occur nowhere are not materialized: they are recorded as
// `unconstrained_vars` and contribute a factor 2 each to the value.
#pragma once

#include "tnsharp/cnf.hpp"
#include "tnsharp/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tnsharp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Copy, Gate, Cap, VariableCap };

const char* role_name(NodeRole role);

/// How a gate node's tensor is generated. Stored symbolically so that wide
/// clauses cost nothing until (and unless) they are densified.
struct GateSpec {
  enum class Kind : std::uint8_t { Clause, And, Or, Not, Table };

  Kind kind = Kind::Table;
  std::vector<bool> polarity;  // Clause: one entry per input, false = negated
  std::size_t inputs = 0;      // And / Or
  TruthTable table;            // Table

  static GateSpec clause(std::vector<bool> polarity);
  static GateSpec conjunction(std::size_t m);
  static GateSpec disjunction(std::size_t m);
  static GateSpec negation();
  static GateSpec from_table(TruthTable table);

  std::size_t arity() const;
  TruthTable truth_table() const;
};

struct Endpoint {
  NodeId node = 0;
  std::uint32_t slot = 0;
};

/// An edge joins two endpoints; a dangling edge has only `a`, and its
/// `label` names the open wire (the variable index for Boolean states).
struct Edge {
  Endpoint a;
  std::optional<Endpoint> b;
  std::uint32_t label = 0;

  bool dangling() const { return !b.has_value(); }
};

struct Node {
  NodeRole role = NodeRole::Gate;
  std::vector<EdgeId> wires;  // slot -> edge
  Var var = 0;                // Copy / VariableCap: the variable
  CapKind cap = CapKind::Plus;
  GateSpec gate;
  std::optional<Tensor> tensor_override;  // replaces the generated tensor
};

struct NetworkStats {
  std::size_t n = 0;  // variables
  std::size_t m = 0;  // clauses
  std::size_t g = 0;  // gate nodes
  std::size_t c = 0;  // COPY nodes
  std::size_t d = 0;  // max COPY degree, 0 when c = 0
  BigInt branch_bound = 1;  // 2^c
};

class Network {
 public:
  Network() = default;
  explicit Network(Var num_vars) : num_vars_(num_vars) {}

  // Builder API. Slots are created wired to nothing; connect() fills them.
  NodeId add_copy(std::size_t degree, Var var);
  NodeId add_gate(GateSpec spec);
  NodeId add_cap(CapKind kind);
  NodeId add_variable_cap(Var var);
  NodeId add_tensor_node(NodeRole role, Tensor tensor);
  /// Fresh node with the same role, payload and slot count as `prototype`.
  NodeId add_like(const Node& prototype);
  void set_tensor(NodeId id, Tensor tensor);
  EdgeId connect(Endpoint a, Endpoint b);
  EdgeId leave_open(Endpoint a, std::uint32_t label);

  Var num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return num_clauses_; }
  void set_num_clauses(std::size_t m) { num_clauses_ = m; }
  std::size_t unconstrained_vars() const noexcept { return unconstrained_vars_; }
  void set_unconstrained_vars(std::size_t k) { unconstrained_vars_ = k; }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  /// Node tensor with each wire labelled by its edge id.
  Tensor tensor(NodeId id) const;

  /// COPY nodes in branching order: variable ascending.
  std::vector<NodeId> copy_nodes() const;

  /// Sorted labels of dangling edges.
  std::vector<std::uint32_t> dangling_signature() const;
  bool closed() const;

  /// Throws InvariantViolation if an edge or slot is inconsistent.
  void validate() const;

  /// Replaces every gate tensor by its normalization (real backend) and
  /// every cap by its real counterpart.
  Network normalized() const;

 private:
  NodeId add_node(Node node, std::size_t slots);

  Var num_vars_ = 0;
  std::size_t num_clauses_ = 0;
  std::size_t unconstrained_vars_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

/// Closed network whose value is #f.
Network build_boolean_network(const Formula& f);

/// Closed network for an expression: one gate per AND/OR/NOT node, COPY
/// nodes for repeated variables, root post-selected by a one-cap.
Network build_expr_network(const BoolExpr& e);

/// Open network for the state psi_f: one dangling wire per variable,
/// labelled by the variable index. Every occurring variable gets a COPY
/// node (degree 1 allowed); absent variables get a bare plus-cap.
Network build_boolean_state(const Formula& f);

/// Connects the dangling wires of x and y pairwise by label, giving the
/// closed network for the inner product <x, y>. Signatures must match.
Network join(const Network& x, const Network& y);

/// Merges every connected group of COPY nodes into a single COPY over the
/// group's outside legs (COPY-tensors compose to COPY-tensors). A group
/// with one outside leg becomes a plus-cap; a group with none contributes a
/// factor 2.
Network fuse_copies(const Network& n);

NetworkStats network_stats(const Network& n);

/// Acyclic wire-graph (forests accepted).
bool is_tree(const Network& n);

/// Exact value of a closed forest: each component contracted leaves-inward
/// in post-order, component values multiplied, times 2^unconstrained_vars.
/// Throws InvalidArgument when the network is open or has a cycle.
Scalar contract_forest(const Network& n);

/// Removes one COPY node, attaching zero-caps (first) or one-caps (second)
/// to every wire it touched. value(n) = value(first) + value(second).
std::pair<Network, Network> branch_on_copy(const Network& n, NodeId copy);

/// Applies every COPY branch at once. Bit i of `assignment` (counting from
/// the most significant of copy_nodes().size() bits) fixes copy_nodes()[i].
Network fix_copies(const Network& n, std::uint64_t assignment);

/// Value of any closed network: sum over all COPY assignments of the
/// resulting forest's value. Refuses more than `max_copies` COPY nodes.
Scalar network_value(const Network& n, std::size_t max_copies = 24);

/// <1| N^dagger N |1> for a COPY-free tree rooted at its one-cap: the nested
/// diagonal maps folded from the leaves up. Variable wires of N and its
/// adjoint are joined directly. With `normalized` the gates are replaced by
/// their normalizations first and the result is a double; otherwise the
/// result is exact and includes the 2^unconstrained_vars factor.
Scalar contract_norm_tree(const Network& n, bool normalized);

/// Adjacency dump: `<id> <role> deg=<k> [var=<v>] -> <neighbours>`, one node
/// per line, open wires shown as `*<label>`.
std::string dump(const Network& n);

}  // namespace tnsharp
