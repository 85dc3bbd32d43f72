#include "tnsharp/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace tnsharp {

namespace {

constexpr EdgeId kUnwired = UINT32_MAX;

}  // namespace

const char* role_name(NodeRole role) {
  switch (role) {
    case NodeRole::Copy:
      return "copy";
    case NodeRole::Gate:
      return "gate";
    case NodeRole::Cap:
      return "cap";
    case NodeRole::VariableCap:
      return "varcap";
  }
  return "?";
}

// --- GateSpec ----------------------------------------------------------------

GateSpec GateSpec::clause(std::vector<bool> polarity) {
  GateSpec s;
  s.kind = Kind::Clause;
  s.polarity = std::move(polarity);
  return s;
}

GateSpec GateSpec::conjunction(std::size_t m) {
  GateSpec s;
  s.kind = Kind::And;
  s.inputs = m;
  return s;
}

GateSpec GateSpec::disjunction(std::size_t m) {
  GateSpec s;
  s.kind = Kind::Or;
  s.inputs = m;
  return s;
}

GateSpec GateSpec::negation() {
  GateSpec s;
  s.kind = Kind::Not;
  s.inputs = 1;
  return s;
}

GateSpec GateSpec::from_table(TruthTable table) {
  const std::size_t rows = table.size();
  if (rows == 0 || (rows & (rows - 1)) != 0) throw InvalidArgument("truth table length must be a power of two");
  GateSpec s;
  s.kind = Kind::Table;
  s.table = std::move(table);
  return s;
}

std::size_t GateSpec::arity() const {
  switch (kind) {
    case Kind::Clause:
      return polarity.size();
    case Kind::Table: {
      std::size_t m = 0;
      while ((std::size_t{1} << m) < table.size()) ++m;
      return m;
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Not:
      break;
  }
  return inputs;
}

TruthTable GateSpec::truth_table() const {
  switch (kind) {
    case Kind::Clause:
      return clause_table(polarity);
    case Kind::And:
      return and_table(inputs);
    case Kind::Or:
      return or_table(inputs);
    case Kind::Not:
      return not_table();
    case Kind::Table:
      break;
  }
  return table;
}

// --- Network -----------------------------------------------------------------

NodeId Network::add_node(Node node, std::size_t slots) {
  node.wires.assign(slots, kUnwired);
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Network::add_copy(std::size_t degree, Var var) {
  if (degree == 0) throw InvalidArgument("COPY degree must be at least 1");
  Node n;
  n.role = NodeRole::Copy;
  n.var = var;
  return add_node(std::move(n), degree + 1);
}

NodeId Network::add_gate(GateSpec spec) {
  Node n;
  n.role = NodeRole::Gate;
  const auto slots = spec.arity() + 1;
  n.gate = std::move(spec);
  return add_node(std::move(n), slots);
}

NodeId Network::add_cap(CapKind kind) {
  Node n;
  n.role = NodeRole::Cap;
  n.cap = kind;
  return add_node(std::move(n), 1);
}

NodeId Network::add_variable_cap(Var var) {
  Node n;
  n.role = NodeRole::VariableCap;
  n.cap = CapKind::Plus;
  n.var = var;
  return add_node(std::move(n), 1);
}

NodeId Network::add_tensor_node(NodeRole role, Tensor tensor) {
  Node n;
  n.role = role;
  const auto slots = tensor.rank();
  n.tensor_override = std::move(tensor);
  return add_node(std::move(n), slots);
}

NodeId Network::add_like(const Node& prototype) {
  Node n = prototype;
  const auto slots = n.wires.size();
  return add_node(std::move(n), slots);
}

void Network::set_tensor(NodeId id, Tensor tensor) {
  auto& n = nodes_.at(id);
  if (tensor.rank() != n.wires.size()) throw InvalidArgument("replacement tensor has the wrong rank");
  n.tensor_override = std::move(tensor);
}

EdgeId Network::connect(Endpoint a, Endpoint b) {
  auto& wa = nodes_.at(a.node).wires.at(a.slot);
  auto& wb = nodes_.at(b.node).wires.at(b.slot);
  if (wa != kUnwired || wb != kUnwired) throw InvalidArgument("slot already wired");
  if (a.node == b.node && a.slot == b.slot) throw InvalidArgument("cannot wire a slot to itself");
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{a, b, id});
  wa = wb = id;
  return id;
}

EdgeId Network::leave_open(Endpoint a, std::uint32_t label) {
  auto& wa = nodes_.at(a.node).wires.at(a.slot);
  if (wa != kUnwired) throw InvalidArgument("slot already wired");
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{a, std::nullopt, label});
  wa = id;
  return id;
}

Tensor Network::tensor(NodeId id) const {
  const Node& n = nodes_.at(id);
  std::vector<Wire> labels;
  labels.reserve(n.wires.size());
  for (auto e : n.wires) {
    if (e == kUnwired) throw InvariantViolation("node " + std::to_string(id) + " has an unwired slot");
    labels.push_back(wire(e));
  }
  if (n.tensor_override) return n.tensor_override->relabeled(std::move(labels));
  switch (n.role) {
    case NodeRole::Copy:
      return copy_tensor(n.wires.size() - 1).relabeled(std::move(labels));
    case NodeRole::Gate:
      return gate_tensor(n.gate.truth_table()).relabeled(std::move(labels));
    case NodeRole::Cap:
    case NodeRole::VariableCap:
      break;
  }
  return cap(n.cap).relabeled(std::move(labels));
}

std::vector<NodeId> Network::copy_nodes() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].role == NodeRole::Copy) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) { return nodes_[a].var < nodes_[b].var; });
  return out;
}

std::vector<std::uint32_t> Network::dangling_signature() const {
  std::vector<std::uint32_t> sig;
  for (const auto& e : edges_) {
    if (e.dangling()) sig.push_back(e.label);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

bool Network::closed() const {
  return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.dangling(); });
}

void Network::validate() const {
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    for (std::uint32_t s = 0; s < n.wires.size(); ++s) {
      const auto e = n.wires[s];
      if (e == kUnwired || e >= edges_.size()) {
        throw InvariantViolation("node " + std::to_string(i) + " slot " + std::to_string(s) + " is unwired");
      }
      const auto& edge = edges_[e];
      const bool at_a = edge.a.node == i && edge.a.slot == s;
      const bool at_b = edge.b && edge.b->node == i && edge.b->slot == s;
      if (!at_a && !at_b) throw InvariantViolation("edge " + std::to_string(e) + " does not point back to its node");
    }
    if (n.role == NodeRole::Copy && n.wires.size() < 2) throw InvariantViolation("COPY node without clause side");
  }
}

Network Network::normalized() const {
  Network out = *this;
  for (NodeId i = 0; i < out.nodes_.size(); ++i) {
    auto& n = out.nodes_[i];
    Tensor t = n.tensor_override ? *n.tensor_override
               : n.role == NodeRole::Gate ? gate_tensor(n.gate.truth_table())
               : n.role == NodeRole::Copy ? copy_tensor(n.wires.size() - 1)
                                          : cap(n.cap);
    if (n.role == NodeRole::Gate && t.backend() == Backend::Exact) {
      n.tensor_override = normalize_gate(t);
    } else {
      n.tensor_override = t.to_real();
    }
  }
  return out;
}

// --- Builders ----------------------------------------------------------------

namespace {

// Wires each variable to its occurrences. `open_state` keeps a COPY for every
// occurring variable and leaves its variable side dangling.
void wire_variables(Network& net, const std::vector<std::vector<Endpoint>>& occurrences, bool open_state) {
  std::size_t unconstrained = 0;
  for (Var v = 1; v < occurrences.size(); ++v) {
    const auto& occ = occurrences[v];
    if (occ.empty()) {
      if (open_state) {
        net.leave_open({net.add_variable_cap(v), 0}, v);
      } else {
        ++unconstrained;
      }
      continue;
    }
    if (occ.size() == 1 && !open_state) {
      net.connect({net.add_variable_cap(v), 0}, occ.front());
      continue;
    }
    const NodeId copy = net.add_copy(occ.size(), v);
    if (open_state) {
      net.leave_open({copy, 0}, v);
    } else {
      net.connect({net.add_variable_cap(v), 0}, {copy, 0});
    }
    for (std::uint32_t i = 0; i < occ.size(); ++i) net.connect({copy, i + 1}, occ[i]);
  }
  net.set_unconstrained_vars(unconstrained);
}

Network build_from_formula(const Formula& f, bool open_state) {
  Network net(f.num_vars());
  net.set_num_clauses(f.num_clauses());
  std::vector<std::vector<Endpoint>> occurrences(std::size_t{f.num_vars()} + 1);
  for (const auto& clause : f.clauses()) {
    std::vector<bool> polarity;
    polarity.reserve(clause.size());
    for (const auto& lit : clause) polarity.push_back(lit.positive);
    const NodeId gate = net.add_gate(GateSpec::clause(std::move(polarity)));
    const auto out = static_cast<std::uint32_t>(clause.size());
    net.connect({gate, out}, {net.add_cap(CapKind::One), 0});
    for (std::uint32_t i = 0; i < clause.size(); ++i) occurrences[clause[i].var].push_back({gate, i});
  }
  wire_variables(net, occurrences, open_state);
  return net;
}

}  // namespace

Network build_boolean_network(const Formula& f) { return build_from_formula(f, false); }

Network build_boolean_state(const Formula& f) { return build_from_formula(f, true); }

Network build_expr_network(const BoolExpr& e) {
  Network net(e.num_vars());
  std::vector<NodeId> gate_of(e.size(), 0);
  std::vector<std::vector<Endpoint>> occurrences(std::size_t{e.num_vars()} + 1);

  // Gates in arena order, then wiring; arena order is a valid creation order
  // because children always precede parents.
  for (std::uint32_t id = 0; id < e.size(); ++id) {
    const auto& n = e.node(id);
    switch (n.kind) {
      case ExprKind::Var:
        break;
      case ExprKind::Not:
        gate_of[id] = net.add_gate(GateSpec::negation());
        break;
      case ExprKind::And:
        gate_of[id] = net.add_gate(GateSpec::conjunction(n.children.size()));
        break;
      case ExprKind::Or:
        gate_of[id] = net.add_gate(GateSpec::disjunction(n.children.size()));
        break;
    }
  }
  auto output_of = [&](std::uint32_t id) {
    return Endpoint{gate_of[id], static_cast<std::uint32_t>(e.node(id).children.size())};
  };
  for (std::uint32_t id = 0; id < e.size(); ++id) {
    const auto& n = e.node(id);
    for (std::uint32_t i = 0; i < n.children.size(); ++i) {
      const auto child = n.children[i];
      const Endpoint input{gate_of[id], i};
      if (e.node(child).kind == ExprKind::Var) {
        occurrences[e.node(child).var].push_back(input);
      } else {
        net.connect(output_of(child), input);
      }
    }
  }
  const NodeId out_cap = net.add_cap(CapKind::One);
  if (e.node(e.root()).kind == ExprKind::Var) {
    occurrences[e.node(e.root()).var].push_back({out_cap, 0});
  } else {
    net.connect(output_of(e.root()), {out_cap, 0});
  }
  wire_variables(net, occurrences, false);
  return net;
}

Network join(const Network& x, const Network& y) {
  const auto sig_x = x.dangling_signature();
  const auto sig_y = y.dangling_signature();
  if (sig_x != sig_y) throw InvalidArgument("cannot join networks with different open-wire signatures");
  if (std::adjacent_find(sig_x.begin(), sig_x.end()) != sig_x.end()) {
    throw InvalidArgument("open-wire labels must be unique to join");
  }
  Network out(std::max(x.num_vars(), y.num_vars()));
  out.set_num_clauses(x.num_clauses() + y.num_clauses());
  out.set_unconstrained_vars(x.unconstrained_vars() + y.unconstrained_vars());

  auto copy_nodes = [&](const Network& src) {
    const auto base = static_cast<NodeId>(out.nodes().size());
    for (const auto& n : src.nodes()) out.add_like(n);
    return base;
  };
  const NodeId base_x = copy_nodes(x);
  const NodeId base_y = copy_nodes(y);
  auto shift = [](Endpoint e, NodeId base) { return Endpoint{e.node + base, e.slot}; };

  for (const auto& e : x.edges()) {
    if (!e.dangling()) out.connect(shift(e.a, base_x), shift(*e.b, base_x));
  }
  for (const auto& e : y.edges()) {
    if (!e.dangling()) out.connect(shift(e.a, base_y), shift(*e.b, base_y));
  }
  for (auto label : sig_x) {
    auto find = [label](const Network& n) {
      return std::find_if(n.edges().begin(), n.edges().end(),
                          [label](const Edge& e) { return e.dangling() && e.label == label; })
          ->a;
    };
    out.connect(shift(find(x), base_x), shift(find(y), base_y));
  }
  return out;
}

// --- Analysis ------------------------------------------------------------------

NetworkStats network_stats(const Network& net) {
  NetworkStats s;
  s.n = net.num_vars();
  s.m = net.num_clauses();
  for (const auto& n : net.nodes()) {
    if (n.role == NodeRole::Gate) ++s.g;
    if (n.role == NodeRole::Copy) {
      ++s.c;
      s.d = std::max(s.d, n.wires.size() - 1);
    }
  }
  s.branch_bound = pow2(s.c);
  return s;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

NodeId other_end(const Edge& e, NodeId from) { return e.a.node == from ? e.b->node : e.a.node; }

}  // namespace

bool is_tree(const Network& net) {
  DisjointSets sets(net.nodes().size());
  for (const auto& e : net.edges()) {
    if (e.dangling()) continue;
    if (!sets.unite(e.a.node, e.b->node)) return false;
  }
  return true;
}

namespace {

// Per component: root and the preorder (parent before child) with the edge
// each node hangs from. Children follow their parent's slot order.
struct Traversal {
  NodeId root;
  std::vector<std::pair<NodeId, EdgeId>> preorder;
};

std::vector<Traversal> components(const Network& net) {
  std::vector<Traversal> out;
  std::vector<bool> seen(net.nodes().size(), false);
  for (NodeId r = 0; r < net.nodes().size(); ++r) {
    if (seen[r]) continue;
    Traversal t{r, {}};
    std::vector<std::pair<NodeId, EdgeId>> stack{{r, kUnwired}};
    seen[r] = true;
    while (!stack.empty()) {
      auto [id, via] = stack.back();
      stack.pop_back();
      t.preorder.emplace_back(id, via);
      const auto& wires = net.node(id).wires;
      for (auto it = wires.rbegin(); it != wires.rend(); ++it) {
        const auto& e = net.edges()[*it];
        if (*it == via || e.dangling()) continue;
        const NodeId next = other_end(e, id);
        if (seen[next]) continue;
        seen[next] = true;
        stack.emplace_back(next, *it);
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

Scalar unit_like(Backend b) { return b == Backend::Exact ? Scalar(BigInt{1}) : Scalar(1.0); }

Scalar power_of_two(Backend b, std::size_t k) {
  return b == Backend::Exact ? Scalar(pow2(k)) : Scalar(std::ldexp(1.0, static_cast<int>(k)));
}

Backend network_backend(const Network& net) {
  for (const auto& n : net.nodes()) {
    if (n.tensor_override && n.tensor_override->backend() == Backend::Real) return Backend::Real;
  }
  return Backend::Exact;
}

}  // namespace

Network fuse_copies(const Network& net) {
  const auto& nodes = net.nodes();
  auto is_copy = [&](NodeId id) { return nodes[id].role == NodeRole::Copy; };
  auto internal = [&](const Edge& e) { return !e.dangling() && is_copy(e.a.node) && is_copy(e.b->node); };

  DisjointSets groups(nodes.size());
  for (const auto& e : net.edges()) {
    if (internal(e)) groups.unite(e.a.node, e.b->node);
  }

  Network out(net.num_vars());
  out.set_num_clauses(net.num_clauses());
  std::size_t unconstrained = net.unconstrained_vars();

  // New endpoint for every old (node, slot) that survives.
  std::vector<std::vector<Endpoint>> where(nodes.size());
  for (NodeId i = 0; i < nodes.size(); ++i) {
    if (is_copy(i)) continue;
    const NodeId id = out.add_like(nodes[i]);
    for (std::uint32_t s = 0; s < nodes[i].wires.size(); ++s) where[i].push_back({id, s});
  }
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> legs(nodes.size());
  std::vector<Var> group_var(nodes.size(), std::numeric_limits<Var>::max());
  for (NodeId i = 0; i < nodes.size(); ++i) {
    if (!is_copy(i)) continue;
    const auto root = groups.find(i);
    group_var[root] = std::min(group_var[root], nodes[i].var);
    where[i].resize(nodes[i].wires.size());
    for (std::uint32_t s = 0; s < nodes[i].wires.size(); ++s) {
      if (!internal(net.edges()[nodes[i].wires[s]])) legs[root].emplace_back(i, s);
    }
  }
  for (NodeId r = 0; r < nodes.size(); ++r) {
    if (!is_copy(r) || groups.find(r) != r) continue;
    const auto& outside = legs[r];
    if (outside.empty()) {
      ++unconstrained;
      continue;
    }
    const NodeId id = outside.size() == 1 ? out.add_variable_cap(group_var[r]) : out.add_copy(outside.size() - 1, group_var[r]);
    for (std::uint32_t k = 0; k < outside.size(); ++k) where[outside[k].first][outside[k].second] = {id, k};
  }
  for (const auto& e : net.edges()) {
    if (internal(e)) continue;
    const Endpoint a = where[e.a.node][e.a.slot];
    if (e.dangling()) {
      out.leave_open(a, e.label);
    } else {
      out.connect(a, where[e.b->node][e.b->slot]);
    }
  }
  out.set_unconstrained_vars(unconstrained);
  return out;
}

Scalar contract_forest(const Network& net) {
  if (!net.closed()) throw InvalidArgument("contract_forest needs a closed network");
  if (!is_tree(net)) throw InvalidArgument("contract_forest called on a network with a cycle");
  const Backend backend = network_backend(net);
  Scalar product = unit_like(backend);
  std::vector<std::optional<Tensor>> acc(net.nodes().size());
  for (const auto& comp : components(net)) {
    for (auto it = comp.preorder.rbegin(); it != comp.preorder.rend(); ++it) {
      const auto [id, via] = *it;
      Tensor t = net.tensor(id);
      for (auto e : net.node(id).wires) {
        if (e == via) continue;
        const NodeId child = other_end(net.edges()[e], id);
        t = contract_shared(t, *acc[child]);
        acc[child].reset();
      }
      acc[id] = std::move(t);
    }
    product = product * acc[comp.root]->value();
    acc[comp.root].reset();
  }
  return product * power_of_two(backend, net.unconstrained_vars());
}

namespace {

Network replace_copies(const Network& net, const std::vector<std::int8_t>& fixed) {
  Network out(net.num_vars());
  out.set_num_clauses(net.num_clauses());
  out.set_unconstrained_vars(net.unconstrained_vars());
  std::vector<NodeId> remap(net.nodes().size(), kUnwired);
  for (NodeId i = 0; i < net.nodes().size(); ++i) {
    if (fixed[i] >= 0) continue;
    remap[i] = out.add_like(net.node(i));
  }
  const bool real = network_backend(net) == Backend::Real;
  auto resolve = [&](Endpoint ep) {
    if (fixed[ep.node] < 0) return Endpoint{remap[ep.node], ep.slot};
    const NodeId c = out.add_cap(fixed[ep.node] ? CapKind::One : CapKind::Zero);
    if (real) out.set_tensor(c, cap(out.node(c).cap).to_real());
    return Endpoint{c, 0};
  };
  for (const auto& e : net.edges()) {
    const Endpoint a = resolve(e.a);
    if (e.dangling()) {
      out.leave_open(a, e.label);
    } else {
      out.connect(a, resolve(*e.b));
    }
  }
  return out;
}

}  // namespace

std::pair<Network, Network> branch_on_copy(const Network& net, NodeId copy) {
  if (copy >= net.nodes().size() || net.node(copy).role != NodeRole::Copy) {
    throw InvalidArgument("node " + std::to_string(copy) + " is not a COPY node");
  }
  std::vector<std::int8_t> fixed(net.nodes().size(), -1);
  fixed[copy] = 0;
  Network zero = replace_copies(net, fixed);
  fixed[copy] = 1;
  Network one = replace_copies(net, fixed);
  return {std::move(zero), std::move(one)};
}

Network fix_copies(const Network& net, std::uint64_t assignment) {
  const auto copies = net.copy_nodes();
  if (copies.size() > 63) throw TooLarge("too many COPY nodes to enumerate");
  std::vector<std::int8_t> fixed(net.nodes().size(), -1);
  const std::size_t c = copies.size();
  for (std::size_t i = 0; i < c; ++i) fixed[copies[i]] = static_cast<std::int8_t>((assignment >> (c - 1 - i)) & 1U);
  return replace_copies(net, fixed);
}

Scalar network_value(const Network& net, std::size_t max_copies) {
  const std::size_t c = net.copy_nodes().size();
  if (c > max_copies) throw BranchGuardExceeded(c, max_copies);
  Scalar total = network_backend(net) == Backend::Exact ? Scalar(BigInt{0}) : Scalar(0.0);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << c); ++a) total = total + contract_forest(fix_copies(net, a));
  return total;
}

Scalar contract_norm_tree(const Network& source, bool normalized) {
  if (!source.copy_nodes().empty()) throw InvalidArgument("norm contraction needs a COPY-free network");
  if (!source.closed() || !is_tree(source)) throw InvalidArgument("norm contraction needs a closed tree");
  const Network net = normalized ? source.normalized() : source;
  const Backend backend = normalized ? Backend::Real : Backend::Exact;
  const auto primed_base = static_cast<std::uint32_t>(net.edges().size());
  auto primed = [&](Wire w) { return wire(wire_id(w) + primed_base); };
  auto identity_on = [&](EdgeId e) {
    std::vector<Wire> wires{wire(e), primed(wire(e))};
    return backend == Backend::Exact ? Tensor::exact(wires, {1, 0, 0, 1}) : Tensor::real(wires, {1.0, 0.0, 0.0, 1.0});
  };

  Scalar product = unit_like(backend);
  for (const auto& comp0 : components(net)) {
    // Root each component at its single output cap.
    NodeId root = kUnwired;
    for (const auto& [id, via] : comp0.preorder) {
      const auto role = net.node(id).role;
      if (role == NodeRole::Cap) {
        if (root != kUnwired) throw InvalidArgument("norm contraction needs one output cap per component");
        root = id;
      } else if (role != NodeRole::Gate && role != NodeRole::VariableCap) {
        throw InvalidArgument("unexpected node in norm contraction");
      }
    }
    if (root == kUnwired) throw InvalidArgument("component without an output cap");

    // Preorder from the root.
    std::vector<std::pair<NodeId, EdgeId>> order;
    std::vector<std::pair<NodeId, EdgeId>> stack{{root, kUnwired}};
    while (!stack.empty()) {
      auto [id, via] = stack.back();
      stack.pop_back();
      order.emplace_back(id, via);
      for (auto e : net.node(id).wires) {
        if (e != via) stack.emplace_back(other_end(net.edges()[e], id), e);
      }
    }

    // Diagonal map of each subtree on (edge to parent, its primed copy).
    std::vector<std::optional<Tensor>> diag(net.nodes().size());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto [id, via] = *it;
      const auto& node = net.node(id);
      if (id == root) continue;
      if (node.role == NodeRole::VariableCap) {
        diag[id] = identity_on(via);
        continue;
      }
      Tensor ket = net.tensor(id);
      std::vector<Wire> bra_wires;
      for (auto w : ket.wires()) bra_wires.push_back(primed(w));
      const Tensor bra = ket.relabeled(bra_wires);
      for (auto e : node.wires) {
        if (e == via) continue;
        const NodeId child = other_end(net.edges()[e], id);
        ket = contract_shared(ket, *diag[child]);
        diag[child].reset();
      }
      diag[id] = contract_shared(ket, bra);
    }
    const EdgeId top = net.node(root).wires.front();
    const NodeId child = other_end(net.edges()[top], root);
    const Tensor out_cap = net.tensor(root);
    const Tensor half = contract_shared(out_cap, *diag[child]);
    const Tensor value = contract_shared(half, out_cap.relabeled({primed(wire(top))}));
    product = product * value.value();
  }
  if (backend == Backend::Exact) product = product * power_of_two(backend, net.unconstrained_vars());
  return product;
}

std::string dump(const Network& net) {
  std::ostringstream out;
  for (NodeId i = 0; i < net.nodes().size(); ++i) {
    const auto& n = net.node(i);
    out << i << ' ' << role_name(n.role) << " deg=" << n.wires.size();
    if (n.role == NodeRole::Copy || n.role == NodeRole::VariableCap) out << " var=" << n.var;
    out << " ->";
    for (auto e : n.wires) {
      const auto& edge = net.edges()[e];
      if (edge.dangling()) {
        out << " *" << edge.label;
      } else {
        out << ' ' << other_end(edge, i);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tnsharp
