#ifndef VMCLAB_MAXFLOW_HPP
#define VMCLAB_MAXFLOW_HPP

#include <cstdint>
#include <vector>

namespace vmclab {

/// Exact integer max-flow / min-cut on a node set with implicit source and
/// sink, in the tree-growing style of augmenting-path solvers tuned for grid
/// graphs. Terminal capacities are folded per node: tr_cap > 0 is a residual
/// source arc, tr_cap < 0 a residual sink arc. Arcs live in a CSR layout built
/// on the first solve() call.
///
/// After solve(), source_side(v) reports the minimal minimum cut (the
/// intersection of all min-cut source sides), which is what makes parametric
/// sweeps monotone.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes, std::int64_t expected_edges = 0);

  /// Pairwise edge with capacities in both directions.
  void add_edge(int u, int v, std::int64_t cap_uv, std::int64_t cap_vu);
  /// Accumulates terminal capacity: source->v and v->sink.
  void add_terminal(int v, std::int64_t source_cap, std::int64_t sink_cap);

  std::int64_t solve();

  bool source_side(int v) const { return tree_[v] == kSource; }
  std::int64_t flow() const { return flow_; }
  int num_nodes() const { return int(tr_cap_.size()); }
  std::int64_t num_arcs() const { return std::int64_t(head_.size()); }

  /// Original-capacity cut value of the labeling from source_side(), computed
  /// as flow + crossing residual. Equal to flow() iff the labeling is an
  /// optimal cut; solve() checks this and throws std::logic_error on mismatch.
  std::int64_t cut_value() const;

 private:
  static constexpr int kFree = 0, kSource = 1, kSink = 2;
  static constexpr int kParentNone = -1, kParentTerminal = -2, kParentOrphan = -3;

  void build_csr();
  int grow();
  void augment(int bridge);
  void adopt();
  void make_orphan(int v);
  void activate(int v);
  int next_active();

  // staging (before solve)
  struct Staged {
    int u, v;
    std::int64_t cap_uv, cap_vu;
  };
  std::vector<Staged> staged_;

  // CSR arcs
  std::vector<int> arc_begin_;           // per node, into head_/sister_/rcap_
  std::vector<int> head_;
  std::vector<int> sister_;
  std::vector<std::int64_t> rcap_;

  std::vector<std::int64_t> tr_cap_;
  std::vector<int> parent_arc_;
  std::vector<unsigned char> tree_;
  std::vector<unsigned char> in_active_;
  std::vector<int> active_;
  std::size_t active_pos_ = 0;
  std::vector<int> orphans_;
  std::size_t orphan_pos_ = 0;
  int scan_node_ = -1;  // node whose arc sweep is in progress
  int scan_pos_ = 0;
  std::int64_t flow_ = 0;
  bool solved_ = false;
};

}  // namespace vmclab

#endif
