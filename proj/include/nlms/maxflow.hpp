// FIFO push-relabel max-flow with gap relabeling, double capacities.
#pragma once

#include <cstdint>
#include <vector>

namespace nlms {

class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);
  // Adds a directed edge u->v with the given capacity (and its reverse).
  void add_edge(int u, int v, double cap, double rev_cap = 0.0);
  double solve(int source, int sink);
  // Nodes reachable from the source in the residual graph after solve():
  // the minimal source side among minimum cuts.
  std::vector<uint8_t> source_side() const;

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
  };
  int n_;
  int source_ = -1, sink_ = -1;
  double eps_ = 0.0;
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace nlms
