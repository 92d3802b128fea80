#include "nlms/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace nlms {

MaxFlow::MaxFlow(int num_nodes) : n_(num_nodes), adj_(num_nodes) {}

void MaxFlow::add_edge(int u, int v, double cap, double rev_cap) {
  Arc a{v, int(adj_[v].size()), cap};
  Arc b{u, int(adj_[u].size()), rev_cap};
  adj_[u].push_back(a);
  adj_[v].push_back(b);
  eps_ = std::max(eps_, std::max(cap, rev_cap));
}

double MaxFlow::solve(int source, int sink) {
  source_ = source;
  sink_ = sink;
  const double eps = eps_ * 1e-15;
  std::vector<double> excess(n_, 0.0);
  std::vector<int> height(n_, 0), count(2 * n_ + 1, 0);
  std::vector<uint8_t> active(n_, 0);
  std::queue<int> q;

  height[source] = n_;
  count[0] = n_ - 1;
  count[n_] = 1;

  auto push = [&](int u, Arc& a) {
    double amt = std::min(excess[u], a.cap);
    a.cap -= amt;
    adj_[a.to][a.rev].cap += amt;
    excess[u] -= amt;
    excess[a.to] += amt;
    if (a.to != source && a.to != sink && !active[a.to] && excess[a.to] > eps) {
      active[a.to] = 1;
      q.push(a.to);
    }
  };

  for (Arc& a : adj_[source]) {
    excess[source] = a.cap;
    push(source, a);
  }
  excess[source] = 0.0;

  while (!q.empty()) {
    int u = q.front();
    q.pop();
    active[u] = 0;
    while (excess[u] > eps) {
      bool pushed = false;
      for (Arc& a : adj_[u]) {
        if (a.cap > eps && height[u] == height[a.to] + 1) {
          push(u, a);
          pushed = true;
          if (excess[u] <= eps) break;
        }
      }
      if (excess[u] <= eps) break;
      if (!pushed) {
        // relabel, with the gap heuristic
        int old = height[u];
        int hmin = 2 * n_;
        for (Arc& a : adj_[u])
          if (a.cap > eps) hmin = std::min(hmin, height[a.to] + 1);
        height[u] = hmin;
        if (hmin >= 2 * n_) break;
        count[old]--;
        count[hmin]++;
        if (count[old] == 0 && old < n_) {
          for (int v = 0; v < n_; ++v)
            if (v != source && height[v] > old && height[v] < n_) {
              count[height[v]]--;
              height[v] = n_ + 1;
              count[height[v]]++;
            }
        }
      }
    }
  }

  return excess[sink];
}

std::vector<uint8_t> MaxFlow::source_side() const {
  std::vector<uint8_t> vis(n_, 0);
  const double eps = eps_ * 1e-15;
  std::queue<int> q;
  q.push(source_);
  vis[source_] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Arc& a : adj_[u])
      if (a.cap > eps && !vis[a.to]) {
        vis[a.to] = 1;
        q.push(a.to);
      }
  }
  return vis;
}

}  // namespace nlms
