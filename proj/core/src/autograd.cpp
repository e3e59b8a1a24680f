#include "hbvc/autograd.hpp"

#include <algorithm>
#include <atomic>

namespace hbvc {

namespace {
std::atomic<int64_t> g_seq{1};
thread_local bool g_grad_enabled = true;
}  // namespace

bool grad_enabled() { return g_grad_enabled; }
void set_grad_enabled(bool on) { g_grad_enabled = on; }

void GradMap::accum(const Var& var, const Tensor& g) {
  if (!var || !var->needs_grad) return;
  Tensor& slot = grads_[var.get()];
  if (slot.empty()) {
    slot = g;
  } else {
    slot += g;
  }
}

void GradMap::accum(const Var& var, Tensor&& g) {
  if (!var || !var->needs_grad) return;
  Tensor& slot = grads_[var.get()];
  if (slot.empty()) {
    slot = std::move(g);
  } else {
    slot += g;
  }
}

const Tensor* GradMap::find(const Node* n) const {
  auto it = grads_.find(n);
  return it == grads_.end() ? nullptr : &it->second;
}

Tensor* GradMap::find(const Node* n) {
  auto it = grads_.find(n);
  return it == grads_.end() ? nullptr : &it->second;
}

Var make_param(Tensor t) {
  auto n = std::make_shared<Node>();
  n->val = std::move(t);
  n->needs_grad = true;
  n->seq = g_seq.fetch_add(1, std::memory_order_relaxed);
  return n;
}

Var make_const(Tensor t) {
  auto n = std::make_shared<Node>();
  n->val = std::move(t);
  n->needs_grad = false;
  n->seq = g_seq.fetch_add(1, std::memory_order_relaxed);
  return n;
}

Var make_op(Tensor out, std::vector<Var> parents, BackwardFn back) {
  auto n = std::make_shared<Node>();
  n->val = std::move(out);
  n->seq = g_seq.fetch_add(1, std::memory_order_relaxed);
  if (grad_enabled()) {
    bool any = false;
    for (const auto& p : parents)
      if (p && p->needs_grad) any = true;
    if (any) {
      n->needs_grad = true;
      n->parents = std::move(parents);
      n->back = std::move(back);
    }
  }
  return n;
}

void backward(const Var& root, GradMap& grads) {
  HBVC_CHECK(root && root->val.numel() == 1, "backward expects a scalar root");
  if (!root->needs_grad) return;

  // Collect the grad-requiring subgraph; creation order is a topological
  // order because parents always precede children.
  std::vector<Node*> nodes;
  std::unordered_map<const Node*, bool> seen;
  std::vector<Node*> stack{root.get()};
  seen[root.get()] = true;
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    nodes.push_back(n);
    for (const auto& p : n->parents) {
      if (p && p->needs_grad && !seen[p.get()]) {
        seen[p.get()] = true;
        stack.push_back(p.get());
      }
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node* a, const Node* b) { return a->seq > b->seq; });

  grads.accum(root, Tensor({1}, 1.0));
  for (Node* n : nodes) {
    const Tensor* g = grads.find(n);
    if (!g) continue;  // not on the gradient path
    if (n->back) {
      n->back(*g, *n, grads);
      grads.erase(n);  // interior grad fully consumed
    }
    // Leaves (no back fn) keep their accumulated gradient.
  }
}

}  // namespace hbvc
