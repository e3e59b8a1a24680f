#pragma once

#include <functional>
#include <memory>
#include <unordered_map>

#include "hbvc/tensor.hpp"

namespace hbvc {

struct Node;
using Var = std::shared_ptr<Node>;

// Gradients live outside the graph so that several threads can run
// backward over graphs sharing the same parameter leaves.
class GradMap {
 public:
  // Accumulates g into the entry for var. No-op if var does not need grad.
  void accum(const Var& var, const Tensor& g);
  void accum(const Var& var, Tensor&& g);

  const Tensor* find(const Node* n) const;
  Tensor* find(const Node* n);
  void erase(const Node* n) { grads_.erase(n); }
  void clear() { grads_.clear(); }
  size_t size() const { return grads_.size(); }

 private:
  std::unordered_map<const Node*, Tensor> grads_;
};

using BackwardFn = std::function<void(const Tensor& gout, Node& self, GradMap& grads)>;

struct Node {
  Tensor val;
  bool needs_grad = false;
  int64_t seq = 0;
  std::vector<Var> parents;
  BackwardFn back;
};

// Thread-local autograd switch; inference paths disable graph recording.
bool grad_enabled();
void set_grad_enabled(bool on);

struct NoGradGuard {
  NoGradGuard() : prev_(grad_enabled()) { set_grad_enabled(false); }
  ~NoGradGuard() { set_grad_enabled(prev_); }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

// Leaf holding a trainable parameter.
Var make_param(Tensor t);
// Leaf holding data (no gradient tracking).
Var make_const(Tensor t);
// Internal: op node, records parents/backward only while grad is enabled
// and at least one parent needs it.
Var make_op(Tensor out, std::vector<Var> parents, BackwardFn back);

// Reverse-mode sweep from a scalar root. Grad entries of interior nodes are
// dropped as soon as they have been consumed; leaves keep theirs.
void backward(const Var& root, GradMap& grads);

}  // namespace hbvc
