#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace raman::nn {

namespace detail {

struct Node {
    std::vector<int> shape;
    std::vector<double> v;
    std::vector<double> g;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward_fn;

    int64_t size() const { return static_cast<int64_t>(v.size()); }
    void ensure_grad() {
        if (g.size() != v.size()) g.assign(v.size(), 0.0);
    }
};

}  // namespace detail

// Reverse-mode autodiff tensor: a shared node carrying values, an optional
// same-shape gradient, and the tape edge that produced it. Ops record a
// backward closure only while gradients are enabled and some input requires
// them, so inference builds no graph.
class Tensor {
  public:
    Tensor() = default;

    static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
    static Tensor full(std::vector<int> shape, double value, bool requires_grad = false);
    static Tensor from_values(std::vector<int> shape, std::vector<double> values,
                              bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const std::vector<int>& shape() const { return node_->shape; }
    int dim(int i) const { return node_->shape[i]; }
    int ndim() const { return static_cast<int>(node_->shape.size()); }
    int64_t size() const { return node_->size(); }

    std::vector<double>& values() { return node_->v; }
    const std::vector<double>& values() const { return node_->v; }
    const std::vector<double>& grad() const { return node_->g; }
    bool requires_grad() const { return node_ && node_->requires_grad; }

    double item() const;

    void zero_grad() {
        if (node_) node_->g.assign(node_->v.size(), 0.0);
    }

    // Reverse sweep from a scalar output.
    void backward();

    std::shared_ptr<detail::Node> node() const { return node_; }
    explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  private:
    std::shared_ptr<detail::Node> node_;
};

// Gradient recording is on by default; inference paths suspend it.
bool grad_enabled();
struct NoGradGuard {
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;

  private:
    bool prev_;
};

// Elementwise and reduction ops.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

// Mean absolute difference; the subgradient at zero is taken as 0.
Tensor l1_loss(const Tensor& pred, const Tensor& target);

}  // namespace raman::nn
