#include "raman/nn/tensor.hpp"

#include <cmath>
#include <unordered_set>

#include "raman/errors.hpp"

namespace raman::nn {

namespace {

thread_local bool g_grad_enabled = true;

int64_t shape_size(const std::vector<int>& shape) {
    int64_t n = 1;
    for (int d : shape) {
        if (d < 1) throw ShapeError("tensor: dimensions must be >= 1");
        n *= d;
    }
    return n;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(op) + ": shape mismatch");
    }
}

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : prev_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = prev_; }

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
    auto node = std::make_shared<detail::Node>();
    node->v.assign(shape_size(shape), 0.0);
    node->shape = std::move(shape);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
}

Tensor Tensor::full(std::vector<int> shape, double value, bool requires_grad) {
    Tensor t = zeros(std::move(shape), requires_grad);
    for (double& v : t.values()) v = value;
    return t;
}

Tensor Tensor::from_values(std::vector<int> shape, std::vector<double> values,
                           bool requires_grad) {
    if (static_cast<int64_t>(values.size()) != shape_size(shape)) {
        throw ShapeError("tensor: value count != product(shape)");
    }
    auto node = std::make_shared<detail::Node>();
    node->shape = std::move(shape);
    node->v = std::move(values);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
}

double Tensor::item() const {
    if (!node_ || node_->size() != 1) throw ShapeError("tensor: item() needs a scalar");
    return node_->v[0];
}

void Tensor::backward() {
    if (!node_ || node_->size() != 1) {
        throw ShapeError("tensor: backward() starts from a scalar");
    }
    // Iterative post-order DFS to topologically sort the tape.
    std::vector<detail::Node*> order;
    std::unordered_set<detail::Node*> visited;
    std::vector<std::pair<detail::Node*, size_t>> stack;
    stack.emplace_back(node_.get(), 0);
    visited.insert(node_.get());
    while (!stack.empty()) {
        auto& [node, child] = stack.back();
        if (child < node->parents.size()) {
            detail::Node* next = node->parents[child++].get();
            if (next->requires_grad && visited.insert(next).second) {
                stack.emplace_back(next, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    node_->ensure_grad();
    node_->g[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backward_fn) (*it)->backward_fn(**it);
    }
}

namespace detail {

// Builds the output node for an op, wiring the tape only when recording.
Tensor make_op(std::vector<int> shape, std::vector<double> values,
               std::vector<Tensor> inputs, std::function<void(Node&)> backward_fn) {
    auto node = std::make_shared<Node>();
    node->shape = std::move(shape);
    node->v = std::move(values);
    bool needs = false;
    if (g_grad_enabled) {
        for (const auto& t : inputs) {
            if (t.requires_grad()) needs = true;
        }
    }
    if (needs) {
        node->requires_grad = true;
        node->backward_fn = std::move(backward_fn);
        for (const auto& t : inputs) node->parents.push_back(t.node());
    }
    return Tensor(std::move(node));
}

}  // namespace detail

Tensor add(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "add");
    std::vector<double> out(a.size());
    const auto& av = a.values();
    const auto& bv = b.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_op(a.shape(), std::move(out), {a, b}, [an, bn](detail::Node& n) {
        if (an->requires_grad) {
            an->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) an->g[i] += n.g[i];
        }
        if (bn->requires_grad) {
            bn->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) bn->g[i] += n.g[i];
        }
    });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "sub");
    std::vector<double> out(a.size());
    const auto& av = a.values();
    const auto& bv = b.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_op(a.shape(), std::move(out), {a, b}, [an, bn](detail::Node& n) {
        if (an->requires_grad) {
            an->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) an->g[i] += n.g[i];
        }
        if (bn->requires_grad) {
            bn->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) bn->g[i] -= n.g[i];
        }
    });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "mul");
    std::vector<double> out(a.size());
    const auto& av = a.values();
    const auto& bv = b.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_op(a.shape(), std::move(out), {a, b}, [an, bn](detail::Node& n) {
        if (an->requires_grad) {
            an->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) an->g[i] += n.g[i] * bn->v[i];
        }
        if (bn->requires_grad) {
            bn->ensure_grad();
            for (size_t i = 0; i < n.g.size(); ++i) bn->g[i] += n.g[i] * an->v[i];
        }
    });
}

Tensor scale(const Tensor& a, double s) {
    std::vector<double> out(a.size());
    const auto& av = a.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * s;
    auto an = a.node();
    return detail::make_op(a.shape(), std::move(out), {a}, [an, s](detail::Node& n) {
        an->ensure_grad();
        for (size_t i = 0; i < n.g.size(); ++i) an->g[i] += n.g[i] * s;
    });
}

Tensor relu(const Tensor& a) {
    std::vector<double> out(a.size());
    const auto& av = a.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] > 0.0 ? av[i] : 0.0;
    auto an = a.node();
    return detail::make_op(a.shape(), std::move(out), {a}, [an](detail::Node& n) {
        an->ensure_grad();
        for (size_t i = 0; i < n.g.size(); ++i) {
            if (an->v[i] > 0.0) an->g[i] += n.g[i];
        }
    });
}

Tensor sigmoid(const Tensor& a) {
    std::vector<double> out(a.size());
    const auto& av = a.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-av[i]));
    auto an = a.node();
    return detail::make_op(a.shape(), std::move(out), {a}, [an](detail::Node& n) {
        an->ensure_grad();
        for (size_t i = 0; i < n.g.size(); ++i) {
            an->g[i] += n.g[i] * n.v[i] * (1.0 - n.v[i]);
        }
    });
}

Tensor l1_loss(const Tensor& pred, const Tensor& target) {
    check_same_shape(pred, target, "l1_loss");
    const auto& pv = pred.values();
    const auto& tv = target.values();
    double acc = 0.0;
    for (size_t i = 0; i < pv.size(); ++i) acc += std::abs(pv[i] - tv[i]);
    acc /= static_cast<double>(pv.size());
    auto pn = pred.node();
    auto tn = target.node();
    return detail::make_op({1}, {acc}, {pred, target}, [pn, tn](detail::Node& n) {
        const double go = n.g[0] / static_cast<double>(pn->v.size());
        if (pn->requires_grad) pn->ensure_grad();
        if (tn->requires_grad) tn->ensure_grad();
        for (size_t i = 0; i < pn->v.size(); ++i) {
            const double d = pn->v[i] - tn->v[i];
            const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            if (pn->requires_grad) pn->g[i] += go * s;
            if (tn->requires_grad) tn->g[i] -= go * s;
        }
    });
}

}  // namespace raman::nn
