// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "graph.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace nbk {

const char* op_name(OpKind kind) {
    switch (kind) {
        case OpKind::Input: return "input";
        case OpKind::Constant: return "constant";
        case OpKind::MatMul: return "matmul";
        case OpKind::Add: return "add";
        case OpKind::Multiply: return "multiply";
        case OpKind::Relu: return "relu";
        case OpKind::Exp: return "exp";
        case OpKind::Log: return "log";
        case OpKind::Cosine: return "cosine";
        case OpKind::Sum: return "sum";
        case OpKind::Mean: return "mean";
        case OpKind::Abs: return "abs";
        case OpKind::Square: return "square";
        case OpKind::Concat: return "concat";
        case OpKind::Slice: return "slice";
    }
    return "?";
}

namespace {

enum class Broadcast { Same, Scalar, Row, Column };

Broadcast classify(const Tensor& a, const Tensor& b, bool& ok) {
    ok = true;
    if (a.shape() == b.shape()) return Broadcast::Same;
    if (b.size() == 1) return Broadcast::Scalar;
    if (b.rows() == 1 && b.cols() == a.cols() && b.size() == a.cols()) return Broadcast::Row;
    if (b.rank() == 2 && b.cols() == 1 && b.rows() == a.rows() && a.rank() <= 2) return Broadcast::Column;
    ok = false;
    return Broadcast::Same;
}

// Index of b's element paired with a's flat index i.
inline std::size_t paired(Broadcast kind, std::size_t i, std::size_t cols) {
    switch (kind) {
        case Broadcast::Same: return i;
        case Broadcast::Scalar: return 0;
        case Broadcast::Row: return i % cols;
        case Broadcast::Column: return i / cols;
    }
    return i;
}

void accumulate(std::vector<Tensor>& grads, std::size_t id, const Tensor& like) {
    if (grads[id].size() == 0) grads[id] = Tensor(like.shape(), 0.0);
}

}  // namespace

Var Graph::push(Node node) {
    nodes_.push_back(std::move(node));
    forwarded_ = false;
    return Var{nodes_.size() - 1};
}

void Graph::check_var(Var v) const {
    if (v.id >= nodes_.size()) fail(ErrorCode::State, "variable does not belong to this graph");
}

std::string Graph::describe(std::size_t id) const {
    const Node& n = nodes_[id];
    std::string s = "node #" + std::to_string(id) + " (" + op_name(n.kind);
    if (!n.label.empty()) s += " '" + n.label + "'";
    return s + ")";
}

Var Graph::input(const std::string& name) {
    for (const auto& n : nodes_) {
        if (n.kind == OpKind::Input && n.label == name) fail(ErrorCode::State, "duplicate graph input '" + name + "'");
    }
    Node n{OpKind::Input, {}, name, {}};
    return push(std::move(n));
}

Var Graph::constant(Tensor value, const std::string& label) {
    Node n{OpKind::Constant, {}, label, std::move(value)};
    return push(std::move(n));
}

#define NBK_UNARY(fn, KIND)                   \
    Var Graph::fn(Var a) {                    \
        check_var(a);                         \
        return push(Node{KIND, {a.id}, {}, {}}); \
    }
NBK_UNARY(relu, OpKind::Relu)
NBK_UNARY(exp, OpKind::Exp)
NBK_UNARY(log, OpKind::Log)
NBK_UNARY(cosine, OpKind::Cosine)
NBK_UNARY(abs, OpKind::Abs)
NBK_UNARY(square, OpKind::Square)
#undef NBK_UNARY

Var Graph::matmul(Var a, Var b) {
    check_var(a);
    check_var(b);
    return push(Node{OpKind::MatMul, {a.id, b.id}, {}, {}});
}

Var Graph::add(Var a, Var b) {
    check_var(a);
    check_var(b);
    return push(Node{OpKind::Add, {a.id, b.id}, {}, {}});
}

Var Graph::multiply(Var a, Var b) {
    check_var(a);
    check_var(b);
    return push(Node{OpKind::Multiply, {a.id, b.id}, {}, {}});
}

Var Graph::sum(Var a, Axis axis) {
    check_var(a);
    Node n{OpKind::Sum, {a.id}, {}, {}};
    n.axis = axis;
    return push(std::move(n));
}

Var Graph::mean(Var a, Axis axis) {
    check_var(a);
    Node n{OpKind::Mean, {a.id}, {}, {}};
    n.axis = axis;
    return push(std::move(n));
}

Var Graph::concat(Var a, Var b, int axis) {
    check_var(a);
    check_var(b);
    if (axis != 0 && axis != 1) fail(ErrorCode::Shape, "concat axis must be 0 or 1");
    Node n{OpKind::Concat, {a.id, b.id}, {}, {}};
    n.cat_axis = axis;
    return push(std::move(n));
}

Var Graph::slice(Var a, std::size_t offset, Shape shape) {
    check_var(a);
    if (shape.empty() || shape_size(shape) == 0) fail(ErrorCode::Shape, "slice shape must be non-empty");
    Node n{OpKind::Slice, {a.id}, {}, {}};
    n.offset = offset;
    n.shape = std::move(shape);
    return push(std::move(n));
}

Var Graph::scale(Var a, double factor) {
    return multiply(a, constant(Tensor::scalar(factor)));
}

Var Graph::add_scalar(Var a, double value) {
    return add(a, constant(Tensor::scalar(value)));
}

Var Graph::sub(Var a, Var b) {
    return add(a, scale(b, -1.0));
}

Var Graph::label(Var v, const std::string& name) {
    check_var(v);
    if (nodes_[v.id].kind != OpKind::Input) nodes_[v.id].label = name;
    return v;
}

void Graph::set_root(Var v) {
    check_var(v);
    root_ = v.id;
    forwarded_ = false;
}

Var Graph::root() const {
    if (nodes_.empty()) fail(ErrorCode::State, "graph is empty");
    return Var{root_.value_or(nodes_.size() - 1)};
}

std::vector<std::string> Graph::input_names() const {
    std::vector<std::string> names;
    for (const auto& n : nodes_) {
        if (n.kind == OpKind::Input) names.push_back(n.label);
    }
    return names;
}

const Tensor& Graph::value(Var v) const {
    check_var(v);
    if (!forwarded_) fail(ErrorCode::State, "graph values requested before forward");
    return nodes_[v.id].value;
}

void Graph::eval_node(std::size_t id) {
    Node& n = nodes_[id];
    auto arg = [&](std::size_t k) -> const Tensor& { return nodes_[n.args[k]].value; };
    auto shape_error = [&](const std::string& what) {
        std::string msg = describe(id) + ": " + what + "; operand shapes";
        for (auto a : n.args) msg += " " + shape_to_string(nodes_[a].value.shape());
        fail(ErrorCode::Shape, msg);
    };

    switch (n.kind) {
        case OpKind::Input:
        case OpKind::Constant:
            break;
        case OpKind::MatMul: {
            const Tensor& a = arg(0);
            const Tensor& b = arg(1);
            if (b.rank() > 2 || a.rank() > 2 || a.cols() != b.rows()) shape_error("inner dimensions differ");
            const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
            Tensor out({m, p}, 0.0);
            const double* A = a.data().data();
            const double* B = b.data().data();
            double* C = out.data().data();
            for (std::size_t i = 0; i < m; ++i) {
                double* crow = C + i * p;
                for (std::size_t t = 0; t < k; ++t) {
                    const double av = A[i * k + t];
                    if (av == 0.0) continue;
                    const double* brow = B + t * p;
                    for (std::size_t j = 0; j < p; ++j) crow[j] += av * brow[j];
                }
            }
            n.value = std::move(out);
            break;
        }
        case OpKind::Add:
        case OpKind::Multiply: {
            const Tensor& a = arg(0);
            const Tensor& b = arg(1);
            bool ok = false;
            const Broadcast kind = classify(a, b, ok);
            if (!ok) shape_error("operands are not broadcast-compatible");
            Tensor out = a;
            const std::size_t cols = a.cols();
            const std::size_t size = a.size();
            double* o = out.data().data();
            const double* bv = b.data().data();
            if (n.kind == OpKind::Add) {
                for (std::size_t i = 0; i < size; ++i) o[i] += bv[paired(kind, i, cols)];
            } else {
                for (std::size_t i = 0; i < size; ++i) o[i] *= bv[paired(kind, i, cols)];
            }
            n.value = std::move(out);
            break;
        }
        case OpKind::Relu:
        case OpKind::Exp:
        case OpKind::Log:
        case OpKind::Cosine:
        case OpKind::Abs:
        case OpKind::Square: {
            Tensor out = arg(0);
            for (auto& v : out.storage()) {
                switch (n.kind) {
                    case OpKind::Relu: v = v > 0.0 ? v : 0.0; break;
                    case OpKind::Exp: v = std::exp(v); break;
                    case OpKind::Log: v = std::log(v); break;
                    case OpKind::Cosine: v = std::cos(v); break;
                    case OpKind::Abs: v = std::fabs(v); break;
                    case OpKind::Square: v = v * v; break;
                    default: break;
                }
            }
            n.value = std::move(out);
            break;
        }
        case OpKind::Sum:
        case OpKind::Mean: {
            const Tensor& a = arg(0);
            if (n.axis == Axis::All) {
                double s = 0.0;
                for (double v : a.data()) s += v;
                if (n.kind == OpKind::Mean) s /= static_cast<double>(a.size());
                n.value = Tensor::scalar(s);
            } else {
                if (a.rank() > 2) shape_error("row reduction needs rank <= 2");
                const std::size_t r = a.rows(), c = a.cols();
                Tensor out({1, c}, 0.0);
                for (std::size_t i = 0; i < r; ++i) {
                    for (std::size_t j = 0; j < c; ++j) out[j] += a[i * c + j];
                }
                if (n.kind == OpKind::Mean) {
                    for (auto& v : out.storage()) v /= static_cast<double>(r);
                }
                n.value = std::move(out);
            }
            break;
        }
        case OpKind::Concat: {
            const Tensor& a = arg(0);
            const Tensor& b = arg(1);
            if (a.rank() > 2 || b.rank() > 2) shape_error("concat needs rank <= 2");
            if (n.cat_axis == 0) {
                if (a.cols() != b.cols()) shape_error("column counts differ");
                std::vector<double> d(a.data().begin(), a.data().end());
                d.insert(d.end(), b.data().begin(), b.data().end());
                n.value = Tensor({a.rows() + b.rows(), a.cols()}, std::move(d));
            } else {
                if (a.rows() != b.rows()) shape_error("row counts differ");
                const std::size_t r = a.rows(), ca = a.cols(), cb = b.cols();
                Tensor out({r, ca + cb}, 0.0);
                for (std::size_t i = 0; i < r; ++i) {
                    std::copy_n(a.data().begin() + i * ca, ca, out.data().begin() + i * (ca + cb));
                    std::copy_n(b.data().begin() + i * cb, cb, out.data().begin() + i * (ca + cb) + ca);
                }
                n.value = std::move(out);
            }
            break;
        }
        case OpKind::Slice: {
            const Tensor& a = arg(0);
            const std::size_t count = shape_size(n.shape);
            if (n.offset + count > a.size()) {
                shape_error("window [" + std::to_string(n.offset) + ", " + std::to_string(n.offset + count) +
                            ") exceeds input");
            }
            std::vector<double> d(a.data().begin() + n.offset, a.data().begin() + n.offset + count);
            n.value = Tensor(n.shape, std::move(d));
            break;
        }
    }
    if (!n.value.all_finite()) fail(ErrorCode::Numeric, describe(id) + " produced a non-finite value");
}

const Tensor& Graph::forward(const TensorMap& inputs) {
    if (nodes_.empty()) fail(ErrorCode::State, "forward on an empty graph");
    forwarded_ = false;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        Node& n = nodes_[id];
        if (n.kind == OpKind::Input) {
            auto it = inputs.find(n.label);
            if (it == inputs.end()) fail(ErrorCode::State, "graph input '" + n.label + "' is not bound");
            n.value = it->second;
            if (!n.value.all_finite()) fail(ErrorCode::Numeric, "graph input '" + n.label + "' has a non-finite entry");
        } else {
            eval_node(id);
        }
    }
    forwarded_ = true;
    return nodes_[root().id].value;
}

void Graph::backprop_node(std::size_t id, std::vector<Tensor>& grads) const {
    const Node& n = nodes_[id];
    const Tensor& g = grads[id];
    auto val = [&](std::size_t k) -> const Tensor& { return nodes_[n.args[k]].value; };

    switch (n.kind) {
        case OpKind::Input:
        case OpKind::Constant:
            break;
        case OpKind::MatMul: {
            const Tensor& a = val(0);
            const Tensor& b = val(1);
            const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
            const std::size_t ia = n.args[0], ib = n.args[1];
            const double* G = g.data().data();
            if (nodes_[ia].kind != OpKind::Constant) {
                accumulate(grads, ia, a);
                double* GA = grads[ia].data().data();
                const double* B = b.data().data();
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t t = 0; t < k; ++t) {
                        double s = 0.0;
                        const double* brow = B + t * p;
                        const double* grow = G + i * p;
                        for (std::size_t j = 0; j < p; ++j) s += grow[j] * brow[j];
                        GA[i * k + t] += s;
                    }
                }
            }
            if (nodes_[ib].kind != OpKind::Constant) {
                accumulate(grads, ib, b);
                double* GB = grads[ib].data().data();
                const double* A = a.data().data();
                for (std::size_t i = 0; i < m; ++i) {
                    const double* grow = G + i * p;
                    for (std::size_t t = 0; t < k; ++t) {
                        const double av = A[i * k + t];
                        if (av == 0.0) continue;
                        double* gbrow = GB + t * p;
                        for (std::size_t j = 0; j < p; ++j) gbrow[j] += av * grow[j];
                    }
                }
            }
            break;
        }
        case OpKind::Add:
        case OpKind::Multiply: {
            const Tensor& a = val(0);
            const Tensor& b = val(1);
            bool ok = false;
            const Broadcast kind = classify(a, b, ok);
            const std::size_t cols = a.cols();
            const std::size_t ia = n.args[0], ib = n.args[1];
            const bool mul = n.kind == OpKind::Multiply;
            if (nodes_[ia].kind != OpKind::Constant) {
                accumulate(grads, ia, a);
                auto& ga = grads[ia].storage();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    ga[i] += mul ? g[i] * b[paired(kind, i, cols)] : g[i];
                }
            }
            if (nodes_[ib].kind != OpKind::Constant) {
                accumulate(grads, ib, b);
                auto& gb = grads[ib].storage();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    gb[paired(kind, i, cols)] += mul ? g[i] * a[i] : g[i];
                }
            }
            break;
        }
        case OpKind::Relu:
        case OpKind::Exp:
        case OpKind::Log:
        case OpKind::Cosine:
        case OpKind::Abs:
        case OpKind::Square: {
            const std::size_t ia = n.args[0];
            if (nodes_[ia].kind == OpKind::Constant) break;
            const Tensor& a = val(0);
            accumulate(grads, ia, a);
            auto& ga = grads[ia].storage();
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = a[i];
                double d = 0.0;
                switch (n.kind) {
                    case OpKind::Relu: d = x > 0.0 ? 1.0 : 0.0; break;
                    case OpKind::Exp: d = n.value[i]; break;
                    case OpKind::Log: d = 1.0 / x; break;
                    case OpKind::Cosine: d = -std::sin(x); break;
                    case OpKind::Abs: d = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); break;
                    case OpKind::Square: d = 2.0 * x; break;
                    default: break;
                }
                ga[i] += g[i] * d;
            }
            break;
        }
        case OpKind::Sum:
        case OpKind::Mean: {
            const std::size_t ia = n.args[0];
            if (nodes_[ia].kind == OpKind::Constant) break;
            const Tensor& a = val(0);
            accumulate(grads, ia, a);
            auto& ga = grads[ia].storage();
            if (n.axis == Axis::All) {
                const double d = n.kind == OpKind::Mean ? g[0] / static_cast<double>(a.size()) : g[0];
                for (auto& v : ga) v += d;
            } else {
                const std::size_t r = a.rows(), c = a.cols();
                const double scale = n.kind == OpKind::Mean ? 1.0 / static_cast<double>(r) : 1.0;
                for (std::size_t i = 0; i < r; ++i) {
                    for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j] * scale;
                }
            }
            break;
        }
        case OpKind::Concat: {
            const Tensor& a = val(0);
            const Tensor& b = val(1);
            const std::size_t ia = n.args[0], ib = n.args[1];
            const bool ta = nodes_[ia].kind != OpKind::Constant;
            const bool tb = nodes_[ib].kind != OpKind::Constant;
            if (ta) accumulate(grads, ia, a);
            if (tb) accumulate(grads, ib, b);
            if (n.cat_axis == 0) {
                for (std::size_t i = 0; i < a.size() && ta; ++i) grads[ia][i] += g[i];
                for (std::size_t i = 0; i < b.size() && tb; ++i) grads[ib][i] += g[a.size() + i];
            } else {
                const std::size_t r = a.rows(), ca = a.cols(), cb = b.cols();
                for (std::size_t i = 0; i < r; ++i) {
                    for (std::size_t j = 0; j < ca && ta; ++j) grads[ia][i * ca + j] += g[i * (ca + cb) + j];
                    for (std::size_t j = 0; j < cb && tb; ++j) grads[ib][i * cb + j] += g[i * (ca + cb) + ca + j];
                }
            }
            break;
        }
        case OpKind::Slice: {
            const std::size_t ia = n.args[0];
            if (nodes_[ia].kind == OpKind::Constant) break;
            accumulate(grads, ia, val(0));
            auto& ga = grads[ia].storage();
            for (std::size_t i = 0; i < g.size(); ++i) ga[n.offset + i] += g[i];
            break;
        }
    }
}

TensorMap Graph::backward() {
    if (!forwarded_) fail(ErrorCode::State, "backward called before forward");
    const std::size_t r = root().id;
    if (nodes_[r].value.size() != 1) {
        fail(ErrorCode::Shape, "backward needs a scalar root, " + describe(r) + " has shape " +
                                   shape_to_string(nodes_[r].value.shape()));
    }
    std::vector<Tensor> grads(nodes_.size());
    grads[r] = Tensor(nodes_[r].value.shape(), 1.0);
    for (std::size_t id = r + 1; id-- > 0;) {
        if (grads[id].size() == 0) continue;
        backprop_node(id, grads);
    }
    TensorMap out;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        if (n.kind != OpKind::Input) continue;
        out[n.label] = grads[id].size() ? std::move(grads[id]) : Tensor(n.value.shape(), 0.0);
    }
    return out;
}

double finite_diff_check(Graph& graph, const TensorMap& inputs, double h, const std::vector<std::string>& names) {
    if (!(h > 0.0)) fail(ErrorCode::Domain, "finite-difference step must be positive");
    graph.forward(inputs);
    const TensorMap analytic = graph.backward();
    std::vector<std::string> targets = names.empty() ? graph.input_names() : names;

    TensorMap probe = inputs;
    double worst = 0.0;
    for (const auto& name : targets) {
        auto it = probe.find(name);
        if (it == probe.end()) fail(ErrorCode::State, "finite_diff_check: unknown input '" + name + "'");
        Tensor& t = it->second;
        const Tensor& ga = analytic.at(name);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double orig = t[i];
            t[i] = orig + h;
            const double up = graph.forward(probe)[0];
            t[i] = orig - h;
            const double down = graph.forward(probe)[0];
            t[i] = orig;
            const double numeric = (up - down) / (2.0 * h);
            const double err = std::fabs(ga[i] - numeric) / (std::fabs(ga[i]) + 1e-8);
            worst = std::max(worst, err);
        }
    }
    graph.forward(inputs);
    return worst;
}

}  // namespace nbk
