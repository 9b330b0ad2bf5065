// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace nbk {

enum class OpKind {
    Input,
    Constant,
    MatMul,
    Add,
    Multiply,
    Relu,
    Exp,
    Log,
    Cosine,
    Sum,
    Mean,
    Abs,
    Square,
    Concat,
    Slice,
};

const char* op_name(OpKind kind);

/// Reduction extent for sum/mean. Rows collapses the row axis, producing a
/// 1 x cols result (used for set pooling).
enum class Axis { All, Rows };

/// Handle to a node of a Graph. Only meaningful for the graph that issued it.
struct Var {
    std::size_t id = 0;
};

using TensorMap = std::map<std::string, Tensor>;

/// Tape of operation records built once and evaluated many times.
///
/// Nodes are appended in construction order, which is also the evaluation
/// order, so the tape is acyclic by construction. Inputs are named and bound
/// per call to forward(); constants are baked in. Element-wise binary ops
/// accept a right operand that matches the left exactly, is a single element,
/// is a 1 x cols row, or is a rows x 1 column; nothing else broadcasts.
class Graph {
public:
    Var input(const std::string& name);
    Var constant(Tensor value, const std::string& label = {});

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var multiply(Var a, Var b);
    Var relu(Var a);
    Var exp(Var a);
    Var log(Var a);
    Var cosine(Var a);
    Var abs(Var a);
    Var square(Var a);
    Var sum(Var a, Axis axis = Axis::All);
    Var mean(Var a, Axis axis = Axis::All);
    /// axis 0 stacks rows, axis 1 appends columns.
    Var concat(Var a, Var b, int axis);
    /// Contiguous window of the flattened input, reshaped to `shape`.
    Var slice(Var a, std::size_t offset, Shape shape);

    // Conveniences composed from the primitives above.
    Var scale(Var a, double factor);
    Var add_scalar(Var a, double value);
    Var sub(Var a, Var b);

    Var label(Var v, const std::string& name);

    /// Root defaults to the most recently created node.
    void set_root(Var v);
    Var root() const;

    const Tensor& forward(const TensorMap& inputs);
    TensorMap backward();

    const Tensor& value(Var v) const;
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::vector<std::string> input_names() const;
    bool has_forward() const noexcept { return forwarded_; }

private:
    struct Node {
        OpKind kind;
        std::vector<std::size_t> args;
        std::string label;
        Tensor value;
        // Slice offset/shape, reduction axis, or concat axis.
        std::size_t offset = 0;
        Shape shape;
        Axis axis = Axis::All;
        int cat_axis = 0;
    };

    Var push(Node node);
    void check_var(Var v) const;
    std::string describe(std::size_t id) const;
    void eval_node(std::size_t id);
    void backprop_node(std::size_t id, std::vector<Tensor>& grads) const;

    std::vector<Node> nodes_;
    std::optional<std::size_t> root_;
    bool forwarded_ = false;
};

/// Largest |analytic - central difference| / (|analytic| + 1e-8) over every
/// entry of the named inputs (all inputs when `names` is empty). Leaves the
/// graph forwarded at the unperturbed inputs.
double finite_diff_check(Graph& graph, const TensorMap& inputs, double h,
                         const std::vector<std::string>& names = {});

}  // namespace nbk
