// Copyright 2026 The Factcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTCHECK_AUTODIFF_H_
#define FACTCHECK_AUTODIFF_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/params.h"

// Reverse-mode differentiation over dense double matrices. A Tape records
// every operation of one forward pass; Backward() then accumulates
// gradients into the Parameters that were bound as leaves.
namespace factcheck::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

// Handle to a node on a tape. Cheap to copy.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Matrix value);
  // Leaf bound to a parameter; Backward adds into param.grad.
  Var Param(Parameter& param);
  // Leaf for a read-only parameter; no gradient flows.
  Var Param(const Parameter& param) { return Constant(param.value); }

  // Seeds d(loss)/d(loss) = 1 for a 1x1 loss and runs the reverse sweep.
  void Backward(Var loss);

  const Matrix& value(int id) const { return nodes_[id].value; }
  size_t size() const { return nodes_.size(); }

  // Used by the operation implementations.
  using BackwardFn = std::function<void(Tape&, const Matrix& grad)>;
  Var Push(Matrix value, std::vector<int> inputs, BackwardFn backward);
  bool RequiresGrad(int id) const { return nodes_[id].requires_grad; }
  void Accumulate(int id, const Matrix& grad);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool has_grad = false;
    bool requires_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// a (n x d) plus a 1 x d row broadcast over rows.
Var AddRow(Var a, Var row);
// col (n x 1) + row (1 x m) -> n x m.
Var OuterSum(Var col, Var row);
Var Scale(Var a, double s);
Var Mul(Var a, Var b);  // elementwise
Var Transpose(Var a);
Var Tanh(Var a);
Var Gelu(Var a);  // erf form
Var Elu(Var a);   // alpha = 1
Var LeakyRelu(Var a, double slope);
Var Exp(Var a);
Var Log(Var a);
Var SoftmaxRows(Var a);
Var LogSoftmaxRows(Var a);
Var LayerNormRows(Var x, Var gamma, Var beta, double eps);
// Rows of table selected by ids.
Var Gather(Var table, const std::vector<int>& ids);
Var RowSlice(Var a, int start, int count);
Var ColSlice(Var a, int start, int count);
Var ConcatRows(const std::vector<Var>& parts);
Var ConcatCols(const std::vector<Var>& parts);
Var Pick(Var a, int row, int col);  // 1 x 1
Var Sum(Var a);                     // 1 x 1

}  // namespace factcheck::ad

#endif  // FACTCHECK_AUTODIFF_H_
