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

#include "factcheck/autodiff.h"

#include <functional>

#include "gtest/gtest.h"

namespace factcheck::ad {
namespace {

using Fn = std::function<Var(Tape&, std::vector<Var>&)>;

// Max relative error between analytic and central-difference gradients.
double GradientError(std::vector<Parameter>& params, const Fn& f) {
  auto loss = [&]() {
    Tape tape;
    std::vector<Var> leaves;
    for (auto& p : params) leaves.push_back(tape.Param(static_cast<const Parameter&>(p)));
    return f(tape, leaves).value()(0, 0);
  };
  for (auto& p : params) p.ZeroGrad();
  {
    Tape tape;
    std::vector<Var> leaves;
    for (auto& p : params) leaves.push_back(tape.Param(p));
    tape.Backward(f(tape, leaves));
  }
  double worst = 0.0;
  const double h = 1e-6;
  for (auto& p : params) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      const double saved = p.value.data()[i];
      p.value.data()[i] = saved + h;
      const double up = loss();
      p.value.data()[i] = saved - h;
      const double down = loss();
      p.value.data()[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = p.grad.data()[i];
      const double err = std::abs(numeric - analytic) /
                         std::max(1e-6, std::abs(numeric) + std::abs(analytic));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

Parameter Random(const std::string& name, int r, int c, unsigned seed) {
  std::srand(seed);
  return {name, Matrix::Random(r, c), Matrix()};
}

TEST(AutodiffTest, ForwardValues) {
  Tape tape;
  Matrix a(1, 2);
  a << 1.0, 2.0;
  Var x = tape.Constant(a);
  EXPECT_DOUBLE_EQ(Sum(x).value()(0, 0), 3.0);
  const Matrix s = SoftmaxRows(x).value();
  EXPECT_NEAR(s.sum(), 1.0, 1e-15);
  EXPECT_NEAR(LogSoftmaxRows(x).value()(0, 1), std::log(s(0, 1)), 1e-12);
  EXPECT_DOUBLE_EQ(LeakyRelu(Scale(x, -1.0), 0.2).value()(0, 0), -0.2);
  EXPECT_NEAR(Elu(Scale(x, -1.0)).value()(0, 0), std::exp(-1.0) - 1.0, 1e-15);
}

TEST(AutodiffTest, MatrixOpsGradients) {
  std::vector<Parameter> p = {Random("a", 3, 4, 1), Random("b", 4, 2, 2),
                              Random("r", 1, 2, 3)};
  EXPECT_LT(GradientError(p, [](Tape&, std::vector<Var>& v) {
              Var m = AddRow(MatMul(v[0], v[1]), v[2]);
              return Sum(Mul(Tanh(m), Transpose(Transpose(m))));
            }),
            1e-6);
}

TEST(AutodiffTest, NonlinearityGradients) {
  std::vector<Parameter> p = {Random("a", 3, 3, 4)};
  EXPECT_LT(GradientError(p, [](Tape&, std::vector<Var>& v) {
              Var x = Add(Gelu(v[0]), Elu(v[0]));
              x = Sub(x, LeakyRelu(v[0], 0.2));
              return Sum(Add(SoftmaxRows(x), Exp(Scale(x, 0.1))));
            }),
            1e-6);
}

TEST(AutodiffTest, LayerNormGradients) {
  std::vector<Parameter> p = {Random("x", 3, 5, 5), Random("g", 1, 5, 6),
                              Random("b", 1, 5, 7)};
  EXPECT_LT(GradientError(p, [](Tape& t, std::vector<Var>& v) {
              Var y = LayerNormRows(v[0], v[1], v[2], 1e-12);
              Matrix w = Eigen::VectorXd::LinSpaced(15, -1, 1).reshaped(3, 5);
              return Sum(Mul(y, t.Constant(w)));
            }),
            1e-5);
}

TEST(AutodiffTest, IndexingGradients) {
  std::vector<Parameter> p = {Random("table", 5, 3, 8), Random("o", 2, 3, 9)};
  EXPECT_LT(GradientError(p, [](Tape&, std::vector<Var>& v) {
              Var g = Gather(v[0], {4, 0, 4});
              Var rows = ConcatRows({RowSlice(g, 1, 2), v[1]});
              Var cols = ConcatCols({ColSlice(rows, 0, 1), ColSlice(rows, 2, 1)});
              Var outer = OuterSum(ColSlice(cols, 0, 1),
                                   Transpose(ColSlice(cols, 1, 1)));
              return Add(Sum(Exp(LogSoftmaxRows(outer))),
                         Log(Exp(Pick(outer, 1, 2))));
            }),
            1e-6);
}

TEST(AutodiffTest, SharedLeafAccumulates) {
  Parameter p{"x", Matrix::Constant(1, 1, 3.0), Matrix()};
  p.ZeroGrad();
  Tape tape;
  Var x = tape.Param(p);
  tape.Backward(Mul(x, x));
  EXPECT_DOUBLE_EQ(p.grad(0, 0), 6.0);
}

}  // namespace
}  // namespace factcheck::ad
