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

#include <cmath>

#include "factcheck/error.h"

namespace factcheck::ad {

namespace {

void CheckSameTape(Var a, Var b) {
  if (a.tape != b.tape || a.tape == nullptr) {
    throw Error("autodiff: operands live on different tapes");
  }
}

void CheckShape(bool ok, const char* op) {
  if (!ok) throw Error(std::string("autodiff: shape mismatch in ") + op);
}

}  // namespace

const Matrix& Var::value() const { return tape->value(id); }

Var Tape::Constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Param(Parameter& param) {
  Node node;
  node.value = param.value;
  node.param = &param;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Push(Matrix value, std::vector<int> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (int in : inputs) node.requires_grad |= nodes_[in].requires_grad;
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::Accumulate(int id, const Matrix& grad) {
  Node& node = nodes_[id];
  if (!node.requires_grad) return;
  if (!node.has_grad) {
    node.grad = grad;
    node.has_grad = true;
  } else {
    node.grad += grad;
  }
}

void Tape::Backward(Var loss) {
  if (loss.tape != this) throw Error("autodiff: loss is on another tape");
  if (value(loss.id).size() != 1) throw Error("autodiff: loss must be 1x1");
  Accumulate(loss.id, Matrix::Ones(1, 1));
  for (int id = loss.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.has_grad) continue;
    if (node.param != nullptr) {
      if (node.param->grad.rows() != node.grad.rows() ||
          node.param->grad.cols() != node.grad.cols()) {
        node.param->grad = node.grad;
      } else {
        node.param->grad += node.grad;
      }
    }
    // Inputs always precede their consumer, so node.grad is not touched
    // while its own backward runs.
    if (node.backward) node.backward(*this, node.grad);
  }
}

Var MatMul(Var a, Var b) {
  CheckSameTape(a, b);
  CheckShape(a.cols() == b.rows(), "MatMul");
  const int ia = a.id, ib = b.id;
  return a.tape->Push(a.value() * b.value(), {ia, ib},
                      [ia, ib](Tape& t, const Matrix& g) {
                        if (t.RequiresGrad(ia)) {
                          t.Accumulate(ia, g * t.value(ib).transpose());
                        }
                        if (t.RequiresGrad(ib)) {
                          t.Accumulate(ib, t.value(ia).transpose() * g);
                        }
                      });
}

Var Add(Var a, Var b) {
  CheckSameTape(a, b);
  CheckShape(a.rows() == b.rows() && a.cols() == b.cols(), "Add");
  const int ia = a.id, ib = b.id;
  return a.tape->Push(a.value() + b.value(), {ia, ib},
                      [ia, ib](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g);
                        t.Accumulate(ib, g);
                      });
}

Var Sub(Var a, Var b) {
  CheckSameTape(a, b);
  CheckShape(a.rows() == b.rows() && a.cols() == b.cols(), "Sub");
  const int ia = a.id, ib = b.id;
  return a.tape->Push(a.value() - b.value(), {ia, ib},
                      [ia, ib](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g);
                        t.Accumulate(ib, -g);
                      });
}

Var AddRow(Var a, Var row) {
  CheckSameTape(a, row);
  CheckShape(row.rows() == 1 && row.cols() == a.cols(), "AddRow");
  const int ia = a.id, ir = row.id;
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return a.tape->Push(std::move(out), {ia, ir},
                      [ia, ir](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g);
                        if (t.RequiresGrad(ir)) {
                          t.Accumulate(ir, g.colwise().sum());
                        }
                      });
}

Var OuterSum(Var col, Var row) {
  CheckSameTape(col, row);
  CheckShape(col.cols() == 1 && row.rows() == 1, "OuterSum");
  const int ic = col.id, ir = row.id;
  const Eigen::Index n = col.rows(), m = row.cols();
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = col.value()(i, 0) + row.value()(0, j);
    }
  }
  return col.tape->Push(std::move(out), {ic, ir},
                        [ic, ir](Tape& t, const Matrix& g) {
                          if (t.RequiresGrad(ic)) {
                            t.Accumulate(ic, g.rowwise().sum());
                          }
                          if (t.RequiresGrad(ir)) {
                            t.Accumulate(ir, g.colwise().sum());
                          }
                        });
}

Var Scale(Var a, double s) {
  const int ia = a.id;
  return a.tape->Push(a.value() * s, {ia},
                      [ia, s](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g * s);
                      });
}

Var Mul(Var a, Var b) {
  CheckSameTape(a, b);
  CheckShape(a.rows() == b.rows() && a.cols() == b.cols(), "Mul");
  const int ia = a.id, ib = b.id;
  return a.tape->Push(a.value().cwiseProduct(b.value()), {ia, ib},
                      [ia, ib](Tape& t, const Matrix& g) {
                        if (t.RequiresGrad(ia)) {
                          t.Accumulate(ia, g.cwiseProduct(t.value(ib)));
                        }
                        if (t.RequiresGrad(ib)) {
                          t.Accumulate(ib, g.cwiseProduct(t.value(ia)));
                        }
                      });
}

Var Transpose(Var a) {
  const int ia = a.id;
  return a.tape->Push(a.value().transpose(), {ia},
                      [ia](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g.transpose());
                      });
}

Var Tanh(Var a) {
  const int ia = a.id;
  Matrix y = a.value().array().tanh().matrix();
  const int iy = static_cast<int>(a.tape->size());
  return a.tape->Push(std::move(y), {ia},
                      [ia, iy](Tape& t, const Matrix& g) {
                        const Matrix& y = t.value(iy);
                        t.Accumulate(
                            ia, (g.array() * (1.0 - y.array().square())).matrix());
                      });
}

Var Gelu(Var a) {
  const int ia = a.id;
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    y.data()[i] = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
  }
  return a.tape->Push(std::move(y), {ia}, [ia](Tape& t, const Matrix& g) {
    const Matrix& x = t.value(ia);
    Matrix d(x.rows(), x.cols());
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x.data()[i];
      const double cdf = 0.5 * (1.0 + std::erf(v / std::sqrt(2.0)));
      const double pdf = inv_sqrt_2pi * std::exp(-0.5 * v * v);
      d.data()[i] = g.data()[i] * (cdf + v * pdf);
    }
    t.Accumulate(ia, d);
  });
}

Var Elu(Var a) {
  const int ia = a.id;
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    y.data()[i] = v > 0.0 ? v : std::expm1(v);
  }
  return a.tape->Push(std::move(y), {ia}, [ia](Tape& t, const Matrix& g) {
    const Matrix& x = t.value(ia);
    Matrix d(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x.data()[i];
      d.data()[i] = g.data()[i] * (v > 0.0 ? 1.0 : std::exp(v));
    }
    t.Accumulate(ia, d);
  });
}

Var LeakyRelu(Var a, double slope) {
  const int ia = a.id;
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    y.data()[i] = v > 0.0 ? v : slope * v;
  }
  return a.tape->Push(std::move(y), {ia},
                      [ia, slope](Tape& t, const Matrix& g) {
                        const Matrix& x = t.value(ia);
                        Matrix d(x.rows(), x.cols());
                        for (Eigen::Index i = 0; i < x.size(); ++i) {
                          d.data()[i] = g.data()[i] *
                                        (x.data()[i] > 0.0 ? 1.0 : slope);
                        }
                        t.Accumulate(ia, d);
                      });
}

Var Exp(Var a) {
  const int ia = a.id;
  const int iy = static_cast<int>(a.tape->size());
  return a.tape->Push(a.value().array().exp().matrix(), {ia},
                      [ia, iy](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g.cwiseProduct(t.value(iy)));
                      });
}

Var Log(Var a) {
  const int ia = a.id;
  return a.tape->Push(a.value().array().log().matrix(), {ia},
                      [ia](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, g.cwiseQuotient(t.value(ia)));
                      });
}

namespace {

Matrix SoftmaxRowsValue(const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double m = x.row(r).maxCoeff();
    double z = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      y(r, c) = std::exp(x(r, c) - m);
      z += y(r, c);
    }
    y.row(r) /= z;
  }
  return y;
}

}  // namespace

Var SoftmaxRows(Var a) {
  const int ia = a.id;
  const int iy = static_cast<int>(a.tape->size());
  return a.tape->Push(SoftmaxRowsValue(a.value()), {ia},
                      [ia, iy](Tape& t, const Matrix& g) {
                        const Matrix& y = t.value(iy);
                        Matrix d(y.rows(), y.cols());
                        for (Eigen::Index r = 0; r < y.rows(); ++r) {
                          const double dot = g.row(r).dot(y.row(r));
                          for (Eigen::Index c = 0; c < y.cols(); ++c) {
                            d(r, c) = y(r, c) * (g(r, c) - dot);
                          }
                        }
                        t.Accumulate(ia, d);
                      });
}

Var LogSoftmaxRows(Var a) {
  const int ia = a.id;
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double m = x.row(r).maxCoeff();
    double z = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) z += std::exp(x(r, c) - m);
    const double lse = m + std::log(z);
    for (Eigen::Index c = 0; c < x.cols(); ++c) y(r, c) = x(r, c) - lse;
  }
  const int iy = static_cast<int>(a.tape->size());
  return a.tape->Push(std::move(y), {ia}, [ia, iy](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(iy);
    Matrix d(y.rows(), y.cols());
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const double total = g.row(r).sum();
      for (Eigen::Index c = 0; c < y.cols(); ++c) {
        d(r, c) = g(r, c) - std::exp(y(r, c)) * total;
      }
    }
    t.Accumulate(ia, d);
  });
}

Var LayerNormRows(Var x, Var gamma, Var beta, double eps) {
  CheckSameTape(x, gamma);
  CheckSameTape(x, beta);
  CheckShape(gamma.rows() == 1 && gamma.cols() == x.cols() &&
                 beta.rows() == 1 && beta.cols() == x.cols(),
             "LayerNormRows");
  const Matrix& xv = x.value();
  const Eigen::Index n = xv.rows(), d = xv.cols();
  Matrix xhat(n, d);
  Eigen::VectorXd inv_std(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mu = xv.row(r).mean();
    const double var = (xv.row(r).array() - mu).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (xv.row(r).array() - mu) * inv_std(r);
  }
  Matrix y = xhat;
  for (Eigen::Index r = 0; r < n; ++r) {
    y.row(r) = xhat.row(r).cwiseProduct(gamma.value().row(0)) +
               beta.value().row(0);
  }
  const int ix = x.id, ig = gamma.id, ib = beta.id;
  return x.tape->Push(
      std::move(y), {ix, ig, ib},
      [ix, ig, ib, xhat, inv_std](Tape& t, const Matrix& g) {
        const Eigen::Index n = g.rows(), d = g.cols();
        if (t.RequiresGrad(ig)) {
          t.Accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
        }
        if (t.RequiresGrad(ib)) t.Accumulate(ib, g.colwise().sum());
        if (t.RequiresGrad(ix)) {
          const Matrix& gamma = t.value(ig);
          Matrix dx(n, d);
          for (Eigen::Index r = 0; r < n; ++r) {
            Eigen::RowVectorXd dxhat = g.row(r).cwiseProduct(gamma.row(0));
            const double sum_dxhat = dxhat.sum();
            const double sum_dxhat_xhat = dxhat.dot(xhat.row(r));
            dx.row(r) = (inv_std(r) / static_cast<double>(d)) *
                        (static_cast<double>(d) * dxhat.array() - sum_dxhat -
                         xhat.row(r).array() * sum_dxhat_xhat)
                            .matrix();
          }
          t.Accumulate(ix, dx);
        }
      });
}

Var Gather(Var table, const std::vector<int>& ids) {
  const Matrix& tv = table.value();
  Matrix out(ids.size(), tv.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= tv.rows()) {
      throw Error("autodiff: gather index " + std::to_string(ids[i]) +
                  " out of range");
    }
    out.row(i) = tv.row(ids[i]);
  }
  const int it = table.id;
  const Eigen::Index rows = tv.rows(), cols = tv.cols();
  return table.tape->Push(std::move(out), {it},
                          [it, ids, rows, cols](Tape& t, const Matrix& g) {
                            Matrix d = Matrix::Zero(rows, cols);
                            for (size_t i = 0; i < ids.size(); ++i) {
                              d.row(ids[i]) += g.row(i);
                            }
                            t.Accumulate(it, d);
                          });
}

Var RowSlice(Var a, int start, int count) {
  CheckShape(start >= 0 && count >= 0 && start + count <= a.rows(),
             "RowSlice");
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return a.tape->Push(a.value().middleRows(start, count), {ia},
                      [ia, start, count, rows, cols](Tape& t,
                                                     const Matrix& g) {
                        Matrix d = Matrix::Zero(rows, cols);
                        d.middleRows(start, count) = g;
                        t.Accumulate(ia, d);
                      });
}

Var ColSlice(Var a, int start, int count) {
  CheckShape(start >= 0 && count >= 0 && start + count <= a.cols(),
             "ColSlice");
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return a.tape->Push(a.value().middleCols(start, count), {ia},
                      [ia, start, count, rows, cols](Tape& t,
                                                     const Matrix& g) {
                        Matrix d = Matrix::Zero(rows, cols);
                        d.middleCols(start, count) = g;
                        t.Accumulate(ia, d);
                      });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error("autodiff: ConcatRows of nothing");
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts[0].cols();
  std::vector<int> ids;
  std::vector<Eigen::Index> sizes;
  for (const Var& p : parts) {
    CheckSameTape(parts[0], p);
    CheckShape(p.cols() == cols, "ConcatRows");
    rows += p.rows();
    ids.push_back(p.id);
    sizes.push_back(p.rows());
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return parts[0].tape->Push(std::move(out), ids,
                             [ids, sizes](Tape& t, const Matrix& g) {
                               Eigen::Index at = 0;
                               for (size_t i = 0; i < ids.size(); ++i) {
                                 if (t.RequiresGrad(ids[i])) {
                                   t.Accumulate(ids[i],
                                                g.middleRows(at, sizes[i]));
                                 }
                                 at += sizes[i];
                               }
                             });
}

Var ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error("autodiff: ConcatCols of nothing");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  std::vector<int> ids;
  std::vector<Eigen::Index> sizes;
  for (const Var& p : parts) {
    CheckSameTape(parts[0], p);
    CheckShape(p.rows() == rows, "ConcatCols");
    cols += p.cols();
    ids.push_back(p.id);
    sizes.push_back(p.cols());
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return parts[0].tape->Push(std::move(out), ids,
                             [ids, sizes](Tape& t, const Matrix& g) {
                               Eigen::Index at = 0;
                               for (size_t i = 0; i < ids.size(); ++i) {
                                 if (t.RequiresGrad(ids[i])) {
                                   t.Accumulate(ids[i],
                                                g.middleCols(at, sizes[i]));
                                 }
                                 at += sizes[i];
                               }
                             });
}

Var Pick(Var a, int row, int col) {
  CheckShape(row >= 0 && row < a.rows() && col >= 0 && col < a.cols(), "Pick");
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Matrix out(1, 1);
  out(0, 0) = a.value()(row, col);
  return a.tape->Push(std::move(out), {ia},
                      [ia, row, col, rows, cols](Tape& t, const Matrix& g) {
                        Matrix d = Matrix::Zero(rows, cols);
                        d(row, col) = g(0, 0);
                        t.Accumulate(ia, d);
                      });
}

Var Sum(Var a) {
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape->Push(std::move(out), {ia},
                      [ia, rows, cols](Tape& t, const Matrix& g) {
                        t.Accumulate(ia, Matrix::Constant(rows, cols, g(0, 0)));
                      });
}

}  // namespace factcheck::ad
