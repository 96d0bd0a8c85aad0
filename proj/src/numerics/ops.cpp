// Copyright 2026 The TC-SKNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcsk/numerics/ops.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

// [C, T] is treated as a batch of one.
struct SeqShape {
  Index batch;
  Index channels;
  Index time;
  bool batched;
};

SeqShape seq_shape(const Shape& shape, const char* op) {
  if (shape.size() == 2) return {1, shape[0], shape[1], false};
  if (shape.size() == 3) return {shape[0], shape[1], shape[2], true};
  throw DimensionError(std::string(op) + ": expected [C, T] or [N, C, T], got " +
                       shape_string(shape));
}

Shape make_seq_shape(const SeqShape& s, Index channels, Index time) {
  return s.batched ? Shape{s.batch, channels, time} : Shape{channels, time};
}

void require_rank(const Shape& shape, std::size_t rank, const char* op, const char* what) {
  if (shape.size() != rank) {
    throw DimensionError(std::string(op) + ": " + what + " must have rank " +
                         std::to_string(rank) + ", got " + shape_string(shape));
  }
}

void require_extent(Index got, Index expected, const char* op, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(op) + ": " + what + " is " + std::to_string(got) +
                         " but expected " + std::to_string(expected));
  }
}

Index pooled_length(Index length, Index kernel, Index stride, const char* op) {
  if (kernel < 1 || stride < 1) {
    throw DimensionError(std::string(op) + ": kernel and stride must be positive");
  }
  if (length < kernel) {
    throw DimensionError(std::string(op) + ": length " + std::to_string(length) +
                         " shorter than kernel " + std::to_string(kernel));
  }
  return (length - kernel) / stride + 1;
}

// Input index feeding padded position `pos`, or -1 for a zero pad.
Index source_index(Index pos, Index length, PadMode mode) {
  if (pos >= 0 && pos < length) return pos;
  if (mode == PadMode::zeros) return -1;
  return pos < 0 ? 0 : length - 1;
}

template <typename Scalar>
using ColMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowMap = Eigen::Map<RowMajorMatrix<Scalar>>;

template <typename Scalar>
using ConstRowMap = Eigen::Map<const RowMajorMatrix<Scalar>>;

}  // namespace

template <typename Scalar>
Var<Scalar> conv1d(Var<Scalar> input, Var<Scalar> weight, Var<Scalar> bias, Index stride,
                   Index padding, PadMode pad_mode) {
  constexpr const char* kOp = "conv1d";
  const SeqShape s = seq_shape(input.shape(), kOp);
  require_rank(weight.shape(), 3, kOp, "weight");
  require_rank(bias.shape(), 1, kOp, "bias");
  const Index cout = weight.shape()[0];
  const Index cin = weight.shape()[1];
  const Index kernel = weight.shape()[2];
  if (cin != s.channels) {
    throw DimensionError("conv1d: input has " + std::to_string(s.channels) +
                         " channels but weight expects Cin=" + std::to_string(cin));
  }
  require_extent(bias.shape()[0], cout, kOp, "bias length");
  if (stride < 1 || padding < 0) throw DimensionError("conv1d: stride >= 1 and padding >= 0");
  const Index out_t = pooled_length(s.time + 2 * padding, kernel, stride, kOp);

  const Index rows = cin * kernel;
  auto cols = std::make_shared<std::vector<ColMatrix<Scalar>>>(s.batch);
  Tensor<Scalar> out(make_seq_shape(s, cout, out_t));
  ConstRowMap<Scalar> w(weight.value().data().data(), cout, rows);
  const auto& b = bias.value().data();
  for (Index n = 0; n < s.batch; ++n) {
    ConstRowMap<Scalar> x(input.value().data().data() + n * cin * s.time, cin, s.time);
    ColMatrix<Scalar>& col = (*cols)[n];
    col.setZero(rows, out_t);
    for (Index i = 0; i < cin; ++i) {
      for (Index k = 0; k < kernel; ++k) {
        for (Index t = 0; t < out_t; ++t) {
          const Index src = source_index(t * stride + k - padding, s.time, pad_mode);
          if (src >= 0) col(i * kernel + k, t) = x(i, src);
        }
      }
    }
    RowMap<Scalar> y(out.data().data() + n * cout * out_t, cout, out_t);
    y.noalias() = w * col;
    y.colwise() += b;
  }

  const Index in_t = s.time;
  return input.graph().record(
      kOp, std::move(out), {input.id(), weight.id(), bias.id()},
      [=, in_id = input.id(), w_id = weight.id(), b_id = bias.id()](Graph<Scalar>& g,
                                                                      const Vector<Scalar>& gy) {
        ConstRowMap<Scalar> wm(g.value(w_id).data().data(), cout, rows);
        auto* gx = g.grad_sink(in_id);
        auto* gw = g.grad_sink(w_id);
        auto* gb = g.grad_sink(b_id);
        for (Index n = 0; n < s.batch; ++n) {
          ConstRowMap<Scalar> dy(gy.data() + n * cout * out_t, cout, out_t);
          if (gw) RowMap<Scalar>(gw->data(), cout, rows).noalias() += dy * (*cols)[n].transpose();
          if (gb) *gb += dy.rowwise().sum();
          if (gx) {
            const ColMatrix<Scalar> dcol = wm.transpose() * dy;
            RowMap<Scalar> dx(gx->data() + n * cin * in_t, cin, in_t);
            for (Index i = 0; i < cin; ++i) {
              for (Index k = 0; k < kernel; ++k) {
                for (Index t = 0; t < out_t; ++t) {
                  const Index src = source_index(t * stride + k - padding, in_t, pad_mode);
                  if (src >= 0) dx(i, src) += dcol(i * kernel + k, t);
                }
              }
            }
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> depthwise_conv1d(Var<Scalar> input, Var<Scalar> weight, Var<Scalar> bias,
                             Index stride, Index padding, PadMode pad_mode) {
  constexpr const char* kOp = "depthwise_conv1d";
  const SeqShape s = seq_shape(input.shape(), kOp);
  require_rank(weight.shape(), 3, kOp, "weight");
  require_rank(bias.shape(), 1, kOp, "bias");
  require_extent(weight.shape()[0], s.channels, kOp, "weight channel count");
  require_extent(weight.shape()[1], 1, kOp, "weight middle extent");
  require_extent(bias.shape()[0], s.channels, kOp, "bias length");
  if (stride < 1 || padding < 0) throw DimensionError("depthwise_conv1d: bad stride/padding");
  const Index kernel = weight.shape()[2];
  const Index out_t = pooled_length(s.time + 2 * padding, kernel, stride, kOp);
  const Index channels = s.channels;
  const Index in_t = s.time;

  Tensor<Scalar> out(make_seq_shape(s, channels, out_t));
  const auto& x = input.value().data();
  const auto& w = weight.value().data();
  const auto& b = bias.value().data();
  for (Index n = 0; n < s.batch; ++n) {
    for (Index c = 0; c < channels; ++c) {
      const Scalar* xr = x.data() + (n * channels + c) * in_t;
      Scalar* yr = out.data().data() + (n * channels + c) * out_t;
      for (Index t = 0; t < out_t; ++t) {
        Scalar acc = b[c];
        for (Index k = 0; k < kernel; ++k) {
          const Index src = source_index(t * stride + k - padding, in_t, pad_mode);
          if (src >= 0) acc += w[c * kernel + k] * xr[src];
        }
        yr[t] = acc;
      }
    }
  }

  return input.graph().record(
      kOp, std::move(out), {input.id(), weight.id(), bias.id()},
      [=, in_id = input.id(), w_id = weight.id(), b_id = bias.id()](Graph<Scalar>& g,
                                                                      const Vector<Scalar>& gy) {
        const auto& xv = g.value(in_id).data();
        const auto& wv = g.value(w_id).data();
        auto* gx = g.grad_sink(in_id);
        auto* gw = g.grad_sink(w_id);
        auto* gb = g.grad_sink(b_id);
        for (Index n = 0; n < s.batch; ++n) {
          for (Index c = 0; c < channels; ++c) {
            const Index xo = (n * channels + c) * in_t;
            const Index yo = (n * channels + c) * out_t;
            for (Index t = 0; t < out_t; ++t) {
              const Scalar d = gy[yo + t];
              if (gb) (*gb)[c] += d;
              for (Index k = 0; k < kernel; ++k) {
                const Index src = source_index(t * stride + k - padding, in_t, pad_mode);
                if (src < 0) continue;
                if (gw) (*gw)[c * kernel + k] += d * xv[xo + src];
                if (gx) (*gx)[xo + src] += d * wv[c * kernel + k];
              }
            }
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> batchnorm1d(Var<Scalar> input, Var<Scalar> gamma, Var<Scalar> beta,
                        BatchNormStats<Scalar>& stats, Mode mode, double momentum, double eps) {
  constexpr const char* kOp = "batchnorm1d";
  const SeqShape s = seq_shape(input.shape(), kOp);
  require_rank(gamma.shape(), 1, kOp, "gamma");
  require_rank(beta.shape(), 1, kOp, "beta");
  require_extent(gamma.shape()[0], s.channels, kOp, "gamma length");
  require_extent(beta.shape()[0], s.channels, kOp, "beta length");
  const Index channels = s.channels;
  const Index time = s.time;
  const Index count = s.batch * time;
  const auto& x = input.value().data();
  const auto& gm = gamma.value().data();
  const auto& bt = beta.value().data();

  Vector<Scalar> mean(channels);
  Vector<Scalar> inv_std(channels);
  if (mode == Mode::train) {
    Vector<Scalar> var(channels);
    for (Index c = 0; c < channels; ++c) {
      Scalar acc = 0;
      for (Index n = 0; n < s.batch; ++n) {
        acc += x.segment((n * channels + c) * time, time).sum();
      }
      mean[c] = acc / static_cast<Scalar>(count);
      Scalar sq = 0;
      for (Index n = 0; n < s.batch; ++n) {
        sq += (x.segment((n * channels + c) * time, time).array() - mean[c]).square().sum();
      }
      var[c] = sq / static_cast<Scalar>(count);
    }
    for (Index c = 0; c < channels; ++c) {
      const Scalar denom = var[c] + static_cast<Scalar>(eps);
      inv_std[c] = denom > 0 ? Scalar(1) / std::sqrt(denom) : Scalar(0);
    }
    if (!stats.initialized()) stats = BatchNormStats<Scalar>::fresh(channels);
    const Scalar m = static_cast<Scalar>(momentum);
    const Scalar unbias =
        count > 1 ? static_cast<Scalar>(count) / static_cast<Scalar>(count - 1) : Scalar(1);
    stats.mean = (Scalar(1) - m) * stats.mean + m * mean;
    stats.var = (Scalar(1) - m) * stats.var + m * unbias * var;
  } else {
    if (!stats.initialized()) {
      throw NumericError("batchnorm1d: eval mode requires running statistics, none initialized");
    }
    require_extent(stats.mean.size(), channels, kOp, "running statistics length");
    mean = stats.mean;
    for (Index c = 0; c < channels; ++c) {
      const Scalar denom = stats.var[c] + static_cast<Scalar>(eps);
      inv_std[c] = denom > 0 ? Scalar(1) / std::sqrt(denom) : Scalar(0);
    }
  }

  Tensor<Scalar> out(input.shape());
  auto xhat = std::make_shared<Vector<Scalar>>(x.size());
  for (Index n = 0; n < s.batch; ++n) {
    for (Index c = 0; c < channels; ++c) {
      const Index o = (n * channels + c) * time;
      xhat->segment(o, time) = (x.segment(o, time).array() - mean[c]) * inv_std[c];
      out.data().segment(o, time) = xhat->segment(o, time).array() * gm[c] + bt[c];
    }
  }

  return input.graph().record(
      kOp, std::move(out), {input.id(), gamma.id(), beta.id()},
      [=, in_id = input.id(), g_id = gamma.id(), b_id = beta.id()](Graph<Scalar>& g,
                                                                     const Vector<Scalar>& gy) {
        const auto& gmv = g.value(g_id).data();
        auto* gx = g.grad_sink(in_id);
        auto* ggamma = g.grad_sink(g_id);
        auto* gbeta = g.grad_sink(b_id);
        for (Index c = 0; c < channels; ++c) {
          Scalar sum_dy = 0;
          Scalar sum_dy_xhat = 0;
          for (Index n = 0; n < s.batch; ++n) {
            const Index o = (n * channels + c) * time;
            sum_dy += gy.segment(o, time).sum();
            sum_dy_xhat += gy.segment(o, time).dot(xhat->segment(o, time));
          }
          if (ggamma) (*ggamma)[c] += sum_dy_xhat;
          if (gbeta) (*gbeta)[c] += sum_dy;
          if (!gx) continue;
          const Scalar scale = gmv[c] * inv_std[c];
          for (Index n = 0; n < s.batch; ++n) {
            const Index o = (n * channels + c) * time;
            if (mode == Mode::train) {
              const Scalar inv_count = Scalar(1) / static_cast<Scalar>(count);
              gx->segment(o, time).array() +=
                  scale * (gy.segment(o, time).array() - sum_dy * inv_count -
                           xhat->segment(o, time).array() * (sum_dy_xhat * inv_count));
            } else {
              gx->segment(o, time).array() += scale * gy.segment(o, time).array();
            }
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> relu(Var<Scalar> x) {
  Tensor<Scalar> out(x.shape(), x.value().data().cwiseMax(Scalar(0)));
  return x.graph().record("relu", std::move(out), {x.id()},
                          [id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* gx = g.grad_sink(id)) {
                              const auto& xv = g.value(id).data();
                              *gx += (xv.array() > Scalar(0)).select(gy, Scalar(0)).matrix();
                            }
                          });
}

template <typename Scalar>
Var<Scalar> softmax(Var<Scalar> x, Index axis) {
  const Shape& shape = x.shape();
  const Index rank = static_cast<Index>(shape.size());
  if (axis < 0) axis += rank;
  if (axis < 0 || axis >= rank) throw DimensionError("softmax: axis out of range");
  const Index len = shape[axis];
  if (len == 0) throw DimensionError("softmax: empty axis " + std::to_string(axis));
  Index outer = 1;
  Index inner = 1;
  for (Index i = 0; i < axis; ++i) outer *= shape[i];
  for (Index i = axis + 1; i < rank; ++i) inner *= shape[i];

  auto y = std::make_shared<Tensor<Scalar>>(shape);
  const auto& xv = x.value().data();
  for (Index o = 0; o < outer; ++o) {
    for (Index in = 0; in < inner; ++in) {
      const Index base = o * len * inner + in;
      Scalar mx = -std::numeric_limits<Scalar>::infinity();
      for (Index k = 0; k < len; ++k) mx = std::max(mx, xv[base + k * inner]);
      Scalar total = 0;
      for (Index k = 0; k < len; ++k) {
        const Scalar e = std::exp(xv[base + k * inner] - mx);
        (*y)[base + k * inner] = e;
        total += e;
      }
      for (Index k = 0; k < len; ++k) (*y)[base + k * inner] /= total;
    }
  }

  Tensor<Scalar> out = *y;
  return x.graph().record(
      "softmax", std::move(out), {x.id()},
      [=, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
        auto* gx = g.grad_sink(id);
        if (!gx) return;
        for (Index o = 0; o < outer; ++o) {
          for (Index in = 0; in < inner; ++in) {
            const Index base = o * len * inner + in;
            Scalar dot = 0;
            for (Index k = 0; k < len; ++k) dot += gy[base + k * inner] * (*y)[base + k * inner];
            for (Index k = 0; k < len; ++k) {
              (*gx)[base + k * inner] += (*y)[base + k * inner] * (gy[base + k * inner] - dot);
            }
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> global_average_pool(Var<Scalar> x) {
  const Shape& shape = x.shape();
  if (shape.size() < 2) {
    throw DimensionError("global_average_pool: expected rank >= 2, got " + shape_string(shape));
  }
  const Index time = shape.back();
  if (time == 0) throw DimensionError("global_average_pool: empty time axis");
  Shape out_shape(shape.begin(), shape.end() - 1);
  // Accumulate in double so a constant row averages back to that constant.
  Tensor<Scalar> out(out_shape,
                     x.value().matrix().template cast<double>().rowwise().mean().template cast<Scalar>());
  return x.graph().record("global_average_pool", std::move(out), {x.id()},
                          [id = x.id(), time](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            auto* gx = g.grad_sink(id);
                            if (!gx) return;
                            RowMap<Scalar> dx(gx->data(), gy.size(), time);
                            dx.colwise() += gy / static_cast<Scalar>(time);
                          });
}

template <typename Scalar>
Var<Scalar> linear(Var<Scalar> x, Var<Scalar> weight, Var<Scalar> bias) {
  constexpr const char* kOp = "linear";
  const Shape& shape = x.shape();
  if (shape.empty() || shape.size() > 2) {
    throw DimensionError("linear: input must be [in] or [N, in], got " + shape_string(shape));
  }
  require_rank(weight.shape(), 2, kOp, "weight");
  require_rank(bias.shape(), 1, kOp, "bias");
  const Index out_dim = weight.shape()[0];
  const Index in_dim = weight.shape()[1];
  if (shape.back() != in_dim) {
    throw DimensionError("linear: input width " + std::to_string(shape.back()) +
                         " does not match weight in=" + std::to_string(in_dim));
  }
  require_extent(bias.shape()[0], out_dim, kOp, "bias length");
  const Index rows = shape.size() == 2 ? shape[0] : 1;
  Shape out_shape = shape.size() == 2 ? Shape{rows, out_dim} : Shape{out_dim};

  Tensor<Scalar> out(out_shape);
  ConstRowMap<Scalar> xm(x.value().data().data(), rows, in_dim);
  ConstRowMap<Scalar> wm(weight.value().data().data(), out_dim, in_dim);
  RowMap<Scalar> ym(out.data().data(), rows, out_dim);
  ym.noalias() = xm * wm.transpose();
  ym.rowwise() += bias.value().data().transpose();

  return x.graph().record(
      kOp, std::move(out), {x.id(), weight.id(), bias.id()},
      [=, x_id = x.id(), w_id = weight.id(), b_id = bias.id()](Graph<Scalar>& g,
                                                                 const Vector<Scalar>& gy) {
        ConstRowMap<Scalar> dy(gy.data(), rows, out_dim);
        if (auto* gw = g.grad_sink(w_id)) {
          ConstRowMap<Scalar> xv(g.value(x_id).data().data(), rows, in_dim);
          RowMap<Scalar>(gw->data(), out_dim, in_dim).noalias() += dy.transpose() * xv;
        }
        if (auto* gb = g.grad_sink(b_id)) *gb += dy.colwise().sum().transpose();
        if (auto* gx = g.grad_sink(x_id)) {
          ConstRowMap<Scalar> wv(g.value(w_id).data().data(), out_dim, in_dim);
          RowMap<Scalar>(gx->data(), rows, in_dim).noalias() += dy * wv;
        }
      });
}

template <typename Scalar>
Var<Scalar> avg_pool1d(Var<Scalar> x, Index kernel, Index stride) {
  const Shape& shape = x.shape();
  if (shape.empty()) throw DimensionError("avg_pool1d: scalar input");
  const Index time = shape.back();
  const Index out_t = pooled_length(time, kernel, stride, "avg_pool1d");
  Shape out_shape = shape;
  out_shape.back() = out_t;
  Tensor<Scalar> out(out_shape);
  const auto in = x.value().matrix();
  auto y = out.matrix();
  for (Index t = 0; t < out_t; ++t) {
    y.col(t) = in.middleCols(t * stride, kernel).rowwise().mean();
  }
  return x.graph().record(
      "avg_pool1d", std::move(out), {x.id()},
      [=, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
        auto* gx = g.grad_sink(id);
        if (!gx) return;
        const Index rows = gy.size() / out_t;
        ConstRowMap<Scalar> dy(gy.data(), rows, out_t);
        RowMap<Scalar> dx(gx->data(), rows, time);
        for (Index t = 0; t < out_t; ++t) {
          for (Index k = 0; k < kernel; ++k) {
            dx.col(t * stride + k) += dy.col(t) / static_cast<Scalar>(kernel);
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> max_pool1d(Var<Scalar> x, Index kernel, Index stride) {
  const Shape& shape = x.shape();
  if (shape.empty()) throw DimensionError("max_pool1d: scalar input");
  const Index time = shape.back();
  const Index out_t = pooled_length(time, kernel, stride, "max_pool1d");
  Shape out_shape = shape;
  out_shape.back() = out_t;
  Tensor<Scalar> out(out_shape);
  const Index rows = time == 0 ? 0 : x.value().size() / time;
  auto argmax = std::make_shared<std::vector<Index>>(rows * out_t);
  const auto& xv = x.value().data();
  for (Index r = 0; r < rows; ++r) {
    for (Index t = 0; t < out_t; ++t) {
      Index best = r * time + t * stride;
      for (Index k = 1; k < kernel; ++k) {
        const Index i = r * time + t * stride + k;
        if (xv[i] > xv[best]) best = i;
      }
      (*argmax)[r * out_t + t] = best;
      out[r * out_t + t] = xv[best];
    }
  }
  return x.graph().record("max_pool1d", std::move(out), {x.id()},
                          [argmax, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            auto* gx = g.grad_sink(id);
                            if (!gx) return;
                            for (Index i = 0; i < gy.size(); ++i) (*gx)[(*argmax)[i]] += gy[i];
                          });
}

template <typename Scalar>
Var<Scalar> dropout(Var<Scalar> x, double p, Mode mode, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ConfigError("dropout: probability " + std::to_string(p) + " outside [0, 1)");
  }
  if (mode == Mode::eval || p == 0.0) return x;
  const Scalar keep_scale = static_cast<Scalar>(1.0 / (1.0 - p));
  auto mask = std::make_shared<Vector<Scalar>>(x.value().size());
  for (Index i = 0; i < mask->size(); ++i) (*mask)[i] = rng.uniform() < p ? Scalar(0) : keep_scale;
  Tensor<Scalar> out(x.shape(), x.value().data().cwiseProduct(*mask));
  return x.graph().record("dropout", std::move(out), {x.id()},
                          [mask, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* gx = g.grad_sink(id)) *gx += gy.cwiseProduct(*mask);
                          });
}

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("add: shapes " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()) + " differ");
  }
  Tensor<Scalar> out(a.shape(), a.value().data() + b.value().data());
  return a.graph().record("add", std::move(out), {a.id(), b.id()},
                          [ia = a.id(), ib = b.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* ga = g.grad_sink(ia)) *ga += gy;
                            if (auto* gb = g.grad_sink(ib)) *gb += gy;
                          });
}

template <typename Scalar>
Var<Scalar> scalar_mul(Var<Scalar> x, Scalar factor) {
  Tensor<Scalar> out(x.shape(), x.value().data() * factor);
  return x.graph().record("scalar_mul", std::move(out), {x.id()},
                          [factor, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* gx = g.grad_sink(id)) *gx += gy * factor;
                          });
}

template <typename Scalar>
Var<Scalar> stack(const std::vector<Var<Scalar>>& parts) {
  if (parts.empty()) throw DimensionError("stack: no inputs");
  const Shape& part_shape = parts.front().shape();
  const Index part_size = parts.front().value().size();
  std::vector<Index> ids;
  for (const auto& p : parts) {
    if (p.shape() != part_shape) {
      throw DimensionError("stack: shape " + shape_string(p.shape()) + " differs from " +
                           shape_string(part_shape));
    }
    ids.push_back(p.id());
  }
  Shape out_shape{static_cast<Index>(parts.size())};
  out_shape.insert(out_shape.end(), part_shape.begin(), part_shape.end());
  Tensor<Scalar> out(out_shape);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.data().segment(static_cast<Index>(i) * part_size, part_size) = parts[i].value().data();
  }
  return parts.front().graph().record(
      "stack", std::move(out), ids, [ids, part_size](Graph<Scalar>& g, const Vector<Scalar>& gy) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (auto* gp = g.grad_sink(ids[i])) {
            *gp += gy.segment(static_cast<Index>(i) * part_size, part_size);
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> select(Var<Scalar> x, Index index) {
  const Shape& shape = x.shape();
  if (shape.empty() || index < 0 || index >= shape[0]) {
    throw DimensionError("select: index " + std::to_string(index) + " out of range for " +
                         shape_string(shape));
  }
  Shape out_shape(shape.begin() + 1, shape.end());
  const Index part = shape_size(out_shape);
  Tensor<Scalar> out(out_shape, x.value().data().segment(index * part, part));
  return x.graph().record("select", std::move(out), {x.id()},
                          [=, id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* gx = g.grad_sink(id)) gx->segment(index * part, part) += gy;
                          });
}

template <typename Scalar>
Var<Scalar> scale_channels(Var<Scalar> u, Var<Scalar> w) {
  const Shape& us = u.shape();
  const Shape& ws = w.shape();
  if (us.size() < 2 || Shape(us.begin(), us.end() - 1) != ws) {
    throw DimensionError("scale_channels: weights " + shape_string(ws) + " do not match " +
                         shape_string(us) + " without its last axis");
  }
  const Index time = us.back();
  Tensor<Scalar> out(us);
  out.matrix() = u.value().matrix().array().colwise() * w.value().data().array();
  return u.graph().record(
      "scale_channels", std::move(out), {u.id(), w.id()},
      [=, u_id = u.id(), w_id = w.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
        const Index rows = gy.size() / time;
        ConstRowMap<Scalar> dy(gy.data(), rows, time);
        if (auto* gu = g.grad_sink(u_id)) {
          RowMap<Scalar>(gu->data(), rows, time).array() +=
              dy.array().colwise() * g.value(w_id).data().array();
        }
        if (auto* gw = g.grad_sink(w_id)) {
          *gw += dy.cwiseProduct(g.value(u_id).matrix()).rowwise().sum();
        }
      });
}

template <typename Scalar>
Var<Scalar> sum(Var<Scalar> x) {
  return x.graph().record("sum", Tensor<Scalar>::scalar(x.value().data().sum()), {x.id()},
                          [id = x.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
                            if (auto* gx = g.grad_sink(id)) gx->array() += gy[0];
                          });
}

template <typename Scalar>
Var<Scalar> cross_entropy(Var<Scalar> logits, const Tensor<Scalar>& target) {
  const Shape& shape = logits.shape();
  if (shape.empty() || shape.size() > 2) {
    throw DimensionError("cross_entropy: logits must be [C] or [N, C], got " + shape_string(shape));
  }
  if (target.shape() != shape) {
    throw DimensionError("cross_entropy: target " + shape_string(target.shape()) +
                         " does not match logits " + shape_string(shape));
  }
  const Index classes = shape.back();
  if (classes == 0) throw DimensionError("cross_entropy: no classes");
  const Index rows = logits.value().size() / classes;
  const auto t = target.matrix();
  for (Index r = 0; r < rows; ++r) {
    if ((t.row(r).array() < Scalar(0)).any()) {
      throw NumericError("cross_entropy: target row " + std::to_string(r) +
                         " has negative entries");
    }
    const double total = t.row(r).template cast<double>().sum();
    if (std::abs(total - 1.0) > 1e-6) {
      throw NumericError("cross_entropy: target row " + std::to_string(r) + " sums to " +
                         std::to_string(total) + ", expected 1");
    }
  }

  const auto z = logits.value().matrix();
  auto probs = std::make_shared<RowMajorMatrix<Scalar>>(rows, classes);
  Scalar loss = 0;
  for (Index r = 0; r < rows; ++r) {
    const Scalar mx = z.row(r).maxCoeff();
    const Scalar lse = mx + std::log((z.row(r).array() - mx).exp().sum());
    probs->row(r) = (z.row(r).array() - lse).exp();
    loss -= (t.row(r).array() * (z.row(r).array() - lse)).sum();
  }
  loss /= static_cast<Scalar>(rows);
  auto tgt = std::make_shared<RowMajorMatrix<Scalar>>(t);
  return logits.graph().record(
      "cross_entropy", Tensor<Scalar>::scalar(loss), {logits.id()},
      [=, id = logits.id()](Graph<Scalar>& g, const Vector<Scalar>& gy) {
        if (auto* gx = g.grad_sink(id)) {
          RowMap<Scalar>(gx->data(), rows, classes) +=
              (*probs - *tgt) * (gy[0] / static_cast<Scalar>(rows));
        }
      });
}

#define TCSK_INSTANTIATE_OPS(S)                                                                  \
  template Var<S> conv1d(Var<S>, Var<S>, Var<S>, Index, Index, PadMode);                         \
  template Var<S> depthwise_conv1d(Var<S>, Var<S>, Var<S>, Index, Index, PadMode);               \
  template Var<S> batchnorm1d(Var<S>, Var<S>, Var<S>, BatchNormStats<S>&, Mode, double, double); \
  template Var<S> relu(Var<S>);                                                                  \
  template Var<S> softmax(Var<S>, Index);                                                        \
  template Var<S> global_average_pool(Var<S>);                                                   \
  template Var<S> linear(Var<S>, Var<S>, Var<S>);                                                \
  template Var<S> avg_pool1d(Var<S>, Index, Index);                                              \
  template Var<S> max_pool1d(Var<S>, Index, Index);                                              \
  template Var<S> dropout(Var<S>, double, Mode, Rng&);                                           \
  template Var<S> add(Var<S>, Var<S>);                                                           \
  template Var<S> scalar_mul(Var<S>, S);                                                         \
  template Var<S> stack(const std::vector<Var<S>>&);                                             \
  template Var<S> select(Var<S>, Index);                                                         \
  template Var<S> scale_channels(Var<S>, Var<S>);                                                \
  template Var<S> sum(Var<S>);                                                                   \
  template Var<S> cross_entropy(Var<S>, const Tensor<S>&);

TCSK_INSTANTIATE_OPS(float)
TCSK_INSTANTIATE_OPS(double)

#undef TCSK_INSTANTIATE_OPS

}  // namespace tcsk
