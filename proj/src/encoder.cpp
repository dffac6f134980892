/*
 * Copyright 2026 The walkjoin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "walkjoin/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace walkjoin {

namespace {

Eigen::MatrixXd glorot_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-a, a);
  Eigen::MatrixXd m(rows, cols);
  // column-major fill order is part of the seeded init contract
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

void check_input(const ModelParams& p, const DenseTensor& x) {
  const auto& c = p.config;
  if (static_cast<std::size_t>(x.cols()) != c.input_dim()) {
    throw InvalidArgument("encoder input has " + std::to_string(x.cols()) + " columns, expected " +
                          std::to_string(c.input_dim()));
  }
  if (x.rows() == 0 || static_cast<std::size_t>(x.rows()) % (c.arity * c.walk_len()) != 0) {
    throw InvalidArgument("encoder input rows are not a whole number of walks per query node");
  }
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& c) {
  if (c.arity < 1 || c.steps < 1 || c.hidden < 1) throw InvalidArgument("bad model configuration");
  ModelParams p;
  p.config = c;
  const auto h = static_cast<Eigen::Index>(c.hidden);
  const auto d = static_cast<Eigen::Index>(c.input_dim());
  p.W1 = Eigen::MatrixXd::Zero(h, d);
  p.b1 = Eigen::MatrixXd::Zero(h, 1);
  p.W2 = Eigen::MatrixXd::Zero(h, h);
  p.b2 = Eigen::MatrixXd::Zero(h, 1);
  p.U1 = Eigen::MatrixXd::Zero(h, h);
  p.c1 = Eigen::MatrixXd::Zero(h, 1);
  p.U2 = Eigen::MatrixXd::Zero(1, h);
  p.c2 = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

ModelParams ModelParams::glorot(const ModelConfig& c, std::uint64_t seed) {
  ModelParams p = zeros(c);
  Rng rng(stage_seed(seed, "init"));
  p.W1 = glorot_matrix(p.W1.rows(), p.W1.cols(), rng);
  p.W2 = glorot_matrix(p.W2.rows(), p.W2.cols(), rng);
  p.U1 = glorot_matrix(p.U1.rows(), p.U1.cols(), rng);
  p.U2 = glorot_matrix(p.U2.rows(), p.U2.cols(), rng);
  return p;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](std::string_view, const Eigen::MatrixXd& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

void ModelParams::set_zero() {
  for_each([](std::string_view, Eigen::MatrixXd& t) { t.setZero(); });
}

ModelParams& ModelParams::operator+=(const ModelParams& o) {
  W1 += o.W1; b1 += o.b1; W2 += o.W2; b2 += o.b2;
  U1 += o.U1; c1 += o.c1; U2 += o.U2; c2 += o.c2;
  return *this;
}

ModelParams& ModelParams::operator*=(double s) {
  for_each([s](std::string_view, Eigen::MatrixXd& t) { t *= s; });
  return *this;
}

bool ModelParams::same_values(const ModelParams& o) const {
  return config == o.config && W1 == o.W1 && b1 == o.b1 && W2 == o.W2 && b2 == o.b2 &&
         U1 == o.U1 && c1 == o.c1 && U2 == o.U2 && c2 == o.c2;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce_loss(double logit, int label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

ForwardResult forward(const ModelParams& params, const DenseTensor& x, bool training,
                      Rng* dropout_rng) {
  const double p = params.config.dropout;
  if (!training || p <= 0.0) return forward_with_mask(params, x, Eigen::MatrixXd());
  if (dropout_rng == nullptr) throw InvalidArgument("training forward needs a dropout generator");
  if (p >= 1.0) throw InvalidArgument("dropout rate must be < 1");
  Eigen::MatrixXd mask(x.rows(), static_cast<Eigen::Index>(params.config.hidden));
  const double keep_scale = 1.0 / (1.0 - p);
  std::bernoulli_distribution keep(1.0 - p);
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index k = 0; k < mask.cols(); ++k) mask(r, k) = keep(*dropout_rng) ? keep_scale : 0.0;
  return forward_with_mask(params, x, mask);
}

ForwardResult forward_with_mask(const ModelParams& params, const DenseTensor& x,
                                const Eigen::MatrixXd& mask) {
  check_input(params, x);
  const auto h = static_cast<Eigen::Index>(params.config.hidden);
  const Eigen::Index rows = x.rows();
  const Eigen::Index d = x.cols();
  if (mask.size() != 0 && (mask.rows() != rows || mask.cols() != h)) {
    throw InvalidArgument("dropout mask shape mismatch");
  }
  const auto len = static_cast<Eigen::Index>(params.config.walk_len());
  const Eigen::Index walks = rows / len;

  ForwardResult out;
  ForwardCache& c = out.cache;
  c.version = params.version;
  c.input = x;
  c.mask = mask;
  c.pre.resize(rows, h);

  // First layer row by row; RPE rows are sparse, and a fixed per-row
  // accumulation order keeps rows bit-identical wherever they sit.
  Eigen::MatrixXd walk_enc = Eigen::MatrixXd::Zero(h, walks);
  Eigen::VectorXd acc(h);
  for (Eigen::Index r = 0; r < rows; ++r) {
    acc = params.b1.col(0);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double xi = x(r, i);
      if (xi != 0.0) acc.noalias() += xi * params.W1.col(i);
    }
    c.pre.row(r) = acc.transpose();
    auto enc = walk_enc.col(r / len);
    for (Eigen::Index k = 0; k < h; ++k) {
      double a = acc[k] > 0.0 ? acc[k] : 0.0;
      if (mask.size() != 0) a *= mask(r, k);
      enc[k] += a;
    }
  }
  walk_enc /= static_cast<double>(len);

  // Mean over walks summed in sorted order, so permuting walks is bit-exact.
  c.pooled.resize(h);
  std::vector<double> column(static_cast<std::size_t>(walks));
  for (Eigen::Index k = 0; k < h; ++k) {
    for (Eigen::Index w = 0; w < walks; ++w) column[w] = walk_enc(k, w);
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    c.pooled[k] = sum / static_cast<double>(walks);
  }

  c.h_q = params.W2 * c.pooled + params.b2.col(0);
  c.z1 = params.U1 * c.h_q + params.c1.col(0);
  const Eigen::VectorXd g1 = c.z1.cwiseMax(0.0);
  c.logit = (params.U2 * g1)(0, 0) + params.c2(0, 0);
  c.valid = true;
  out.logit = c.logit;
  return out;
}

Gradients backward(const ModelParams& params, const ForwardCache& c, int label) {
  if (!c.valid) throw InvalidArgument("backward called without a forward cache");
  if (c.version != params.version) throw InvalidArgument("stale forward cache: parameters changed");
  const auto h = static_cast<Eigen::Index>(params.config.hidden);
  if (c.pre.cols() != h || c.input.cols() != params.W1.cols()) {
    throw InvalidArgument("forward cache does not match parameter shapes");
  }

  Gradients g = ModelParams::zeros(params.config);
  const double dz = sigmoid(c.logit) - label;
  const Eigen::VectorXd g1 = c.z1.cwiseMax(0.0);
  g.c2(0, 0) = dz;
  g.U2 = dz * g1.transpose();
  Eigen::VectorXd dz1 = dz * params.U2.row(0).transpose();
  for (Eigen::Index k = 0; k < h; ++k)
    if (c.z1[k] <= 0.0) dz1[k] = 0.0;
  g.U1 = dz1 * c.h_q.transpose();
  g.c1.col(0) = dz1;
  const Eigen::VectorXd dh = params.U1.transpose() * dz1;
  g.W2 = dh * c.pooled.transpose();
  g.b2.col(0) = dh;
  const Eigen::VectorXd dpooled = params.W2.transpose() * dh;

  // pooled is the plain mean of all rows' hidden activations
  const Eigen::Index rows = c.input.rows();
  const Eigen::VectorXd drow = dpooled / static_cast<double>(rows);
  Eigen::VectorXd da(h);
  for (Eigen::Index r = 0; r < rows; ++r) {
    bool any = false;
    for (Eigen::Index k = 0; k < h; ++k) {
      double v = c.pre(r, k) > 0.0 ? drow[k] : 0.0;
      if (c.mask.size() != 0) v *= c.mask(r, k);
      da[k] = v;
      any = any || v != 0.0;
    }
    if (!any) continue;
    g.b1.col(0) += da;
    for (Eigen::Index i = 0; i < c.input.cols(); ++i) {
      const double xi = c.input(r, i);
      if (xi != 0.0) g.W1.col(i).noalias() += xi * da;
    }
  }
  return g;
}

AdamState AdamState::for_params(const ModelParams& params, double lr) {
  AdamState s;
  s.lr = lr;
  s.first = ModelParams::zeros(params.config);
  s.second = ModelParams::zeros(params.config);
  return s;
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& s) {
  if (!(grads.config == params.config) || !(s.first.config == params.config)) {
    throw InvalidArgument("optimizer state does not match the model");
  }
  ++s.step;
  const double t = static_cast<double>(s.step);
  const double correct1 = 1.0 - std::pow(s.beta1, t);
  const double correct2 = 1.0 - std::pow(s.beta2, t);

  std::vector<Eigen::MatrixXd*> p, m, v;
  std::vector<const Eigen::MatrixXd*> g;
  params.for_each([&](std::string_view, Eigen::MatrixXd& x) { p.push_back(&x); });
  s.first.for_each([&](std::string_view, Eigen::MatrixXd& x) { m.push_back(&x); });
  s.second.for_each([&](std::string_view, Eigen::MatrixXd& x) { v.push_back(&x); });
  grads.for_each([&](std::string_view, const Eigen::MatrixXd& x) { g.push_back(&x); });
  for (std::size_t i = 0; i < p.size(); ++i) {
    *m[i] = s.beta1 * *m[i] + (1.0 - s.beta1) * *g[i];
    *v[i] = s.beta2 * *v[i] + (1.0 - s.beta2) * g[i]->cwiseProduct(*g[i]);
    const Eigen::ArrayXXd mhat = m[i]->array() / correct1;
    const Eigen::ArrayXXd vhat = v[i]->array() / correct2;
    p[i]->array() -= s.lr * mhat / (vhat.sqrt() + s.epsilon);
  }
  ++params.version;
}

DenseTensor featurize(const RpeTable& table, const JoinedQuery& jq, double rpe_scale,
                      const NodeFeatures* features) {
  DenseTensor rpe = gather_rpe(table, jq);
  if (rpe_scale != 1.0) rpe *= rpe_scale;
  if (features == nullptr || features->dim == 0) return rpe;
  DenseTensor out(rpe.rows(), rpe.cols() + static_cast<Eigen::Index>(features->dim));
  out.leftCols(rpe.cols()) = rpe;
  for (std::size_t r = 0; r < jq.rows(); ++r) {
    auto f = features->row(jq.walk_nodes[r]);
    for (std::size_t i = 0; i < f.size(); ++i) {
      out(static_cast<Eigen::Index>(r), rpe.cols() + static_cast<Eigen::Index>(i)) = f[i];
    }
  }
  return out;
}

}  // namespace walkjoin
