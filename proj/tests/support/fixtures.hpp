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

#pragma once

// Small random model instances and a central-difference gradient.

#include <string_view>
#include <vector>

#include "walkjoin/encoder.hpp"
#include "walkjoin/rng.hpp"

namespace walkjoin::fixture {

inline ModelConfig tiny_config(std::uint32_t arity = 2, std::uint32_t M = 2, std::uint32_t m = 2,
                        std::uint32_t h = 4) {
  ModelConfig c;
  c.arity = arity;
  c.num_walks = M;
  c.steps = m;
  c.hidden = h;
  c.dropout = 0.0;
  return c;
}

/// Glorot weights plus random biases so every term is exercised.
inline ModelParams random_params(const ModelConfig& c, std::uint64_t seed) {
  ModelParams p = ModelParams::glorot(c, seed);
  Rng rng(seed + 1000);
  for (Eigen::MatrixXd* b : {&p.b1, &p.b2, &p.c1, &p.c2})
    for (Eigen::Index i = 0; i < b->size(); ++i) b->data()[i] = uniform_real(rng) - 0.5;
  return p;
}

/// RPE-like input: small nonnegative counts scaled by 1/M with many zeros.
inline DenseTensor random_input(const ModelConfig& c, std::uint64_t seed) {
  Rng rng(seed);
  const auto rows = static_cast<Eigen::Index>(c.arity * c.num_walks * c.walk_len());
  DenseTensor x(rows, static_cast<Eigen::Index>(c.input_dim()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index i = 0; i < x.cols(); ++i)
      x(r, i) = uniform_real(rng) < 0.4 ? static_cast<double>(1 + uniform_index(rng, c.num_walks)) / c.num_walks : 0.0;
  return x;
}

inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = a.norm() + b.norm();
  return scale < 1e-12 ? 0.0 : (a - b).norm() / scale;
}

/// Central differences of `loss` for every entry of every tensor.
template <class Loss>
inline Gradients numeric_gradients(const ModelParams& p, Loss&& loss, double eps = 1e-4) {
  Gradients g = ModelParams::zeros(p.config);
  ModelParams q = p;
  std::vector<Eigen::MatrixXd*> qs, gs;
  q.for_each([&](std::string_view, Eigen::MatrixXd& t) { qs.push_back(&t); });
  g.for_each([&](std::string_view, Eigen::MatrixXd& t) { gs.push_back(&t); });
  for (std::size_t k = 0; k < qs.size(); ++k) {
    for (Eigen::Index i = 0; i < qs[k]->size(); ++i) {
      const double orig = qs[k]->data()[i];
      qs[k]->data()[i] = orig + eps;
      const double up = loss(q);
      qs[k]->data()[i] = orig - eps;
      const double down = loss(q);
      qs[k]->data()[i] = orig;
      gs[k]->data()[i] = (up - down) / (2 * eps);
    }
  }
  return g;
}

}  // namespace walkjoin::fixture
