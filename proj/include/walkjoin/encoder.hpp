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

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <Eigen/Dense>

#include "walkjoin/joiner.hpp"
#include "walkjoin/rng.hpp"

namespace walkjoin {

class SubgraphStore;

struct ModelConfig {
  std::uint32_t arity = 2;
  std::uint32_t num_walks = 0;  // M the model was trained with
  std::uint32_t steps = 0;      // m
  std::uint32_t hidden = 64;
  std::uint32_t feature_dim = 0;
  double dropout = 0.1;

  std::size_t walk_len() const { return steps + 1u; }
  std::size_t input_dim() const { return arity * walk_len() + feature_dim; }
  bool operator==(const ModelConfig&) const = default;
};

/**
 * Step encoder f (Linear -> ReLU -> dropout -> Linear) followed by a
 * two-layer classifier (Linear -> ReLU -> Linear) on the pooled encoding.
 * Biases are [n, 1] matrices so every parameter is one Eigen::MatrixXd.
 */
struct ModelParams {
  ModelConfig config;
  Eigen::MatrixXd W1, b1;  // [h, d_in], [h, 1]
  Eigen::MatrixXd W2, b2;  // [h, h],    [h, 1]
  Eigen::MatrixXd U1, c1;  // [h, h],    [h, 1]
  Eigen::MatrixXd U2, c2;  // [1, h],    [1, 1]
  /// Bumped by every optimizer step; a forward cache is only valid for the version it saw.
  std::uint64_t version = 0;

  static ModelParams zeros(const ModelConfig& config);
  /// Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)); zero biases.
  static ModelParams glorot(const ModelConfig& config, std::uint64_t seed);

  template <class F>
  void for_each(F&& f) {
    f("W1", W1); f("b1", b1); f("W2", W2); f("b2", b2);
    f("U1", U1); f("c1", c1); f("U2", U2); f("c2", c2);
  }
  template <class F>
  void for_each(F&& f) const {
    f("W1", W1); f("b1", b1); f("W2", W2); f("b2", b2);
    f("U1", U1); f("c1", c1); f("U2", U2); f("c2", c2);
  }

  std::size_t parameter_count() const;
  void set_zero();
  ModelParams& operator+=(const ModelParams& other);
  ModelParams& operator*=(double s);
  bool same_values(const ModelParams& other) const;
};

using Gradients = ModelParams;

struct ForwardCache {
  std::uint64_t version = 0;
  bool valid = false;
  DenseTensor input;      // [R, d_in]
  Eigen::MatrixXd pre;    // [R, h] first-layer pre-activations, column-major per row block
  Eigen::MatrixXd mask;   // [R, h] dropout scale factors, empty when dropout is off
  Eigen::VectorXd pooled; // mean of (masked) hidden activations
  Eigen::VectorXd h_q;    // subgraph representation
  Eigen::VectorXd z1;     // classifier hidden pre-activation
  double logit = 0.0;
};

struct ForwardResult {
  double logit = 0.0;
  ForwardCache cache;
};

/**
 * Scores one joined query. Rows of `x` are the walk steps of |Q|*M walks,
 * m+1 consecutive rows per walk. With `training` set and a nonzero dropout
 * rate, an inverted dropout mask is drawn from `dropout_rng`.
 */
ForwardResult forward(const ModelParams& params, const DenseTensor& x, bool training = false,
                      Rng* dropout_rng = nullptr);

/// Forward pass with an explicit dropout mask (entries 0 or 1/(1-p)); empty mask = no dropout.
ForwardResult forward_with_mask(const ModelParams& params, const DenseTensor& x,
                                const Eigen::MatrixXd& mask);

/// Gradients of bce_loss(logit, label) for the cached forward pass.
Gradients backward(const ModelParams& params, const ForwardCache& cache, int label);

double sigmoid(double z);
/// Binary cross entropy on a logit, in the log(1 + exp(-|z|)) form.
double bce_loss(double logit, int label);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  ModelParams first;
  ModelParams second;

  static AdamState for_params(const ModelParams& params, double lr);
};

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state);

/// Dense encoder input for a joined query: RPE counts scaled by `rpe_scale`,
/// followed by the walk node's features when `features` is given.
DenseTensor featurize(const RpeTable& table, const JoinedQuery& jq, double rpe_scale,
                      const NodeFeatures* features = nullptr);

struct Checkpoint {
  ModelParams params;
  AdamState optimizer;
};

inline constexpr char kCheckpointMagic[4] = {'S', 'U', 'R', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// Throws InvalidArgument when the model was trained on a different walk shape.
void check_compatible(const ModelConfig& config, const SubgraphStore& store);

}  // namespace walkjoin
