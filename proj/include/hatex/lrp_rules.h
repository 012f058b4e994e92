// Copyright 2026 The Hatex Authors.
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

#ifndef HATEX_LRP_RULES_H_
#define HATEX_LRP_RULES_H_

#include <Eigen/Dense>

namespace hatex {

// Relevance redistribution settings for weighted-sum layers.
struct LrpConfig {
  double epsilon = 0.001;  // stabiliser, >= 0
  double delta = 1.0;      // bias factor: 1 conserves relevance, 0 absorbs it
};

// sign(z) with sign(0) = +1.
template <typename Scalar>
constexpr Scalar StabilizerSign(Scalar z) {
  return z >= Scalar(0) ? Scalar(1) : Scalar(-1);
}

// Epsilon rule for one weighted-sum layer z_j = sum_i z_i w_ij + b_j.
//
//   R_{i<-j} = (z_i w_ij + (eps sign(z_j) + delta b_j) / N)
//              / (z_j + eps sign(z_j)) * R_j,     R_i = sum_j R_{i<-j}
//
// `lower` is the 1 x N row of inputs, `weights` N x M, `bias` and `upper`
// (the recorded z_j) 1 x M, `relevance` 1 x M. `fan_in` is N unless some
// inputs are structurally absent (padding), in which case the caller passes
// the number of connected inputs and zeroes the absent entries itself.
// A zero denominator (z_j = 0 with eps = 0) forwards nothing from j.
template <typename DL, typename DW, typename DB, typename DZ, typename DR>
Eigen::Matrix<typename DL::Scalar, 1, Eigen::Dynamic> LrpLinear(
    const Eigen::MatrixBase<DL>& lower, const Eigen::MatrixBase<DW>& weights,
    const Eigen::MatrixBase<DB>& bias, const Eigen::MatrixBase<DZ>& upper,
    const Eigen::MatrixBase<DR>& relevance, const LrpConfig& cfg,
    typename DL::Scalar fan_in) {
  using Scalar = typename DL::Scalar;
  const Eigen::Index m = upper.size();
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> ratio(m);
  Scalar shared = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Scalar z = upper(j);
    const Scalar stab = Scalar(cfg.epsilon) * StabilizerSign(z);
    const Scalar denom = z + stab;
    ratio(j) = denom == Scalar(0) ? Scalar(0) : relevance(j) / denom;
    shared += (stab + Scalar(cfg.delta) * bias(j)) * ratio(j);
  }
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> out =
      lower.cwiseProduct((weights * ratio.transpose()).transpose());
  out.array() += shared / fan_in;
  return out;
}

}  // namespace hatex

#endif  // HATEX_LRP_RULES_H_
