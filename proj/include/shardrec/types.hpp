#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>

namespace shardrec {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// One observed user-item interaction (implicit feedback, 0-based indices).
struct Interaction {
  int user = 0;
  int item = 0;

  auto operator<=>(const Interaction&) const = default;
};

}  // namespace shardrec
