#ifndef BERNFILTER_DENSE_HPP
#define BERNFILTER_DENSE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace bernfilter {

// Row-major so that a node's feature row is contiguous and buffers crossing
// the C API can be mapped without copying.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;

// One byte per node; nonzero means selected.
using Mask = std::vector<std::uint8_t>;

}  // namespace bernfilter

#endif
