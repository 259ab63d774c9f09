#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tubecalc {

// Ambient dimension is bounded so small vectors never touch the heap.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

enum class ErrorKind {
  NoConvergence,
  RankDeficient,
  OnManifold,
  OrderTooHigh,
  CodimUnsupported,
  IllConditioned,
  ShapeUnsupported,
  DimUnsupported,
  NotConverged,
  ExpansionUnavailable,
  SupportExceedsTube,
  SchemaError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Vec unit_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

}  // namespace tubecalc
