#include "mse/errors.hpp"

namespace mse {

InvalidOrder::InvalidOrder(const std::string& what) : Error("invalid order: " + what) {}

IndexOutOfRange::IndexOutOfRange(const std::string& what)
    : Error("index out of range: " + what) {}

DimensionMismatch::DimensionMismatch(const std::string& what)
    : Error("dimension mismatch: " + what) {}

InvalidArgument::InvalidArgument(const std::string& what)
    : Error("invalid argument: " + what) {}

InvalidDistortion::InvalidDistortion(const std::string& what)
    : Error("invalid distortion: " + what) {}

SingularJacobian::SingularJacobian(const std::string& what)
    : Error("singular jacobian: " + what) {}

SolverFailure::SolverFailure(const std::string& what, long step)
    : Error(step >= 0 ? "solver failure at step " + std::to_string(step) + ": " + what
                      : "solver failure: " + what),
      step_(step) {}

}  // namespace mse
