#include "spl/error.hpp"

namespace spl::detail {

void throw_shape_mismatch(const char* where, const std::string& lhs, const std::string& rhs) {
  throw ShapeError(std::string(where) + ": shape mismatch " + lhs + " vs " + rhs);
}

}  // namespace spl::detail
