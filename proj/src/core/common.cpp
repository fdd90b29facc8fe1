#include "core/common.hpp"

#include <charconv>

namespace sg {

const char* bc_name(Bc bc) {
  switch (bc) {
    case Bc::PMinusL0: return "pminus";
    case Bc::PPlusL1: return "pplus";
    case Bc::Rel: return "rel";
    case Bc::Abs: return "abs";
  }
  return "?";
}

Bc bc_from_name(const std::string& name) {
  if (name == "pminus" || name == "P_minus_L0") return Bc::PMinusL0;
  if (name == "pplus" || name == "P_plus_L1") return Bc::PPlusL1;
  if (name == "rel") return Bc::Rel;
  if (name == "abs") return Bc::Abs;
  fail(ErrorCode::InvalidArgument, "unknown boundary condition '" + name +
                                      "' (expected pminus|pplus|rel|abs)");
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace sg
