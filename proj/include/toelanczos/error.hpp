#pragma once

#include <stdexcept>
#include <string>

namespace toel {

enum class ErrorCode {
  input = 1,
  shape = 2,
  breakdown_lucky = 3,
  breakdown_serious = 4,
  resolvent_singular = 5,
  io = 6,
  stiffness = 7,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the continued fraction hits a singular level; depth counts from the innermost level 1..n.
class ResolventSingular : public Error {
 public:
  ResolventSingular(int depth, double rcond)
      : Error(ErrorCode::resolvent_singular,
              "resolvent singular at depth " + std::to_string(depth) + " (rcond " + std::to_string(rcond) + ")"),
        depth_(depth),
        rcond_(rcond) {}
  int depth() const { return depth_; }
  double rcond() const { return rcond_; }

 private:
  int depth_;
  double rcond_;
};

[[noreturn]] inline void shape_error(const std::string& what) { throw Error(ErrorCode::shape, what); }

}  // namespace toel
