#pragma once

#include <stdexcept>
#include <string>

namespace twopt {

/// Failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
  validation = 1,    ///< bad parameters or malformed input
  verification = 2,  ///< an assertion or certificate failed
  io = 3,            ///< file system / serialization failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}

[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::io, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail_validation(what);
}

}  // namespace twopt
