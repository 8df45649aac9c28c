#pragma once

#include <stdexcept>
#include <string>

namespace gridcorr {

enum class Errc {
  invalid_argument,  // precondition on an argument violated
  io,                // file could not be read or written
  parse,             // malformed input text
  data,              // input parsed but fails validation (gaps, duplicates, ...)
  undefined,         // quantity undefined for this input (zero variance, no events)
  capacity,          // refused because of configured size caps
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(Errc::invalid_argument, what);
}

}  // namespace gridcorr
