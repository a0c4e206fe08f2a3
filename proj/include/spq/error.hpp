#pragma once

#include <stdexcept>
#include <string>

namespace spq {

enum class Errc {
  ok = 0,
  not_baxter,
  not_separable,
  not_alternating,
  not_found,
  out_of_range,
  undefined,
  integrity,
  parse,
  format,
  micro_too_large,
  cap_exceeded,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace spq
