#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace localitylab {

/// Base of every error raised by the library. `code()` is a stable,
/// machine-parsable identifier that the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  std::string_view code() const noexcept { return code_; }

 private:
  std::string_view code_;
};

#define LOCALITYLAB_DEFINE_ERROR(Name, Code)                        \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  }

LOCALITYLAB_DEFINE_ERROR(SizeError, "size");
LOCALITYLAB_DEFINE_ERROR(InvariantError, "invariant");
LOCALITYLAB_DEFINE_ERROR(ArityError, "arity");
LOCALITYLAB_DEFINE_ERROR(DomainError, "domain");
LOCALITYLAB_DEFINE_ERROR(CapabilityError, "capability");
LOCALITYLAB_DEFINE_ERROR(ProtocolViolation, "protocol-violation");
LOCALITYLAB_DEFINE_ERROR(UnsupportedError, "unsupported");
LOCALITYLAB_DEFINE_ERROR(UsageError, "usage");

#undef LOCALITYLAB_DEFINE_ERROR

}  // namespace localitylab
