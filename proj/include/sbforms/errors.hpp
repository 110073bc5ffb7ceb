#pragma once

#include <stdexcept>
#include <string>

namespace sbf {

// Error taxonomy shared between the C++ core and the C ABI status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    Dimension       = 2,
    Domain          = 3,
    Pole            = 4,
    NotMember       = 5,
    Schema          = 6,
    Numeric         = 7,
    Io              = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace sbf
