#pragma once

#include <stdexcept>
#include <string>

namespace rmlab {

enum class ErrorCode {
    config = 1,       // bad experiment configuration (parse, unknown key, range)
    domain = 2,       // precondition violated on operation input
    numeric = 3,      // backend failure (eigensolver non-convergence, singularity)
    convergence = 4,  // iterative solver ran out of iterations
    unsupported = 5,  // input size/kind outside the supported envelope
    io = 6            // filesystem failure
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

inline Error config_error(const std::string& what) { return Error(ErrorCode::config, what); }
inline Error domain_error(const std::string& what) { return Error(ErrorCode::domain, what); }
inline Error numeric_error(const std::string& what) { return Error(ErrorCode::numeric, what); }
inline Error convergence_error(const std::string& what) { return Error(ErrorCode::convergence, what); }
inline Error unsupported_error(const std::string& what) { return Error(ErrorCode::unsupported, what); }
inline Error io_error(const std::string& what) { return Error(ErrorCode::io, what); }

}  // namespace rmlab
