#ifndef SAABCODEC_ERROR_H_
#define SAABCODEC_ERROR_H_

#include <stdexcept>
#include <string>

namespace saabcodec {

// Failure classes. The CLI maps these onto distinct exit codes.
enum class ErrorKind {
  kInvalidInput,      // malformed arguments, non-finite values, bad shapes
  kInsufficientData,  // too few samples to learn or fit
  kDegenerate,        // data present but statistically degenerate
  kFormat,            // malformed or truncated files and bitstreams
  kMismatch,          // incompatible operands (digest, dimensions, QP sets)
  kIo,                // filesystem failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace saabcodec

#endif  // SAABCODEC_ERROR_H_
