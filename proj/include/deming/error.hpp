#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace deming {

enum class ErrorKind {
  usage,
  io,
  parse,
  validation,
  insufficient_data,
  degenerate_fit,
  convergence,
  singular_weight,
  domain,
  singular_likelihood,
};

const char* to_string(ErrorKind kind) noexcept;

// Process exit status for each error kind; 0 is success and 1 is reserved
// for unexpected failures.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the iterative estimators. Carries the last iterate and, for the
// likelihood solver, the per-iteration log-likelihood trace.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double beta0, double beta1,
                   double sigma2, std::vector<double> trace = {})
      : Error(ErrorKind::convergence, message),
        beta0(beta0),
        beta1(beta1),
        sigma2(sigma2),
        trace(std::move(trace)) {}

  double beta0;
  double beta1;
  double sigma2;
  std::vector<double> trace;
};

}  // namespace deming
