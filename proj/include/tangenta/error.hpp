#ifndef TANGENTA_ERROR_HPP
#define TANGENTA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tangenta {

// Error categories, mapped onto CLI exit codes (2 = usage, 3 = domain or
// precondition failure, 1 = theorem verdict fails).
enum class ErrKind {
  syntax,        // malformed expression text
  unknown_name,  // unknown function or unbound variable
  domain,        // evaluation outside a node's real domain, out-of-domain x, ...
  precondition,  // operation preconditions (monotonicity, feasibility, ...)
  accuracy,      // step-halving discrepancy, cell cap exceeded
};

class Error : public std::runtime_error {
public:
  Error(ErrKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrKind kind() const { return kind_; }

private:
  ErrKind kind_;
};

// Parse failure with the byte offset of the offending character.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, const std::string& msg)
      : Error(ErrKind::syntax, msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

inline Error domain_error(const std::string& msg) { return Error(ErrKind::domain, msg); }
inline Error precondition_error(const std::string& msg) { return Error(ErrKind::precondition, msg); }

}  // namespace tangenta

#endif
