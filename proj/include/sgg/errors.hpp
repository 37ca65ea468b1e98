#pragma once

#include <stdexcept>
#include <string>

namespace sgg {

// Domain failures map to CLI exit code 2; everything else is internal.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSolution : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotAMember : public DomainError {
 public:
  using DomainError::DomainError;
};

class Unsupported : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidArgument : public DomainError {
 public:
  using DomainError::DomainError;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sgg
