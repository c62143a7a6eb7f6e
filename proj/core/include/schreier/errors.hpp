#pragma once

#include <stdexcept>
#include <string>

namespace schreier {

// Malformed text input (ordinal grammar, vector grammar, file formats).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured cap (member count, interval count, probe window) was exceeded.
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation was called outside its stated domain.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank or witness was requested for a set that is not a member of the family.
struct NotAMemberError : PreconditionError {
  using PreconditionError::PreconditionError;
};

}  // namespace schreier
