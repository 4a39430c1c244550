// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_ERRORS_HPP
#define GRAPHTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphtv {

/// Bad parameters or malformed input. Maps to CLI exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense routine asked to handle a problem above its size cap.
class SizeLimitError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Method not available for the given graph family.
class UnsupportedMethod : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Random graph generator gave up (e.g. no connected draw within the retry limit).
class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver or eigensolver failed to produce a usable answer. Maps to CLI exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphtv

#endif  // GRAPHTV_ERRORS_HPP
