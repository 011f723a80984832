//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace turf {

/// Domain error categories. The CLI prints name() on stderr and exits with 1.
enum class ErrorKind {
  UnknownModel,
  ShapeMismatch,
  InvalidReplacement,
  UnsupportedConfig,
  InefficientConfig,
  PortMismatch,
  InvalidTiling,
  SimDeadlock,
  CalibrationError,
  Infeasible,
  NoSolution,
  FormatError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace turf
