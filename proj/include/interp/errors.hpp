// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace interp {

// Base type for everything this library throws. The CLI maps ValidationError
// to exit code 2 and any other Error (or std::exception) to exit code 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : Error { using Error::Error; };
struct OutOfGrid : Error { using Error::Error; };
struct AtNode : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct BranchesOverlap : Error { using Error::Error; };
struct LobesNotSeparated : Error { using Error::Error; };
struct TooFewJumps : Error { using Error::Error; };
struct UnsupportedState : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct IncompatibleRuns : Error { using Error::Error; };
struct UnstableConfig : Error { using Error::Error; };

// Config rejection. `path` is the JSON pointer of the offending value,
// e.g. "/solver/dt".
struct ValidationError : Error {
  std::string path;
  ValidationError(std::string p, const std::string& what)
      : Error(p + ": " + what), path(std::move(p)) {}
};

}  // namespace interp
