// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace crudwalk {

/// Base class for every error the library reports to callers.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid flags, inconsistent documents.
class InputError : public Error {
  public:
    using Error::Error;
};

/// A broken internal precondition (e.g. a malformed call sequence reached the tester).
class InternalError : public Error {
  public:
    using Error::Error;
};

}  // namespace crudwalk
