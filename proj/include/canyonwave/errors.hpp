// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The canyonwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <stdexcept>
#include <string>

namespace canyonwave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable category, e.g. "parse" or "validation".
    [[nodiscard]] virtual const char *kind() const noexcept { return "error"; }
};

/// Malformed scene / CSV input. The message carries the field or line context.
class ParseError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "parse"; }
};

/// A domain invariant was violated; the message names the offending entity.
class ValidationError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "validation"; }
};

class DimensionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "dimension"; }
};

/// Requested codebook exceeds the configured size cap.
class BudgetError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "budget"; }
};

class EmptyCodebookError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "empty-codebook"; }
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "singular"; }
};

class EmptySampleError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "empty-sample"; }
};

/// Inconsistent or incomplete run configuration (command-line usage).
class UsageError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "usage"; }
};

class GridMismatchError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char *kind() const noexcept override { return "grid-mismatch"; }
};

} // namespace canyonwave
