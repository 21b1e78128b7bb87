// Copyright 2026 The lrpsva Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace lrpsva {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files: weight container, vocabulary, lexicon, tables.
class FormatError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A NaN or infinity appeared where only finite values are allowed.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrpsva
