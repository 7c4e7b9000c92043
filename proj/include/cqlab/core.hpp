// Copyright 2026 The cqlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqlab {

// Base of every error raised by the library. The CLI maps the subclasses to
// exit codes (InputError -> 2, ResourceError -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operand violates a type invariant (non-Hermitian, not PSD, bad trace,
// unknown label, malformed file).
class InputError : public Error {
 public:
  using Error::Error;
};

// A matrix function was asked for outside its domain (log of a singular
// operator, power of an indefinite one).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured size bound (dimension, type-class count, memory) would be
// exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Numerical tolerances shared by all modules. Every routine that takes a
// tolerance accepts an overriding Tolerances value; the defaults are the
// values below.
struct Tolerances {
  // max |A - A^*| allowed for Hermitian input, relative to max(1, max|A|).
  double hermitian = 1e-10;
  // minimum eigenvalue allowed for PSD input.
  double psd = 1e-10;
  // |Tr rho - 1| allowed for density matrices.
  double trace = 1e-10;
  // eigenvalues below rank_cutoff * max|eigenvalue| count as zero when
  // forming supports, generalized inverses and matrix powers.
  double rank_cutoff = 1e-12;
  // eigenvalues within (-zero_band, zero_band] of a projection threshold
  // compare as equal to it.
  double zero_band = 1e-12;
};

// Size limits for tensor-power and combinatorial work.
struct Limits {
  std::size_t max_dim = 4096;
  std::size_t max_type_classes = 1000000;
  std::size_t max_sequences = 1u << 20;
};

}  // namespace cqlab
