// Copyright 2026 The ludeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LUDEQ_ERRORS_H_
#define LUDEQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ludeq {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A game system violates one of its structural invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition (e.g. the outcome of a
// non-terminal state).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// No consequence rule resolves a legal decision tuple at some state.
class IncompleteSystemError : public Error {
 public:
  IncompleteSystemError(const std::string& what, std::string state,
                        std::string tuple)
      : Error(what), state_(std::move(state)), tuple_(std::move(tuple)) {}

  const std::string& state() const { return state_; }
  const std::string& tuple() const { return tuple_; }

 private:
  std::string state_;
  std::string tuple_;
};

// A tree construction or normalization exceeded its node budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// A serialized tree is malformed or violates a tree invariant.
class TreeFormatError : public Error {
 public:
  using Error::Error;
};

// A reduction site no longer matches the tree it was computed on.
class StaleSiteError : public Error {
 public:
  using Error::Error;
};

}  // namespace ludeq

#endif  // LUDEQ_ERRORS_H_
