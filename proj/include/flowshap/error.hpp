/*
 * Copyright 2026 The flowshap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace flowshap {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kParse,
  kDimensionMismatch,
  kSingleClass,
  kNumeric,
  kIo,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// All failures raised by the library. `stage` is filled in by the pipeline
// when an error crosses a stage boundary; it is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

  // True for errors caused by the caller's input or configuration, as
  // opposed to failures inside a computation.
  bool is_input_error() const noexcept;

 private:
  ErrorCode code_;
  std::string stage_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

// Runs `fn`, tagging any escaping Error with `stage` (unless already tagged).
template <typename Fn>
decltype(auto) in_stage(std::string_view stage, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(std::string(stage));
    throw;
  } catch (const std::exception& e) {
    Error wrapped(ErrorCode::kInternal, e.what());
    wrapped.set_stage(std::string(stage));
    throw wrapped;
  }
}

}  // namespace flowshap
