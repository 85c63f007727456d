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

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace flowshap {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Parse failures surface as ErrorCode::kParse, missing files as kNotFound.
nlohmann::json read_json(const std::filesystem::path& path);
// Two-space indented, trailing newline; byte-stable for equal documents.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Lowercase hex SHA-256 of `content`.
std::string sha256_hex(std::string_view content);

}  // namespace flowshap
