// Copyright 2026 The Metahunt Authors
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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "metahunt/error.hpp"
#include "metahunt/hdl/ast.hpp"

namespace metahunt::hdl {

// Returns the text of an `include`d file, or nullopt when it cannot be found.
using IncludeResolver = std::function<std::optional<std::string>(const std::string& name)>;

// Parses and validates a design. The top module is the last module that no
// other module instantiates. Throws SyntaxError or ValidationError.
Design parse(std::string_view source, const std::string& file = "<input>", const IncludeResolver& resolver = {});

// Parses `path`, resolving `include directives relative to its directory.
Design parse_file(const std::filesystem::path& path);

// Parses without running the validator (used by tests and the reducer).
Design parse_unchecked(std::string_view source, const std::string& file = "<input>", const IncludeResolver& resolver = {});

// "file:line:col: message"
std::string format_diagnostic(const std::string& file, const SyntaxError& e);

}  // namespace metahunt::hdl
