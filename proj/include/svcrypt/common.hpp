/*
Copyright 2026 the svcrypt authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svcrypt {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Malformed or inconsistent input data: bad container, bad bitstream, bad media file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Authentication failure or unusable key material.
class KeyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters supplied by a caller or the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(ByteView data);

/// Accepts an even number of hex digits, upper or lower case.
Bytes from_hex(std::string_view hex);

} // namespace svcrypt
