// Copyright 2026 The dropscan Authors
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

#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <utility>

namespace dropscan {

using WarningHandler = std::function<void(const std::string &)>;

namespace detail {
inline WarningHandler &warning_handler() {
    static WarningHandler handler = [](const std::string &msg) {
        std::cerr << "dropscan: warning: " << msg << '\n';
    };
    return handler;
}
}  // namespace detail

/// Replaces the warning sink and returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler handler) {
    return std::exchange(detail::warning_handler(), std::move(handler));
}

inline void log_warning(const std::string &msg) {
    if (auto &h = detail::warning_handler()) {
        h(msg);
    }
}

}  // namespace dropscan
