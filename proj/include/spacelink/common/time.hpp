// Copyright 2026 The spacelink Authors
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

#include <chrono>

namespace spacelink {

/// Virtual time: microseconds since the start of a simulation run. Durations
/// use the same type.
using Micros = std::chrono::microseconds;

inline constexpr Micros kNever = Micros::max();

inline constexpr Micros operator""_us(unsigned long long v) { return Micros(static_cast<Micros::rep>(v)); }
inline constexpr Micros operator""_ms(unsigned long long v) { return Micros(static_cast<Micros::rep>(v) * 1000); }
inline constexpr Micros operator""_s(unsigned long long v) { return Micros(static_cast<Micros::rep>(v) * 1'000'000); }

}  // namespace spacelink
