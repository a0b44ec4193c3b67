// Copyright 2026 The ptsim Authors
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

#include "ptsim/app/presets.hpp"

#include <algorithm>

namespace ptsim::app {

namespace generated {
std::span<const Preset> preset_table() noexcept;
}

std::span<const Preset> presets() noexcept { return generated::preset_table(); }

std::optional<std::string_view> find_preset(std::string_view name) noexcept {
  const auto table = presets();
  const auto it =
      std::find_if(table.begin(), table.end(), [&](const Preset& p) { return p.name == name; });
  if (it == table.end()) return std::nullopt;
  return it->text;
}

}  // namespace ptsim::app
