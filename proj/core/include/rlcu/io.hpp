// Copyright 2026 The rlcu Authors
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

#include <string>
#include <string_view>
#include <vector>

#include "rlcu/circuits.hpp"
#include "rlcu/lcu.hpp"
#include "rlcu/shadows.hpp"

namespace rlcu {

/// {"mu", "kind", "truncation_error", "terms": [{"prob", "phase": [re, im],
/// "word"}]}. Channel formulas add "paired" to each term. The phase includes
/// the Pauli word's power of i.
std::string formula_to_json(const LcuFormula& f);

/// Filter ensemble description in the same envelope, with an empty term list.
std::string filter_to_json(const GaussianFilterEnsemble& g, double gap);

/// {"rows", "cols", "data": [[re, im], ...]} in row-major order.
std::string matrix_to_json(const Matrix& m);
/// Throws ParseError.
Matrix matrix_from_json(std::string_view text);

/// One JSON object per line, no trailing newline.
std::string shot_to_jsonl(const ShotRecord& s);
ShotRecord shot_from_jsonl(std::string_view line);
std::string snapshot_to_jsonl(const ShadowSnapshot& s);
ShadowSnapshot snapshot_from_jsonl(std::string_view line);

/// Reads a snapshot log, skipping blank lines. Throws Error if the file cannot
/// be read and ParseError (with the line number) on malformed lines.
std::vector<ShadowSnapshot> load_snapshots(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rlcu
