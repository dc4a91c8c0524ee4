// Copyright 2026 The decompint Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECOMPINT_PROBLEM_HPP
#define DECOMPINT_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "decompint/classical.hpp"
#include "decompint/system.hpp"
#include "decompint/types.hpp"
#include "decompint/weighting.hpp"

namespace decompint {

/// In-memory form of a problem file: exactly one weighting source, an
/// optional decomposition system, the query vectors, and the requested mode
/// (`sub`, `super`, `oracle`, `maxpseudo`, `classical:<name>`, or
/// `check:<suite>`).  Level-dependent capacities arrive as `capacity_slices`
/// and count as the weighting source of the file.
struct ProblemFile {
  std::string version = "decompint/1";
  int n = 0;
  std::string mode = "sub";
  std::optional<Weighting> weighting;
  std::optional<LevelDependentCapacity> capacity_slices;
  std::optional<DecompSystem> system;
  std::vector<NNVector> queries;
};

/// True for the mode strings a problem file (or --mode override) may carry.
bool known_mode(const std::string& mode);

/// Parses problem text (a JSON tree).  Throws std::runtime_error naming the
/// offending field on malformed input; enforces the one-weighting-source
/// rule, vector arity, nonnegativity, and known mode strings.
ProblemFile parse_problem(const std::string& text);

/// Canonical serialization: fixed key order, two-space indent, subsets as
/// sorted 1-based index lists, every number a decimal literal.  Feeding the
/// output back through parse_problem reproduces the same bytes.
std::string serialize_problem(const ProblemFile& p);

/// Reads and parses a file from disk ("-" reads standard input).
ProblemFile load_problem(const std::string& path);

/// Bundles the file's system and weighting into a Base; throws
/// std::runtime_error when either is absent.
Base problem_base(const ProblemFile& p);

/// The capacity behind the weighting source, for the classical reductions.
/// Throws std::runtime_error when the source is not capacity-shaped.
const Capacity& problem_capacity(const ProblemFile& p);

}  // namespace decompint

#endif  // DECOMPINT_PROBLEM_HPP
