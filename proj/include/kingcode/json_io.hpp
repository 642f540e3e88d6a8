// Copyright 2026 The kingcode Authors
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

/**
 * @file
 * JSON encodings of every library object.
 *
 *   matrix         {"rows":R,"cols":C,"data":[[re,im],...]}   row-major
 *   vector         matrix with cols = 1 plus "factor_dims":[d1,...]
 *   family         {"J":j,"ops":[matrix,...]}
 *   error model    {"kraus":[matrix,...]}
 *   index sets     {"sets":{"J,i":[k,...]},"coeffs":{"J,i,k":[re,im]}}
 *   solution pair  {"eta":[...],"basis_a":[vec,...],"basis_k":[vec,...],"pvm":[vec,...]}
 *   code           {"ambient_dims":[...],"basis":[vec,...]}
 *
 * Decoders throw InvalidInput on malformed documents.
 */
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kingcode/code_builder.hpp"
#include "kingcode/protocol.hpp"
#include "kingcode/solution_engine.hpp"

namespace kingcode::io {

using nlohmann::json;

json to_json(const ComplexMatrix &m);
json to_json(const StateVector &v);
json to_json(const MeasurementFamily &f);
json to_json(const ErrorModel &e);
json to_json(const IndexSets &s);
json to_json(const SolutionPair &s);
json to_json(const QuantumCode &c);
json to_json(const GhzTuple &t);
json to_json(const GramReport &r);
json to_json(const KLReport &r);
json to_json(const SolutionVerdict &v);
json to_json(const ExhaustiveReport &r);
json to_json(const MonteCarloReport &r);

ComplexMatrix matrix_from_json(const json &j);
StateVector vector_from_json(const json &j);
MeasurementFamily family_from_json(const json &j);
/// Accepts either a single family object or an array of families.
std::vector<MeasurementFamily> families_from_json(const json &j);
ErrorModel error_model_from_json(const json &j);
IndexSets index_sets_from_json(const json &j);
SolutionPair solution_from_json(const json &j, const Tolerance &tol = {});
QuantumCode code_from_json(const json &j, const Tolerance &tol = {});

/// Reads and parses a file; InvalidInput if it is missing or not JSON.
json read_json_file(const std::string &path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::string &path, const json &j);

} // namespace kingcode::io
