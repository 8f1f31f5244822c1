// Copyright 2026 The qcontract Authors
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

#include <string>
#include <vector>

#include <json.hpp>

#include "qcontract/algebra_contraction.hpp"
#include "qcontract/deformed_product.hpp"
#include "qcontract/lindblad.hpp"
#include "qcontract/models.hpp"

namespace qcontract {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Nested row-major [[[re, im], ...], ...].
Json operator_to_json(const Operator& a);
Operator operator_from_json(const Json& j);

/// {"dim", "hamiltonian", "jumps": [{"op", "rate"}]}.
Json spec_to_json(const LindbladSpec& spec);
/// Throws SpecError on malformed or invalid input.
LindbladSpec spec_from_json(const Json& j);

/// [{"label", "op"}] plus an optional {"interior_dim"} wrapper.
Json basis_to_json(const OperatorBasis& basis);
OperatorBasis basis_from_json(const Json& j);

/// Spec fields plus "name" and "canonical_basis".
Json model_to_json(const ModelInstance& model);

/// {"n", "time" (number or "inf"), "C": [k][i][j] -> [re, im]}.
Json tensor_to_json(const StructureTensor& c);
StructureTensor tensor_from_json(const Json& j);

/// Rows "time,k,i,j,re,im" after a header line; zero entries included.
std::string tensors_to_csv(const std::vector<StructureTensor>& series);
std::vector<StructureTensor> tensors_from_csv(const std::string& text);

Json signature_to_json(const KillingSignature& s);
Json classification_to_json(const LieClassification& c);

}  // namespace qcontract
