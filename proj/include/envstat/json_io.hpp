#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "envstat/counting.hpp"
#include "envstat/microcanonical.hpp"
#include "envstat/qstate.hpp"
#include "envstat/rational.hpp"

namespace envstat {

using Json = nlohmann::json;

// Derived report values are rounded to 12 significant digits before
// serialization so repeated runs emit byte-identical output; state and
// operator payloads keep full precision so re-parsed files satisfy their
// invariants exactly.
double round12(double x);
Json report_number(double x);  // rounded, null when non-finite

Json to_json(const PureState& state);
PureState state_from_json(const Json& j);

Json to_json(const UnitaryOp& u);
UnitaryOp unitary_from_json(const Json& j);

Json to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const Json& j);

Json to_json(const Spectrum& spectrum);
Spectrum spectrum_from_json(const Json& j);

Json to_json(const BathSpec& bath);
// n_override replaces (or supplies) the unit count from the file.
BathSpec bath_from_json(const Json& j, std::optional<std::int64_t> n_override = std::nullopt);

// Accepts "p/q" strings and JSON integers; floats are rejected to keep
// energies exact.
Rational rational_from_json(const Json& j);

// Throws validation_error with the parser's position diagnostic.
Json load_json_file(const std::string& path);

}  // namespace envstat
