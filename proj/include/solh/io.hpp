#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solh/fourier.hpp"
#include "solh/funcspace.hpp"

namespace solh {

// JSON encodings. Every reader takes the JSON pointer of the value it is
// handed and throws ParseError at the offending location. Integers that do
// not fit in 64 bits are written and accepted as decimal strings.

using Json = nlohmann::ordered_json;

Json to_json(const BigInt& v);
BigInt bigint_from_json(const Json& j, const std::string& ptr);

/// {"num": n, "den": d}, den > 0, reduced.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& ptr);

/// {"a": a, "b": b} with 0 <= a < b.
Json to_json(const RationalAngle& rho);
RationalAngle angle_from_json(const Json& j, const std::string& ptr);

/// {"moduli": [...], "residues": [...]} or {"int": n}, expanded against `tower`.
Json to_json(const ProfiniteInt& t);
ProfiniteInt profinite_from_json(const Json& j, const std::string& ptr, const ModulusTower& tower);

Json to_json(const ProductCharacter& c);
ProductCharacter product_character_from_json(const Json& j, const std::string& ptr);
Json to_json(const SolenoidCharacter& c);
SolenoidCharacter solenoid_character_from_json(const Json& j, const std::string& ptr);

Json to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& ptr);

/// Parsed function spec. Terms given by "q" are descending by construction;
/// terms given by "lambda" + "rho" are kept as written, so `poly` may fail to
/// be Z-invariant. A spec with "series": true is a listed limit-periodic
/// series whose "majorant" entries bound the listed coefficients and whose
/// optional "majorant_tail" bounds everything beyond them.
struct FunctionSpec {
  ProductPoly poly;
  /// Terms in the order written; series indices and majorants follow it.
  std::vector<ProductTerm> listed;
  bool series = false;
  std::optional<std::vector<double>> majorant;
  double majorant_tail = 0.0;

  /// DomainError if some term does not descend.
  SolenoidPoly solenoid() const { return poly.to_solenoid(); }
  /// Requires `series` and a majorant.
  LimitPeriodicSeries as_series() const;
};

FunctionSpec function_spec_from_json(const Json& j);
Json function_spec_to_json(const SolenoidPoly& phi);

Json to_json(const Spectrum& spec);
/// Accepts a spectrum document, or any report carrying one under "spectrum".
Spectrum spectrum_from_json(const Json& j);

/// Reads and parses a UTF-8 JSON file; syntax errors become ParseError at "".
Json read_json_file(const std::string& path);

}  // namespace solh
