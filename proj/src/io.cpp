#include "solh/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "solh/errors.hpp"

namespace solh {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  // RFC 6901 escaping of ~ and /.
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return ptr + "/" + escaped;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const Json& require_object(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw ParseError(ptr, "expected an object");
  return j;
}

const Json& member(const Json& j, const std::string& ptr, const std::string& key) {
  require_object(j, ptr);
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(ptr, "missing member \"" + key + "\"");
  return *it;
}

double number_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw ParseError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(ptr, "number must be finite");
  return v;
}

}  // namespace

Json to_json(const BigInt& v) {
  if (fits_int64(v)) return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

BigInt bigint_from_json(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
      throw ParseError(ptr, "expected a decimal integer string");
    }
    return BigInt(s);
  }
  throw ParseError(ptr, "expected an integer");
}

Json to_json(const Rational& q) {
  Json j;
  j["num"] = to_json(q.num());
  j["den"] = to_json(q.den());
  return j;
}

Rational rational_from_json(const Json& j, const std::string& ptr) {
  const BigInt num = bigint_from_json(member(j, ptr, "num"), child(ptr, "num"));
  const BigInt den = bigint_from_json(member(j, ptr, "den"), child(ptr, "den"));
  if (den <= 0) throw ParseError(child(ptr, "den"), "denominator must be positive");
  if (gcd(num, den) != 1) throw ParseError(ptr, "rational " + num.str() + "/" + den.str() + " is not reduced");
  return Rational(num, den);
}

Json to_json(const RationalAngle& rho) {
  Json j;
  j["a"] = to_json(rho.a());
  j["b"] = to_json(rho.b());
  return j;
}

RationalAngle angle_from_json(const Json& j, const std::string& ptr) {
  const BigInt a = bigint_from_json(member(j, ptr, "a"), child(ptr, "a"));
  const BigInt b = bigint_from_json(member(j, ptr, "b"), child(ptr, "b"));
  if (b <= 0) throw ParseError(child(ptr, "b"), "modulus must be positive");
  if (a < 0 || a >= b) throw ParseError(child(ptr, "a"), "expected 0 <= a < b");
  return RationalAngle(a, b);
}

Json to_json(const ProfiniteInt& t) {
  Json j;
  if (t.embedded_value()) {
    j["int"] = to_json(*t.embedded_value());
    return j;
  }
  Json moduli = Json::array();
  Json residues = Json::array();
  for (const auto& m : t.tower().levels()) moduli.push_back(to_json(m));
  for (const auto& r : t.residues()) residues.push_back(to_json(r));
  j["moduli"] = std::move(moduli);
  j["residues"] = std::move(residues);
  return j;
}

ProfiniteInt profinite_from_json(const Json& j, const std::string& ptr, const ModulusTower& tower) {
  require_object(j, ptr);
  if (j.contains("int")) return embed_int(bigint_from_json(j["int"], child(ptr, "int")), tower);
  const Json& moduli = member(j, ptr, "moduli");
  const Json& residues = member(j, ptr, "residues");
  if (!moduli.is_array()) throw ParseError(child(ptr, "moduli"), "expected an array");
  if (!residues.is_array()) throw ParseError(child(ptr, "residues"), "expected an array");
  if (moduli.size() != residues.size()) throw ParseError(child(ptr, "residues"), "length differs from moduli");
  std::vector<BigInt> ms;
  std::vector<BigInt> rs;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    ms.push_back(bigint_from_json(moduli[i], child(child(ptr, "moduli"), i)));
    rs.push_back(bigint_from_json(residues[i], child(child(ptr, "residues"), i)));
  }
  try {
    return ProfiniteInt(ModulusTower(std::move(ms)), std::move(rs));
  } catch (const DomainError& e) {
    throw ParseError(ptr, e.what());
  }
}

Json to_json(const ProductCharacter& c) {
  Json j;
  j["lambda"] = to_json(c.lambda);
  j["rho"] = to_json(c.rho);
  return j;
}

ProductCharacter product_character_from_json(const Json& j, const std::string& ptr) {
  return ProductCharacter{rational_from_json(member(j, ptr, "lambda"), child(ptr, "lambda")),
                          angle_from_json(member(j, ptr, "rho"), child(ptr, "rho"))};
}

Json to_json(const SolenoidCharacter& c) {
  Json j;
  j["q"] = to_json(c.q);
  return j;
}

SolenoidCharacter solenoid_character_from_json(const Json& j, const std::string& ptr) {
  return SolenoidCharacter{rational_from_json(member(j, ptr, "q"), child(ptr, "q"))};
}

Json to_json(const Complex& z) {
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Complex complex_from_json(const Json& j, const std::string& ptr) {
  return {number_from_json(member(j, ptr, "re"), child(ptr, "re")),
          number_from_json(member(j, ptr, "im"), child(ptr, "im"))};
}

LimitPeriodicSeries FunctionSpec::as_series() const {
  if (!majorant) throw DomainError("series spec has no majorant");
  std::vector<SolenoidTerm> terms;
  terms.reserve(listed.size());
  for (const auto& t : listed) terms.push_back({t.coeff, as_solenoid(t.chr)});
  return LimitPeriodicSeries::from_terms(std::move(terms), *majorant, majorant_tail);
}

FunctionSpec function_spec_from_json(const Json& j) {
  const std::string root;
  require_object(j, root);
  FunctionSpec spec;
  const Json& terms = member(j, root, "terms");
  const std::string tptr = child(root, "terms");
  if (!terms.is_array()) throw ParseError(tptr, "expected an array");

  std::vector<ProductTerm> parsed;
  std::vector<ProductCharacter> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string ptr = child(tptr, i);
    const Json& t = require_object(terms[i], ptr);
    const Complex coeff = complex_from_json(member(t, ptr, "coeff"), child(ptr, "coeff"));
    ProductCharacter chr;
    if (t.contains("q")) {
      if (t.contains("lambda") || t.contains("rho")) throw ParseError(ptr, "give either \"q\" or \"lambda\"/\"rho\"");
      chr = as_product(SolenoidCharacter{rational_from_json(t["q"], child(ptr, "q"))});
    } else if (t.contains("lambda")) {
      chr = ProductCharacter{rational_from_json(t["lambda"], child(ptr, "lambda")),
                             angle_from_json(member(t, ptr, "rho"), child(ptr, "rho"))};
    } else {
      throw ParseError(ptr, "term needs \"q\" or \"lambda\"/\"rho\"");
    }
    for (const auto& s : seen) {
      if (s == chr) throw ParseError(ptr, "duplicate character");
    }
    seen.push_back(chr);
    parsed.push_back({coeff, chr});
  }

  if (j.contains("series")) {
    if (!j["series"].is_boolean()) throw ParseError(child(root, "series"), "expected a boolean");
    spec.series = j["series"].get<bool>();
  }
  if (j.contains("majorant")) {
    const Json& m = j["majorant"];
    const std::string mptr = child(root, "majorant");
    if (!m.is_array()) throw ParseError(mptr, "expected an array");
    if (m.size() != terms.size()) throw ParseError(mptr, "needs one bound per term");
    std::vector<double> bounds;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double b = number_from_json(m[i], child(mptr, i));
      if (b < 0.0) throw ParseError(child(mptr, i), "bound must be >= 0");
      if (std::abs(parsed[i].coeff) > b * (1.0 + 1e-12)) {
        throw ParseError(child(mptr, i), "bound is below the coefficient magnitude of term " + std::to_string(i));
      }
      bounds.push_back(b);
    }
    spec.majorant = std::move(bounds);
  }
  if (j.contains("majorant_tail")) {
    const std::string ptr = child(root, "majorant_tail");
    spec.majorant_tail = number_from_json(j["majorant_tail"], ptr);
    if (spec.majorant_tail < 0.0) throw ParseError(ptr, "tail bound must be >= 0");
  }
  spec.listed = parsed;
  spec.poly = ProductPoly(std::move(parsed));
  return spec;
}

Json function_spec_to_json(const SolenoidPoly& phi) {
  Json terms = Json::array();
  for (const auto& t : phi.terms()) {
    Json term;
    term["coeff"] = to_json(t.coeff);
    term["q"] = to_json(t.chr.q);
    terms.push_back(std::move(term));
  }
  Json j;
  j["terms"] = std::move(terms);
  return j;
}

Json to_json(const Spectrum& spec) {
  Json entries = Json::array();
  for (const auto& e : spec.entries) {
    Json entry;
    entry["q"] = to_json(e.chr.q);
    entry["coeff"] = to_json(e.coeff);
    entries.push_back(std::move(entry));
  }
  Json j;
  j["entries"] = std::move(entries);
  j["residual_power"] = spec.residual_power;
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  std::string root;
  const Json* doc = &require_object(j, root);
  if (!j.contains("entries") && j.contains("spectrum")) {
    root = "/spectrum";
    doc = &require_object(j["spectrum"], root);
  }
  const Json& entries = member(*doc, root, "entries");
  const std::string eptr = child(root, "entries");
  if (!entries.is_array()) throw ParseError(eptr, "expected an array");
  std::vector<SpectrumEntry> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ptr = child(eptr, i);
    const Json& e = require_object(entries[i], ptr);
    out.push_back({SolenoidCharacter{rational_from_json(member(e, ptr, "q"), child(ptr, "q"))},
                   complex_from_json(member(e, ptr, "coeff"), child(ptr, "coeff"))});
  }
  double residual = 0.0;
  if (doc->contains("residual_power")) {
    residual = number_from_json((*doc)["residual_power"], child(root, "residual_power"));
  }
  try {
    return Spectrum::make(std::move(out), residual);
  } catch (const DomainError& e) {
    throw ParseError(eptr, e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

}  // namespace solh
