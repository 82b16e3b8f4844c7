#include "apdiff/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "apdiff/errors.hpp"
#include "apdiff/rational.hpp"

namespace apdiff {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("field '" + where + "': " + what);
}

void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail(where + "." + item.key(), "unknown key");
  }
}

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + "." + key, "missing");
  return obj.at(key);
}

double number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "golden4") return golden4();
    if (s == "tau" || s == "golden_mean") return golden_mean();
    try {
      return to_double(parse_rational(s));
    } catch (const std::exception&) {
      fail(where, "cannot read number from \"" + s + "\"");
    }
  }
  fail(where, "expected a number");
}

int positive_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000'000) {
    fail(where, "expected a positive integer");
  }
  return v.get<int>();
}

Vec vec(const Json& v, const std::string& where, int expected = -1) {
  Vec out;
  if (v.is_number() || v.is_string()) {
    out.push_back(number(v, where));
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  } else {
    fail(where, "expected a number or an array of numbers");
  }
  if (expected >= 0 && static_cast<int>(out.size()) != expected) {
    fail(where, "expected " + std::to_string(expected) + " entries, got " + std::to_string(out.size()));
  }
  return out;
}

Complex complex_value(const Json& v, const std::string& where) {
  if (v.is_array()) {
    if (v.size() != 2) fail(where, "complex value must be [re, im]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
  }
  return {number(v, where), 0.0};
}

// Frequency row; exact when every entry is an integer or a rational string.
std::pair<Vec, std::optional<std::vector<Rational>>> frequency(const Json& v, const std::string& where, int d) {
  std::vector<Json> entries;
  if (v.is_array()) {
    for (const Json& e : v) entries.push_back(e);
  } else {
    entries.push_back(v);
  }
  if (static_cast<int>(entries.size()) != d) fail(where, "frequency must have " + std::to_string(d) + " entries");
  Vec freq;
  std::vector<Rational> exact;
  bool is_exact = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& e = entries[i];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (e.is_number_integer()) {
      exact.emplace_back(e.get<long long>());
      freq.push_back(e.get<double>());
    } else if (e.is_string() && e.get<std::string>() != "golden4" && e.get<std::string>() != "tau" &&
               e.get<std::string>() != "golden_mean") {
      try {
        const Rational r = parse_rational(e.get<std::string>());
        exact.push_back(r);
        freq.push_back(to_double(r));
      } catch (const std::exception&) {
        fail(w, "cannot read rational frequency");
      }
    } else {
      const double x = number(e, w);
      freq.push_back(x);
      if (x == 0.0) {
        exact.emplace_back(0);
      } else {
        is_exact = false;
      }
    }
  }
  if (!is_exact) return {freq, std::nullopt};
  return {freq, exact};
}

InternalSpace parse_internal(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty list of factors");
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const Json& f = v[i];
    if (!f.is_object() || f.size() != 1) fail(w, "factor must be {\"euclidean\": n}, {\"torus\": n} or {\"cyclic\": q}");
    const std::string kind = f.begin().key();
    const int size = positive_int(f.begin().value(), w + "." + kind);
    if (kind == "euclidean") {
      factors.push_back(Factor::euclidean(size));
    } else if (kind == "torus") {
      factors.push_back(Factor::torus(size));
    } else if (kind == "cyclic") {
      factors.push_back(Factor::cyclic(size));
    } else {
      fail(w, "unknown factor kind \"" + kind + "\"");
    }
  }
  return InternalSpace(factors);
}

Window parse_window(const Json& v, const InternalSpace& space, const std::string& where) {
  allow_keys(v, where, {"parts", "tuples"});
  const Json& parts_json = need(v, "parts", where);
  if (!parts_json.is_array() || parts_json.size() != space.factors().size()) {
    fail(where + ".parts", "need one part per internal factor");
  }
  std::vector<FactorWindow> parts;
  for (std::size_t i = 0; i < parts_json.size(); ++i) {
    const std::string w = where + ".parts[" + std::to_string(i) + "]";
    const Json& p = parts_json[i];
    if (p.is_string() && p.get<std::string>() == "full") {
      parts.push_back(FactorWindow::full());
    } else if (p.is_object() && p.contains("box")) {
      allow_keys(p, w, {"box"});
      std::vector<Interval> bounds;
      for (std::size_t j = 0; j < p["box"].size(); ++j) {
        const Vec b = vec(p["box"][j], w + ".box[" + std::to_string(j) + "]", 2);
        bounds.push_back({b[0], b[1]});
      }
      parts.push_back(FactorWindow::box(std::move(bounds)));
    } else if (p.is_object() && p.contains("residues")) {
      allow_keys(p, w, {"residues"});
      std::vector<long long> res;
      for (const Json& r : p["residues"]) {
        if (!r.is_number_integer()) fail(w + ".residues", "residues must be integers");
        res.push_back(r.get<long long>());
      }
      parts.push_back(FactorWindow::residue_set(std::move(res)));
    } else {
      fail(w, "expected \"full\", {\"box\": ...} or {\"residues\": ...}");
    }
  }
  std::set<std::vector<long long>> tuples;
  if (v.contains("tuples")) {
    for (const Json& t : v["tuples"]) tuples.insert(t.get<std::vector<long long>>());
  }
  try {
    return Window(space, std::move(parts), std::move(tuples));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

WeightFunction parse_weight(const Json& v, const InternalSpace& space, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object with a \"family\"");
  const Json& fam = need(v, "family", where);
  if (!fam.is_string()) fail(where + ".family", "expected a string");
  const std::string family = fam.get<std::string>();
  try {
    if (family == "constant") {
      allow_keys(v, where, {"family", "value"});
      return WeightFunction::constant(space, v.contains("value") ? complex_value(v["value"], where + ".value") : 1.0);
    }
    if (family == "tent" || family == "bump") {
      allow_keys(v, where, {"family", "center", "half_width"});
      const Vec c = vec(need(v, "center", where), where + ".center", space.euclidean_dim());
      const Vec h = vec(need(v, "half_width", where), where + ".half_width", space.euclidean_dim());
      return family == "tent" ? WeightFunction::tent(space, c, h) : WeightFunction::bump(space, c, h);
    }
    if (family == "indicator") {
      allow_keys(v, where, {"family", "window"});
      return WeightFunction::indicator(parse_window(need(v, "window", where), space, where + ".window"));
    }
    if (family == "torus_trig") {
      allow_keys(v, where, {"family", "function"});
      return WeightFunction::torus_trig(space,
                                        parse_scalar_ap(need(v, "function", where), space.torus_dim(), where + ".function"));
    }
    if (family == "cyclic_table") {
      allow_keys(v, where, {"family", "table"});
      std::map<std::vector<long long>, Complex> table;
      const Json& t = need(v, "table", where);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string w = where + ".table[" + std::to_string(i) + "]";
        allow_keys(t[i], w, {"residues", "value"});
        table[need(t[i], "residues", w).get<std::vector<long long>>()] += complex_value(need(t[i], "value", w), w + ".value");
      }
      return WeightFunction::cyclic_table(space, std::move(table));
    }
    if (family == "product") {
      allow_keys(v, where, {"family", "factors"});
      const Json& fs = need(v, "factors", where);
      if (!fs.is_array() || fs.size() < 2) fail(where + ".factors", "need at least two factors");
      WeightFunction acc = parse_weight(fs[0], space, where + ".factors[0]");
      for (std::size_t i = 1; i < fs.size(); ++i) {
        acc = WeightFunction::product(acc, parse_weight(fs[i], space, where + ".factors[" + std::to_string(i) + "]"));
      }
      return acc;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where + ".family", "unknown weight family \"" + family + "\"");
}

struct ParsedDeformation {
  DeformationMap map;
  std::optional<ApFunction> torus;
};

ParsedDeformation parse_deformation(const Json& v, const InternalSpace& space, int d, const WeightFunction& f,
                                    const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object with a \"family\"");
  const std::string family = need(v, "family", where).get<std::string>();
  try {
    if (family == "zero") {
      allow_keys(v, where, {"family"});
      return {DeformationMap::zero(space, d), std::nullopt};
    }
    if (family == "torus_trig") {
      allow_keys(v, where, {"family", "components"});
      ApFunction p = parse_vector_ap(v, space.torus_dim(), d, where);
      return {DeformationMap::torus_trig(space, p), p};
    }
    if (family == "linear") {
      allow_keys(v, where, {"family", "matrix"});
      const Json& m = need(v, "matrix", where);
      if (!m.is_array() || static_cast<int>(m.size()) != d) fail(where + ".matrix", "need d rows");
      Eigen::MatrixXd a(d, space.euclidean_dim());
      for (int r = 0; r < d; ++r) {
        const Vec row = vec(m[r], where + ".matrix[" + std::to_string(r) + "]", space.euclidean_dim());
        for (int c = 0; c < space.euclidean_dim(); ++c) a(r, c) = row[c];
      }
      return {DeformationMap::linear(space, a, f.support().euclidean_bounds()), std::nullopt};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where + ".family", "unknown deformation family \"" + family + "\"");
}

void parse_modulation(const Json& v, int d, SystemConfig& cfg) {
  const std::string where = "modulation";
  allow_keys(v, where, {"weight", "displacement"});
  try {
    if (v.contains("weight")) cfg.modulation_weight = parse_scalar_ap(v["weight"], d, where + ".weight");
    if (v.contains("displacement")) {
      cfg.modulation_displacement = parse_vector_ap(v["displacement"], d, d, where + ".displacement");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

std::vector<Vec> point_list(const Json& v, const std::string& where, int d) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty list");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vec(v[i], where + "[" + std::to_string(i) + "]", d));
  return out;
}

SystemConfig from_preset(const Json& doc) {
  const std::string preset = doc["preset"].get<std::string>();
  if (preset == "sine") {
    allow_keys(doc, "", {"preset", "epsilon", "alpha", "modulation"});
    const double eps = number(need(doc, "epsilon", ""), "epsilon");
    const double alpha = number(need(doc, "alpha", ""), "alpha");
    CutProjectScheme scheme = sine_scheme(alpha);
    const InternalSpace& s = scheme.internal();
    ApFunction p = ApFunction::real_vector(1, {sine_tone({1.0}, eps, std::vector<Rational>{Rational(1)})});
    return {doc, scheme, WeightFunction::constant(s, 1.0), DeformationMap::torus_trig(s, p), p, {}, {}, {}};
  }
  if (preset == "integers") {
    allow_keys(doc, "", {"preset", "modulation"});
    CutProjectScheme scheme = integer_scheme();
    return {doc, scheme, WeightFunction::constant(scheme.internal(), 1.0), DeformationMap::zero(scheme.internal(), 1),
            std::nullopt, {}, {}, IdealCrystal(Eigen::MatrixXd::Identity(1, 1), {Vec{0.0}})};
  }
  if (preset == "fibonacci") {
    allow_keys(doc, "", {"preset", "weight", "modulation"});
    CutProjectScheme scheme = fibonacci_scheme();
    const std::string w = doc.contains("weight") ? doc["weight"].get<std::string>() : "tent";
    const double tau = golden_mean();
    WeightFunction f = w == "tent" ? WeightFunction::tent(scheme.internal(), {(tau - 2.0) / 2.0}, {tau / 2.0})
                       : w == "indicator" ? WeightFunction::indicator(fibonacci_window())
                                          : (fail("weight", "expected \"tent\" or \"indicator\""), WeightFunction::indicator(fibonacci_window()));
    return {doc, scheme, f, DeformationMap::zero(scheme.internal(), 1), std::nullopt, {}, {}, {}};
  }
  if (preset == "ideal_crystal") {
    allow_keys(doc, "", {"preset", "gamma_basis", "offsets", "modulation"});
    const std::vector<Vec> basis_cols = point_list(need(doc, "gamma_basis", ""), "gamma_basis", -1);
    const int d = static_cast<int>(basis_cols.size());
    Eigen::MatrixXd basis(d, d);
    for (int j = 0; j < d; ++j) {
      if (static_cast<int>(basis_cols[j].size()) != d) fail("gamma_basis", "basis must be square");
      for (int i = 0; i < d; ++i) basis(i, j) = basis_cols[j][i];
    }
    const std::vector<Vec> offsets = point_list(need(doc, "offsets", ""), "offsets", d);
    try {
      IdealCrystalScheme ics = ideal_crystal_scheme(basis, offsets);
      IdealCrystal crystal(basis, offsets);
      WeightFunction f = WeightFunction::indicator(ics.window);
      return {doc, ics.scheme, f, DeformationMap::zero(ics.scheme.internal(), d), std::nullopt, {}, {}, crystal};
    } catch (const UnsupportedInputError&) {
      throw;
    } catch (const Error& e) {
      fail("offsets", e.what());
    }
  }
  fail("preset", "unknown preset \"" + preset + "\"");
}

SystemConfig from_explicit(const Json& doc) {
  allow_keys(doc, "", {"phys_dim", "internal", "generators", "weight", "deformation", "modulation"});
  const int d = positive_int(need(doc, "phys_dim", ""), "phys_dim");
  const InternalSpace space = parse_internal(need(doc, "internal", ""), "internal");
  const Json& gens_json = need(doc, "generators", "");
  if (!gens_json.is_array()) fail("generators", "expected a list");
  std::vector<LatticeGenerator> gens;
  for (std::size_t i = 0; i < gens_json.size(); ++i) {
    const std::string w = "generators[" + std::to_string(i) + "]";
    allow_keys(gens_json[i], w, {"phys", "internal"});
    Vec phys = vec(need(gens_json[i], "phys", w), w + ".phys", d);
    Vec internal = vec(need(gens_json[i], "internal", w), w + ".internal", space.coordinate_count());
    gens.push_back({std::move(phys), space.point(std::move(internal))});
  }
  std::optional<CutProjectScheme> scheme;
  try {
    scheme.emplace(d, space, std::move(gens));
  } catch (const StructuralError& e) {
    fail("generators", e.what());
  }
  WeightFunction f = parse_weight(need(doc, "weight", ""), space, "weight");
  ParsedDeformation p = doc.contains("deformation")
                            ? parse_deformation(doc["deformation"], space, d, f, "deformation")
                            : ParsedDeformation{DeformationMap::zero(space, d), std::nullopt};
  return {doc, *scheme, f, p.map, p.torus, {}, {}, {}};
}

void dump(const Json& v, std::string& out, int indent) {
  const std::string pad(indent, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  " + Json(item.key()).dump() + ": ";
        dump(item.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      bool scalars = true;
      for (const Json& e : v) scalars &= !e.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump(v[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad + "  ";
        dump(v[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError("non-finite number cannot be serialized");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s = buf;
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

std::vector<Term> parse_terms(const Json& literal, int domain_dim, const std::string& where) {
  std::vector<Term> out;
  if (literal.is_array()) {
    for (std::size_t i = 0; i < literal.size(); ++i) {
      auto part = parse_terms(literal[i], domain_dim, where + "[" + std::to_string(i) + "]");
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (!literal.is_object()) fail(where, "expected a function literal");
  if (literal.contains("frequencies")) {
    allow_keys(literal, where, {"frequencies", "coefficients"});
    const Json& fr = literal["frequencies"];
    const Json& co = need(literal, "coefficients", where);
    if (!fr.is_array() || !co.is_array() || fr.size() != co.size()) {
      fail(where, "frequencies and coefficients must be lists of equal length");
    }
    for (std::size_t i = 0; i < fr.size(); ++i) {
      auto [freq, exact] = frequency(fr[i], where + ".frequencies[" + std::to_string(i) + "]", domain_dim);
      out.push_back({std::move(freq), complex_value(co[i], where + ".coefficients[" + std::to_string(i) + "]"),
                     std::move(exact)});
    }
    return out;
  }
  if (literal.contains("amp")) {
    allow_keys(literal, where, {"amp", "freq", "phase", "shape"});
    const double amp = number(literal["amp"], where + ".amp");
    auto [freq, exact] = frequency(need(literal, "freq", where), where + ".freq", domain_dim);
    const std::string shape = literal.contains("shape") ? literal["shape"].get<std::string>() : "cos";
    if (shape == "sin") {
      if (literal.contains("phase")) fail(where + ".phase", "phase is only accepted with shape \"cos\"");
      return sine_tone(std::move(freq), amp, std::move(exact));
    }
    if (shape != "cos") fail(where + ".shape", "expected \"cos\" or \"sin\"");
    const double phase = literal.contains("phase") ? number(literal["phase"], where + ".phase") : 0.0;
    return real_tone(std::move(freq), amp, phase, std::move(exact));
  }
  if (literal.contains("constant")) {
    allow_keys(literal, where, {"constant"});
    std::vector<Rational> zero(domain_dim, Rational(0));
    return {{Vec(domain_dim, 0.0), complex_value(literal["constant"], where + ".constant"), zero}};
  }
  fail(where, "expected \"frequencies\", \"amp\" or \"constant\"");
}

ApFunction parse_scalar_ap(const Json& literal, int domain_dim, const std::string& where) {
  try {
    return ApFunction::scalar(domain_dim, parse_terms(literal, domain_dim, where));
  } catch (const StructuralError& e) {
    fail(where, e.what());
  }
}

ApFunction parse_vector_ap(const Json& literal, int domain_dim, int out_dim, const std::string& where) {
  const Json& comps = need(literal, "components", where);
  if (!comps.is_array() || static_cast<int>(comps.size()) != out_dim) {
    fail(where + ".components", "need " + std::to_string(out_dim) + " components");
  }
  std::vector<std::vector<Term>> terms;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    terms.push_back(parse_terms(comps[i], domain_dim, where + ".components[" + std::to_string(i) + "]"));
  }
  try {
    return ApFunction::real_vector(domain_dim, std::move(terms));
  } catch (const StructuralError& e) {
    fail(where, e.what());
  }
}

SystemConfig load_config(const Json& document) {
  if (!document.is_object()) throw ConfigError("configuration must be a JSON object");
  SystemConfig cfg = [&] {
    try {
      if (document.contains("preset")) {
        if (!document["preset"].is_string()) fail("preset", "expected a string");
        return from_preset(document);
      }
      return from_explicit(document);
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("configuration has a value of the wrong type: ") + e.what());
    }
  }();
  if (document.contains("modulation")) {
    try {
      parse_modulation(document["modulation"], cfg.scheme.phys_dim(), cfg);
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("field 'modulation': ") + e.what());
    }
  }
  return cfg;
}

EffectiveSystem effective_system(const SystemConfig& config) {
  if (!config.modulation_weight && !config.modulation_displacement) {
    return {config.scheme, config.weight, config.deformation};
  }
  const int d = config.scheme.phys_dim();
  const ApFunction w = config.modulation_weight ? *config.modulation_weight : ApFunction::constant(d, 1.0);
  const ApFunction g = config.modulation_displacement ? *config.modulation_displacement : ApFunction::zero_vector(d, d);
  ComposedScheme c = realize_composed_scheme(config.scheme, config.weight, config.deformation, w, g);
  return {c.scheme, c.weight, c.deformation};
}

std::string canonical_dump(const Json& document) {
  std::string out;
  dump(document, out, 0);
  return out + "\n";
}

std::optional<ApFunction> physical_deformation(const SystemConfig& config) {
  const CutProjectScheme& s = config.scheme;
  const int d = s.phys_dim();
  if (s.rank() != d) return std::nullopt;
  if (config.deformation.is_zero()) return ApFunction::zero_vector(d, d);
  if (!config.deformation_torus) return std::nullopt;
  Eigen::MatrixXd v(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) v(j, i) = s.generators()[i].phys[j];
  }
  std::vector<int> torus;
  for (int c = 0; c < s.internal().coordinate_count(); ++c) {
    if (s.internal().kind_of_coordinate(c) == FactorKind::Torus) torus.push_back(c);
  }
  const Eigen::MatrixXd vt_inv = v.transpose().inverse();
  std::vector<std::vector<Term>> comps;
  for (const auto& comp : config.deformation_torus->components()) {
    std::vector<Term> terms;
    for (const Term& t : comp) {
      Eigen::VectorXd c(d);
      for (int i = 0; i < d; ++i) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < torus.size(); ++j) {
          acc += static_cast<long double>(t.freq[j]) * s.generators()[i].internal[torus[j]];
        }
        c(i) = static_cast<double>(acc);
      }
      const Eigen::VectorXd w = vt_inv * c;
      terms.push_back({Vec(w.data(), w.data() + d), t.coef, std::nullopt});
    }
    comps.push_back(std::move(terms));
  }
  return ApFunction::real_vector(d, std::move(comps));
}

}  // namespace apdiff
