#include "apdiff/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "apdiff/errors.hpp"

namespace apdiff {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("points CSV line " + std::to_string(line) + ": cannot read number \"" + s + "\"");
  }
}

Json box_json(const Box& b) {
  Json j;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  return j;
}

Box box_from(const Json& j, const char* what) {
  try {
    return {j.at("lo").get<Vec>(), j.at("hi").get<Vec>()};
  } catch (const Json::exception&) {
    throw ConfigError(std::string("points sidecar: bad ") + what);
  }
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string points_csv(const WeightedComb& comb) {
  std::string out;
  for (int i = 0; i < comb.dim(); ++i) out += "x_" + std::to_string(i + 1) + ",";
  out += "re_weight,im_weight,k\n";
  for (const Atom& a : comb.atoms()) {
    for (double x : a.position) out += format_number(x) + ",";
    out += format_number(a.weight.real()) + "," + format_number(a.weight.imag()) + ",";
    if (a.label) {
      for (std::size_t i = 0; i < a.label->size(); ++i) out += (i ? ";" : "") + std::to_string((*a.label)[i]);
    }
    out += "\n";
  }
  return out;
}

Json points_meta(const WeightedComb& comb) {
  Json j;
  j["dim"] = comb.dim();
  j["region"] = box_json(comb.region());
  j["exhaustive_region"] = box_json(comb.exhaustive_region());
  j["fingerprint"] = comb.fingerprint();
  j["atoms"] = comb.size();
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write to " + path + " failed");
}

void write_points(const WeightedComb& comb, const std::string& path) {
  write_text(path, points_csv(comb));
  write_text(path + ".meta.json", canonical_dump(points_meta(comb)));
}

WeightedComb parse_points_csv(const std::string& text, const Json* meta) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("points CSV is empty");
  const std::vector<std::string> header = split(line, ',');
  int d = 0;
  while (d < static_cast<int>(header.size()) && header[d] == "x_" + std::to_string(d + 1)) ++d;
  if (d == 0 || static_cast<int>(header.size()) < d + 2 || header[d] != "re_weight" || header[d + 1] != "im_weight") {
    throw ConfigError("points CSV header must be x_1..x_d,re_weight,im_weight[,k]");
  }
  const bool has_k = static_cast<int>(header.size()) == d + 3 && header[d + 2] == "k";
  std::vector<Atom> atoms;
  Box bbox{Vec(d, std::numeric_limits<double>::infinity()), Vec(d, -std::numeric_limits<double>::infinity())};
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line, ',');
    if (static_cast<int>(cells.size()) != d + 2 + (has_k ? 1 : 0)) {
      throw ConfigError("points CSV line " + std::to_string(lineno) + ": wrong number of columns");
    }
    Atom a;
    for (int i = 0; i < d; ++i) {
      a.position.push_back(parse_double(cells[i], lineno));
      bbox.lo[i] = std::min(bbox.lo[i], a.position[i]);
      bbox.hi[i] = std::max(bbox.hi[i], a.position[i]);
    }
    a.weight = {parse_double(cells[d], lineno), parse_double(cells[d + 1], lineno)};
    if (has_k && !cells[d + 2].empty()) {
      KLabel k;
      for (const std::string& part : split(cells[d + 2], ';')) {
        try {
          k.push_back(std::stoll(part));
        } catch (const std::exception&) {
          throw ConfigError("points CSV line " + std::to_string(lineno) + ": bad label");
        }
      }
      a.label = std::move(k);
    }
    atoms.push_back(std::move(a));
  }
  if (atoms.empty()) bbox = {Vec(d, 0.0), Vec(d, 0.0)};
  if (meta) {
    const Box region = box_from(meta->value("region", Json()), "region");
    const Box ex = box_from(meta->value("exhaustive_region", Json()), "exhaustive_region");
    return WeightedComb(d, std::move(atoms), region, ex, meta->value("fingerprint", std::string()));
  }
  return WeightedComb(d, std::move(atoms), bbox, bbox);
}

WeightedComb read_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    const Json meta = read_json_file(meta_path);
    return parse_points_csv(ss.str(), &meta);
  }
  return parse_points_csv(ss.str());
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::size_t label_len = spectrum.entries.empty() ? 0 : spectrum.entries.front().character.label.size();
  std::string out;
  for (std::size_t i = 0; i < label_len; ++i) out += "label_" + std::to_string(i + 1) + ",";
  for (int i = 0; i < spectrum.phys_dim; ++i) out += "xi_" + std::to_string(i + 1) + ",";
  out += "re_amp,im_amp,intensity\n";
  for (const SpectrumEntry& e : spectrum.entries) {
    for (long long v : e.character.label) out += std::to_string(v) + ",";
    for (double x : e.character.freq) out += format_number(x) + ",";
    out += format_number(e.amplitude.real()) + "," + format_number(e.amplitude.imag()) + "," +
           format_number(e.intensity) + "\n";
  }
  return out;
}

Json spectrum_json(const Spectrum& spectrum) {
  Json j;
  j["fingerprint"] = spectrum.fingerprint;
  j["freq_cutoff"] = spectrum.freq_cutoff;
  j["label_bound"] = spectrum.label_bound;
  j["min_intensity"] = spectrum.min_intensity;
  j["total_intensity"] = spectrum.total_intensity;
  j["autocorr_at_zero"] = spectrum.autocorr_at_zero;
  j["completeness_note"] = spectrum.completeness_note;
  Json entries = Json::array();
  for (const SpectrumEntry& e : spectrum.entries) {
    Json row;
    row["label"] = e.character.label;
    row["xi"] = e.character.freq;
    row["amplitude"] = {e.amplitude.real(), e.amplitude.imag()};
    row["intensity"] = e.intensity;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string period_report_csv(const PeriodReport& report) {
  std::string out = "t,deviation\n";
  for (std::size_t i = 0; i < report.periods.size(); ++i) {
    out += format_number(report.periods[i]) + "," + format_number(report.deviations[i]) + "\n";
  }
  return out;
}

}  // namespace apdiff
