#pragma once

// CSV and JSON output for point patches and spectra. Numbers are written as
// %.17g so repeated runs give identical bytes.

#include <string>

#include "apdiff/apfun.hpp"
#include "apdiff/combs.hpp"
#include "apdiff/config.hpp"
#include "apdiff/diffraction.hpp"

namespace apdiff {

std::string format_number(double x);

// Header x_1..x_d,re_weight,im_weight,k; k components joined by ';'.
std::string points_csv(const WeightedComb& comb);
// Region, exhaustive region, fingerprint.
Json points_meta(const WeightedComb& comb);
void write_points(const WeightedComb& comb, const std::string& path);
// Reads the CSV and, when present, the sidecar path + ".meta.json". Without
// a sidecar the region is the bounding box of the atoms.
WeightedComb read_points(const std::string& path);
WeightedComb parse_points_csv(const std::string& text, const Json* meta = nullptr);

std::string spectrum_csv(const Spectrum& spectrum);
Json spectrum_json(const Spectrum& spectrum);

std::string period_report_csv(const PeriodReport& report);

void write_text(const std::string& path, const std::string& text);

}  // namespace apdiff
