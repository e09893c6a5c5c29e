#pragma once

// File formats. Complex numbers are [re, im] arrays, matrices are row-major
// nested arrays, and every document carries "kind" plus its block size "p".
// Floats are written with 17 significant digits so that reading back what
// was written reproduces every double exactly.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "skewdirac/continuous.hpp"
#include "skewdirac/discrete_system.hpp"
#include "skewdirac/weyl_discrete.hpp"

namespace skewdirac::io {

/// 17 significant digits (%.17g).
std::string format_double(double x);

std::string to_json(const BetaSequence& b);
std::string to_json(const DiscreteDiracSystem& sys);
std::string to_json(const WeylTaylorData& alpha);
std::string to_json(const PotentialGrid& pot);
std::string to_json(const PhiSamples& samples);

BetaSequence parse_beta(const std::string& text);
DiscreteDiracSystem parse_system(const std::string& text);
WeylTaylorData parse_taylor(const std::string& text);
PotentialGrid parse_potential(const std::string& text);
PhiSamples parse_phi_samples(const std::string& text);

/// Either representation of a discrete system, chosen by the "kind" field.
using SystemInput = std::variant<BetaSequence, DiscreteDiracSystem>;
SystemInput parse_system_input(const std::string& text);

/// The "kind" field of a document. Throws Validation on malformed JSON.
std::string document_kind(const std::string& text);

/// Header row then one row per node: x, then Re/Im of each entry (row-major).
/// For 1 x 1 samples the columns are "x,re_<name>,im_<name>".
void write_grid_csv(std::ostream& os, double l, const std::vector<Matrix>& samples,
                    const std::string& name);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Minimal JSON writer with fixed 17-digit float formatting.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double x);
  JsonWriter& value(long long x);
  JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(bool x);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& value(Complex z);
  JsonWriter& value(const Matrix& m);
  JsonWriter& value(const std::vector<Matrix>& ms);
  JsonWriter& value(const std::vector<double>& xs);
  JsonWriter& null();

  std::string str() const { return out_ + "\n"; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

}  // namespace skewdirac::io
