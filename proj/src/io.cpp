#include "skewdirac/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "skewdirac/error.hpp"

namespace skewdirac::io {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Validation, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    fail(ErrorCode::Validation, std::string("missing field \"") + name + "\"");
  }
  return doc.at(name);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorCode::Validation, where + " is not a number");
  return j.get<double>();
}

Index integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorCode::Validation, where + " is not an integer");
  return j.get<Index>();
}

void expect_kind(const json& doc, const std::string& kind) {
  const json& k = field(doc, "kind");
  if (!k.is_string() || k.get<std::string>() != kind) {
    fail(ErrorCode::Validation, "expected a document of kind \"" + kind + "\"");
  }
}

Index block_size(const json& doc) {
  const Index p = integer(field(doc, "p"), "p");
  if (p < 1) fail(ErrorCode::Validation, "p must be positive");
  return p;
}

Complex complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::Validation, where + " is not a [re, im] pair");
  return {number(j[0], where), number(j[1], where)};
}

Matrix matrix_value(const json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    fail(ErrorCode::Validation, where + " must have " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      fail(ErrorCode::Validation, where + " must have " + std::to_string(cols) + " columns");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = complex_value(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

std::vector<Matrix> matrix_list(const json& doc, const char* name, Index count, Index rows, Index cols) {
  const json& list = field(doc, name);
  if (!list.is_array()) fail(ErrorCode::Validation, std::string(name) + " is not an array");
  if (count >= 0 && static_cast<Index>(list.size()) != count) {
    fail(ErrorCode::Validation, std::string(name) + " must hold " + std::to_string(count) + " entries");
  }
  std::vector<Matrix> out;
  out.reserve(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    out.push_back(matrix_value(list[k], rows, cols, std::string(name) + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Index length_n(const json& doc) {
  const Index n = integer(field(doc, "n"), "n");
  if (n < 0) fail(ErrorCode::Validation, "n must be nonnegative");
  return n;
}

std::string sequence_json(const char* kind, const char* name, Index p, const std::vector<Matrix>& items) {
  JsonWriter w;
  w.begin_object()
      .key("kind").value(kind)
      .key("p").value(static_cast<long long>(p))
      .key("n").value(static_cast<long long>(items.size()) - 1)
      .key(name).value(items)
      .end_object();
  return w.str();
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::Validation, "cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  first_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  first_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += json(k).dump();
  out_ += ':';
  after_key_ = true;
  return *this;
}

void JsonWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (first_.empty()) return;
  if (!first_.back()) out_ += ',';
  first_.back() = false;
}

JsonWriter& JsonWriter::value(double x) {
  separator();
  out_ += format_double(x);
  return *this;
}

JsonWriter& JsonWriter::value(long long x) {
  separator();
  out_ += std::to_string(x);
  return *this;
}

JsonWriter& JsonWriter::value(bool x) {
  separator();
  out_ += x ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  separator();
  out_ += json(s).dump();
  return *this;
}

JsonWriter& JsonWriter::value(Complex z) {
  return begin_array().value(z.real()).value(z.imag()).end_array();
}

JsonWriter& JsonWriter::value(const Matrix& m) {
  begin_array();
  for (Index i = 0; i < m.rows(); ++i) {
    begin_array();
    for (Index j = 0; j < m.cols(); ++j) value(m(i, j));
    end_array();
  }
  return end_array();
}

JsonWriter& JsonWriter::value(const std::vector<Matrix>& ms) {
  begin_array();
  for (const Matrix& m : ms) value(m);
  return end_array();
}

JsonWriter& JsonWriter::value(const std::vector<double>& xs) {
  begin_array();
  for (double x : xs) value(x);
  return end_array();
}

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

std::string to_json(const BetaSequence& b) {
  return sequence_json("beta", "beta", b.p, b.beta);
}

std::string to_json(const DiscreteDiracSystem& sys) {
  return sequence_json("system", "C", sys.p, sys.c);
}

std::string to_json(const WeylTaylorData& alpha) {
  return sequence_json("taylor", "alpha", alpha.p, alpha.alpha);
}

std::string to_json(const PotentialGrid& pot) {
  JsonWriter w;
  w.begin_object()
      .key("kind").value("potential")
      .key("p").value(static_cast<long long>(pot.p))
      .key("l").value(pot.l)
      .key("N").value(static_cast<long long>(pot.v.size()) - 1)
      .key("M").value(pot.bound)
      .key("v").value(pot.v)
      .end_object();
  return w.str();
}

std::string to_json(const PhiSamples& samples) {
  JsonWriter w;
  w.begin_object()
      .key("kind").value("phi_samples")
      .key("p").value(static_cast<long long>(samples.p))
      .key("eta").value(samples.eta)
      .key("xi").value(samples.xi)
      .key("phi").value(samples.phi)
      .end_object();
  return w.str();
}

BetaSequence parse_beta(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "beta");
  const Index p = block_size(doc);
  return {p, matrix_list(doc, "beta", length_n(doc) + 1, p, 2 * p)};
}

DiscreteDiracSystem parse_system(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "system");
  const Index p = block_size(doc);
  return {p, matrix_list(doc, "C", length_n(doc) + 1, 2 * p, 2 * p)};
}

WeylTaylorData parse_taylor(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "taylor");
  const Index p = block_size(doc);
  return {p, matrix_list(doc, "alpha", length_n(doc) + 1, p, p)};
}

PotentialGrid parse_potential(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "potential");
  const Index p = block_size(doc);
  const Index n = integer(field(doc, "N"), "N");
  if (n < 1) fail(ErrorCode::Validation, "N must be at least 1");
  PotentialGrid pot{p, number(field(doc, "l"), "l"), number(field(doc, "M"), "M"),
                    matrix_list(doc, "v", n + 1, p, p)};
  return pot;
}

PhiSamples parse_phi_samples(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "phi_samples");
  PhiSamples out;
  out.p = block_size(doc);
  out.eta = number(field(doc, "eta"), "eta");
  const json& xi = field(doc, "xi");
  if (!xi.is_array()) fail(ErrorCode::Validation, "xi is not an array");
  for (std::size_t k = 0; k < xi.size(); ++k) out.xi.push_back(number(xi[k], "xi"));
  out.phi = matrix_list(doc, "phi", static_cast<Index>(out.xi.size()), out.p, out.p);
  return out;
}

std::string document_kind(const std::string& text) {
  const json doc = parse(text);
  const json& k = field(doc, "kind");
  if (!k.is_string()) fail(ErrorCode::Validation, "\"kind\" is not a string");
  return k.get<std::string>();
}

SystemInput parse_system_input(const std::string& text) {
  const std::string kind = document_kind(text);
  if (kind == "beta") return parse_beta(text);
  if (kind == "system") return parse_system(text);
  fail(ErrorCode::Validation, "expected a document of kind \"beta\" or \"system\", got \"" + kind + "\"");
}

void write_grid_csv(std::ostream& os, double l, const std::vector<Matrix>& samples, const std::string& name) {
  if (samples.empty()) return;
  const Index rows = samples.front().rows();
  const Index cols = samples.front().cols();
  const bool scalar = rows == 1 && cols == 1;
  os << "x";
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const std::string suffix = scalar ? name : name + "_" + std::to_string(i) + std::to_string(j);
      os << ",re_" << suffix << ",im_" << suffix;
    }
  }
  os << '\n';
  const double h = samples.size() > 1 ? l / static_cast<double>(samples.size() - 1) : 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    os << format_double(h * static_cast<double>(k));
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        os << ',' << format_double(samples[k](i, j).real()) << ',' << format_double(samples[k](i, j).imag());
      }
    }
    os << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Validation, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Validation, "cannot write " + path);
  out << text;
}

}  // namespace skewdirac::io
