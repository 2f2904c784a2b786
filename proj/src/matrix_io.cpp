#include "quadconc/matrix_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace quadconc {

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& tok, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw ValidationError("");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse number '" + tok + "' in " + what);
  }
}

}  // namespace

SquareMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      row.push_back(parse_double(tok, "matrix CSV"));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("matrix CSV is empty");
  const std::size_t n = rows.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ValidationError("matrix CSV row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " columns, expected " +
                            std::to_string(n));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  return SquareMatrix(n, std::move(entries));
}

void write_matrix_csv(std::ostream& out, const SquareMatrix& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << format_double17(a(i, j));
    }
    out << '\n';
  }
}

namespace {

nlohmann::json parse_json(std::istream& in, const std::string& what) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + what + ": " + e.what());
  }
}

}  // namespace

SquareMatrix read_matrix_json(std::istream& in) {
  const nlohmann::json j = parse_json(in, "matrix file");
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    throw ValidationError("matrix JSON must be {\"n\": ..., \"entries\": [...]}");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw ValidationError("matrix JSON field \"n\" must be a positive integer");
  }
  const auto n = j["n"].get<std::size_t>();
  if (!j["entries"].is_array()) {
    throw ValidationError("matrix JSON field \"entries\" must be an array");
  }
  std::vector<double> entries;
  entries.reserve(j["entries"].size());
  for (const auto& v : j["entries"]) {
    if (!v.is_number()) throw ValidationError("matrix entries must be numbers");
    entries.push_back(v.get<double>());
  }
  return SquareMatrix(n, std::move(entries));
}

void write_matrix_json(std::ostream& out, const SquareMatrix& a) {
  // Hand-rolled so the 17-digit decimal contract matches the CSV writer.
  out << "{\"n\": " << a.dim() << ", \"entries\": [";
  const auto& e = a.entries();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k > 0) out << ", ";
    out << format_double17(e[k]);
  }
  out << "]}\n";
}

SigmaDiag read_sigmas_json(std::istream& in) {
  const nlohmann::json j = parse_json(in, "sigmas file");
  const nlohmann::json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else if (j.is_object() && j.contains("sigmas") && j["sigmas"].is_array()) {
    arr = &j["sigmas"];
  } else {
    throw ValidationError("sigmas JSON must be an array or {\"sigmas\": [...]}");
  }
  std::vector<double> s;
  s.reserve(arr->size());
  for (const auto& v : *arr) {
    if (!v.is_number()) throw ValidationError("sigmas must be numbers");
    s.push_back(v.get<double>());
  }
  return SigmaDiag(std::move(s));
}

void write_sigmas_json(std::ostream& out, const SigmaDiag& sig) {
  out << "{\"sigmas\": [";
  for (std::size_t i = 0; i < sig.dim(); ++i) {
    if (i > 0) out << ", ";
    out << format_double17(sig[i]);
  }
  out << "]}\n";
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return in;
}

}  // namespace

SquareMatrix load_matrix(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  if (ends_with(path, ".json")) return read_matrix_json(in);
  return read_matrix_csv(in);
}

SigmaDiag load_sigmas(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_sigmas_json(in);
}

}  // namespace quadconc
