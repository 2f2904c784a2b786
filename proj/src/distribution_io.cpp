#include "quadconc/distribution_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "quadconc/errors.hpp"
#include "quadconc/matrix_io.hpp"

namespace quadconc {

namespace {

double get_number(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw ValidationError(std::string("distribution JSON needs numeric field \"") +
                          field + "\"");
  }
  return j[field].get<double>();
}

std::vector<double> get_array(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw ValidationError(std::string("distribution JSON needs array field \"") +
                          field + "\"");
  }
  std::vector<double> out;
  out.reserve(j[field].size());
  for (const auto& v : j[field]) {
    if (!v.is_number())
      throw ValidationError(std::string("\"") + field + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

DistributionSpec from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("distribution JSON must be an object with a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "gaussian") {
    return DistributionSpec::gaussian(get_number(j, "sigma"));
  }
  if (kind == "uniform" || kind == "uniform_symmetric") {
    return DistributionSpec::uniform_symmetric(get_number(j, "half_width"));
  }
  if (kind == "rademacher") {
    return DistributionSpec::rademacher(get_number(j, "scale"));
  }
  if (kind == "finite_discrete" || kind == "finite") {
    return DistributionSpec::finite_discrete(get_array(j, "values"),
                                             get_array(j, "probs"));
  }
  throw ValidationError("unknown distribution kind: " + kind);
}

nlohmann::json parse_stream(std::istream& in) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed distribution JSON: ") + e.what());
  }
}

}  // namespace

DistributionSpec read_distribution_json(std::istream& in) {
  return from_json(parse_stream(in));
}

void write_distribution_json(std::ostream& out, const DistributionSpec& d) {
  out << "{\"kind\": \"" << d.kind_name() << "\"";
  if (const auto* g = std::get_if<Gaussian>(&d.kind())) {
    out << ", \"sigma\": " << format_double17(g->sigma);
  } else if (const auto* u = std::get_if<UniformSymmetric>(&d.kind())) {
    out << ", \"half_width\": " << format_double17(u->half_width);
  } else if (const auto* r = std::get_if<Rademacher>(&d.kind())) {
    out << ", \"scale\": " << format_double17(r->scale);
  } else {
    const auto& f = std::get<FiniteDiscrete>(d.kind());
    out << ", \"values\": [";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (i > 0) out << ", ";
      out << format_double17(f.values[i]);
    }
    out << "], \"probs\": [";
    for (std::size_t i = 0; i < f.probs.size(); ++i) {
      if (i > 0) out << ", ";
      out << format_double17(f.probs[i]);
    }
    out << "]";
  }
  out << "}";
}

std::vector<DistributionSpec> load_distributions(const std::string& path,
                                                 std::size_t n_expected) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  const nlohmann::json j = parse_stream(in);
  std::vector<DistributionSpec> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(from_json(e));
    if (n_expected > 0 && out.size() != n_expected) {
      throw ValidationError("distributions file has " + std::to_string(out.size()) +
                            " entries, matrix needs " + std::to_string(n_expected));
    }
    if (out.empty()) throw ValidationError("distributions array is empty");
  } else {
    const DistributionSpec d = from_json(j);
    out.assign(std::max<std::size_t>(n_expected, 1), d);
  }
  return out;
}

DistributionSpec load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return read_distribution_json(in);
}

}  // namespace quadconc
