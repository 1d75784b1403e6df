#include "gimag/document.hpp"

#include <cmath>
#include <set>

namespace gimag {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw DocumentError(msg); }

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + ": non-finite number");
  return d;
}

RealMatrix read_matrix(const Json& j, const char* key, int dim) {
  const Json& v = field(j, key);
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    fail(std::string(key) + ": expected " + std::to_string(dim) + " rows");
  }
  RealMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Json& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      fail(std::string(key) + ": row " + std::to_string(r) + " must have " + std::to_string(dim) +
           " entries");
    }
    for (int c = 0; c < dim; ++c) {
      m(r, c) = number(row[c], std::string(key) + "[" + std::to_string(r) + "][" +
                                   std::to_string(c) + "]");
    }
  }
  return m;
}

RealVector read_vector(const Json& j, const char* key, int dim) {
  const Json& v = field(j, key);
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    fail(std::string(key) + ": expected " + std::to_string(dim) + " entries");
  }
  RealVector out(dim);
  for (int i = 0; i < dim; ++i) out(i) = number(v[i], std::string(key) + "[" + std::to_string(i) + "]");
  return out;
}

void only_keys(const Json& j, std::set<std::string> allowed) {
  allowed.insert("kind");
  allowed.insert("modes");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail("unknown key \"" + it.key() + "\"");
  }
}

}  // namespace

ObjectDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_document(j);
}

ObjectDocument parse_document(const Json& j) {
  if (!j.is_object()) fail("document must be a JSON object");
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) fail("\"kind\" must be a string");
  const Json& modes = field(j, "modes");
  if (!modes.is_number_integer()) fail("\"modes\" must be an integer");
  const auto n = modes.get<long long>();
  if (n < 1 || n > kMaxModes) fail("\"modes\" must be in [1, " + std::to_string(kMaxModes) + "]");
  const int dim = 2 * static_cast<int>(n);
  const std::string k = kind.get<std::string>();
  try {
    if (k == "state") {
      only_keys(j, {"displacement", "covariance"});
      return GaussianState(read_vector(j, "displacement", dim), read_matrix(j, "covariance", dim));
    }
    if (k == "channel") {
      only_keys(j, {"T", "N", "d"});
      return GaussianChannel(read_matrix(j, "T", dim), read_matrix(j, "N", dim),
                             read_vector(j, "d", dim));
    }
    if (k == "superchannel") {
      only_keys(j, {"A", "O", "Y", "dbar"});
      return GaussianSuperchannel(read_matrix(j, "A", dim), read_matrix(j, "O", dim),
                                  read_matrix(j, "Y", dim), read_vector(j, "dbar", dim));
    }
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  }
  fail("unknown kind \"" + k + "\"");
}

Json matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string document_kind(const ObjectDocument& doc) {
  switch (doc.index()) {
    case 0: return "state";
    case 1: return "channel";
    default: return "superchannel";
  }
}

Json to_json(const ObjectDocument& doc) {
  Json j;
  j["kind"] = document_kind(doc);
  if (const auto* s = std::get_if<GaussianState>(&doc)) {
    j["modes"] = s->modes();
    j["displacement"] = vector_to_json(s->displacement());
    j["covariance"] = matrix_to_json(s->covariance());
  } else if (const auto* c = std::get_if<GaussianChannel>(&doc)) {
    j["modes"] = c->modes();
    j["T"] = matrix_to_json(c->t());
    j["N"] = matrix_to_json(c->n());
    j["d"] = vector_to_json(c->d());
  } else {
    const auto& sc = std::get<GaussianSuperchannel>(doc);
    j["modes"] = sc.modes();
    j["A"] = matrix_to_json(sc.a());
    j["O"] = matrix_to_json(sc.o());
    j["Y"] = matrix_to_json(sc.y());
    j["dbar"] = vector_to_json(sc.dbar());
  }
  return j;
}

std::string serialize_document(const ObjectDocument& doc) { return to_json(doc).dump(2) + "\n"; }

}  // namespace gimag
