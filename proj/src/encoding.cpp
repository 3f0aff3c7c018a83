#include "ebcert/encoding.hpp"

namespace ebcert {

nlohmann::json encode_matrix(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix decode_matrix(const nlohmann::json& j, const char* what) {
  const std::string name(what);
  if (!j.is_array() || j.empty()) throw Error("schema", name + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw Error("schema", name + " rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw Error("schema", name + " row " + std::to_string(i) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        throw Error("schema", name + " entry (" + std::to_string(i) + ", " + std::to_string(c) +
                                  ") must be a [re, im] pair of numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  require_finite(m, what);
  return m;
}

}  // namespace ebcert

namespace ebcert {

namespace {

std::size_t require_count(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0)
    throw Error("schema", std::string("\"") + key + "\" must be a positive integer");
  return j[key].get<std::size_t>();
}

void require_shape(const ComplexMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != static_cast<Eigen::Index>(rows) || m.cols() != static_cast<Eigen::Index>(cols))
    throw Error("dimension", what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                 ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

nlohmann::json encode_state(const DensityMatrix& rho) {
  return {{"dim", rho.dim()}, {"matrix", encode_matrix(rho.matrix())}};
}

DensityMatrix decode_state(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("schema", "state file must be a JSON object");
  const std::size_t dim = require_count(j, "dim");
  if (!j.contains("matrix")) throw Error("schema", "state is missing \"matrix\"");
  const ComplexMatrix m = decode_matrix(j["matrix"], "state matrix");
  require_shape(m, dim, dim, "state matrix");
  return DensityMatrix(m);
}

nlohmann::json encode_channel(const Channel& c) {
  nlohmann::json j;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  if (c.is_holevo()) {
    j["kind"] = "holevo";
    nlohmann::json pairs = nlohmann::json::array();
    for (const EBPair& pair : c.holevo().pairs())
      pairs.push_back({{"R", encode_matrix(pair.state.matrix())}, {"X", encode_matrix(pair.effect)}});
    j["pairs"] = std::move(pairs);
  } else {
    j["kind"] = "kraus";
    nlohmann::json ops = nlohmann::json::array();
    for (const ComplexMatrix& a : c.kraus().ops()) ops.push_back(encode_matrix(a));
    j["kraus"] = std::move(ops);
  }
  return j;
}

Channel decode_channel(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("schema", "channel spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error("schema", "\"kind\" must be \"kraus\" or \"holevo\"");
  const std::string kind = j["kind"].get<std::string>();
  const std::size_t din = require_count(j, "dim_in");
  const std::size_t dout = require_count(j, "dim_out");
  const bool has_kraus = j.contains("kraus");
  const bool has_pairs = j.contains("pairs");
  if (has_kraus == has_pairs) throw Error("schema", "exactly one of \"kraus\" and \"pairs\" must be present");
  if (kind == "kraus") {
    if (!has_kraus) throw Error("schema", "kind \"kraus\" requires a \"kraus\" list");
    if (!j["kraus"].is_array()) throw Error("schema", "\"kraus\" must be a list of matrices");
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < j["kraus"].size(); ++k) {
      const std::string name = "kraus[" + std::to_string(k) + "]";
      ops.push_back(decode_matrix(j["kraus"][k], name.c_str()));
      require_shape(ops.back(), dout, din, name);
    }
    return KrausChannel(din, dout, std::move(ops));
  }
  if (kind == "holevo") {
    if (!has_pairs) throw Error("schema", "kind \"holevo\" requires a \"pairs\" list");
    if (!j["pairs"].is_array()) throw Error("schema", "\"pairs\" must be a list of {R, X} objects");
    std::vector<EBPair> pairs;
    for (std::size_t k = 0; k < j["pairs"].size(); ++k) {
      const auto& pj = j["pairs"][k];
      const std::string base = "pairs[" + std::to_string(k) + "]";
      if (!pj.is_object() || !pj.contains("R") || !pj.contains("X"))
        throw Error("schema", base + " must be an object with \"R\" and \"X\"");
      const ComplexMatrix r = decode_matrix(pj["R"], (base + ".R").c_str());
      const ComplexMatrix x = decode_matrix(pj["X"], (base + ".X").c_str());
      require_shape(r, dout, dout, base + ".R");
      require_shape(x, din, din, base + ".X");
      try {
        pairs.push_back({DensityMatrix(r), x});
      } catch (const Error& e) {
        throw Error(e.invariant(), base + ".R is not a density matrix (" + e.what() + ")");
      }
    }
    return HolevoEBChannel(din, dout, std::move(pairs));
  }
  throw Error("schema", "unknown channel kind \"" + kind + "\"");
}

}  // namespace ebcert
