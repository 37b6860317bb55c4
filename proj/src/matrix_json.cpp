#include "qheat/matrix_json.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qheat/error.hpp"

namespace qheat {
namespace {

using nlohmann::json;

void read_part(const json& rows, Eigen::Index n, bool imaginary, CMatrix& m) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw InvalidInput("matrix JSON: expected " + std::to_string(n) + " rows");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidInput("matrix JSON: row " + std::to_string(i) + " must have " +
                         std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw InvalidInput("matrix JSON: non-numeric entry");
      const double x = v.get<double>();
      if (imaginary) {
        m(i, j).imag(x);
      } else {
        m(i, j).real(x);
      }
    }
  }
}

}  // namespace

CMatrix matrix_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("re")) {
    throw InvalidInput("matrix JSON: expected an object with \"dim\" and \"re\"");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() <= 0) {
    throw InvalidInput("matrix JSON: \"dim\" must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["dim"].get<long long>());
  CMatrix m = CMatrix::Zero(n, n);
  read_part(doc["re"], n, false, m);
  if (doc.contains("im")) read_part(doc["im"], n, true, m);
  return m;
}

std::string matrix_to_json_text(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  json doc = {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
  return doc.dump();
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return matrix_from_json_text(buf.str());
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << matrix_to_json_text(m) << '\n';
}

}  // namespace qheat
