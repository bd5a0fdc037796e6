#include "fjlim/instance.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fjlim/errors.hpp"
#include "fjlim/graph.hpp"

namespace fjlim {

namespace {

using nlohmann::json;

Matrix parse_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open matrix CSV file " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("matrix CSV " + path.string() + " row " +
                         std::to_string(rows.size()) + " entry " +
                         std::to_string(row.size()) + ": not a number: '" +
                         cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError("matrix CSV " + path.string() + " is empty");
  }
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ParseError("matrix CSV " + path.string() + " row " +
                       std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

Vector parse_vector(const json& node, const std::string& key) {
  if (!node.is_array()) {
    throw ParseError("key '" + key + "' must be an array of numbers");
  }
  Vector out(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      throw ParseError("key '" + key + "' entry " + std::to_string(i) +
                       " is not a number");
    }
    out(static_cast<Index>(i)) = node[i].get<double>();
  }
  return out;
}

Matrix parse_matrix(const json& node, const std::filesystem::path& base_dir) {
  if (node.is_string()) {
    return parse_csv_matrix(base_dir / node.get<std::string>());
  }
  if (!node.is_array() || node.empty()) {
    throw ParseError("key 'W' must be a nonempty array of row arrays or a CSV "
                     "path string");
  }
  const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
  Matrix out(node.size(), cols);
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_array()) {
      throw ParseError("W row " + std::to_string(i) + " is not an array");
    }
    if (node[i].size() != cols) {
      throw ParseError("W row " + std::to_string(i) + " has " +
                       std::to_string(node[i].size()) +
                       " entries, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!node[i][j].is_number()) {
        throw ParseError("W[" + std::to_string(i) + "][" + std::to_string(j) +
                         "] is not a number");
      }
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          node[i][j].get<double>();
    }
  }
  return out;
}

}  // namespace

Instance builtin_ex1() {
  Instance inst;
  inst.name = "ex1";
  inst.w = Matrix(4, 4);
  inst.w << 0.80, 0.10, 0.05, 0.05,  //
      0.30, 0.40, 0.20, 0.10,        //
      0.10, 0.10, 0.60, 0.20,        //
      0.10, 0.30, 0.30, 0.30;
  inst.sigma_tilde = Vector(4);
  inst.sigma_tilde << 0.5, 1.0, 0.2, 0.1;
  inst.y0 = Vector(4);
  *inst.y0 << 0.20, 0.50, 0.01, 0.29;
  return inst;
}

Instance builtin_ex2() {
  Instance inst;
  inst.name = "ex2";
  inst.w = Matrix(4, 4);
  inst.w << 0.0, 1.0, 0.0, 0.0,          //
      2.0 / 3.0, 0.0, 1.0 / 3.0, 0.0,    //
      0.0, 1.0 / 3.0, 0.0, 2.0 / 3.0,    //
      0.0, 0.0, 1.0, 0.0;
  inst.sigma_tilde = Vector(4);
  inst.sigma_tilde << 0.5, 1.0, 0.2, 0.1;
  // The reference run pairs this matrix with ex1's initial opinions and
  // sigma_max = 0.1.
  inst.y0 = Vector(4);
  *inst.y0 << 0.20, 0.50, 0.01, 0.29;
  inst.sigma_max = 0.1;
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open instance file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("instance file " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("instance file " + path + ": top level must be an object");
  }
  if (!doc.contains("W")) {
    throw ParseError("instance file " + path + ": missing key 'W'");
  }
  if (!doc.contains("sigma_tilde")) {
    throw ParseError("instance file " + path + ": missing key 'sigma_tilde'");
  }
  Instance inst;
  inst.name = path;
  const auto base_dir = std::filesystem::path(path).parent_path();
  inst.w = parse_matrix(doc["W"], base_dir);
  inst.sigma_tilde = parse_vector(doc["sigma_tilde"], "sigma_tilde");
  if (doc.contains("sigma_max")) {
    if (!doc["sigma_max"].is_number()) {
      throw ParseError("key 'sigma_max' must be a number");
    }
    inst.sigma_max = doc["sigma_max"].get<double>();
  }
  if (doc.contains("y0")) {
    inst.y0 = parse_vector(doc["y0"], "y0");
  }
  if (inst.sigma_tilde.size() != inst.w.rows()) {
    throw ParseError("sigma_tilde has " + std::to_string(inst.sigma_tilde.size()) +
                     " entries but W has " + std::to_string(inst.w.rows()) +
                     " rows");
  }
  if (inst.y0 && inst.y0->size() != inst.w.rows()) {
    throw ParseError("y0 has " + std::to_string(inst.y0->size()) +
                     " entries but W has " + std::to_string(inst.w.rows()) +
                     " rows");
  }
  return inst;
}

Instance load_instance(const std::string& name_or_path) {
  if (name_or_path == "ex1") return builtin_ex1();
  if (name_or_path == "ex2") return builtin_ex2();
  return parse_instance_file(name_or_path);
}

ValidationReport validate_instance(const Instance& instance,
                                   const ImmunityOptions& options) {
  ValidationReport report;
  const auto add = [&report](const std::string& name, bool ok,
                             bool is_assumption, const std::string& detail) {
    report.findings.push_back({name, ok, is_assumption, detail});
    if (is_assumption && !ok && report.violated.empty()) {
      report.assumptions_ok = false;
      report.violated = name;
    }
  };

  const Matrix& w = instance.w;
  bool square = w.rows() == w.cols() && w.rows() > 0;
  add("square", square, true,
      square ? "" : "W is " + std::to_string(w.rows()) + "x" +
                        std::to_string(w.cols()));

  bool nonneg = true;
  std::string nonneg_detail;
  bool stochastic = true;
  std::string stochastic_detail;
  if (square) {
    for (Index i = 0; i < w.rows() && nonneg; ++i) {
      for (Index j = 0; j < w.cols(); ++j) {
        if (!(w(i, j) >= 0.0) || !std::isfinite(w(i, j))) {
          nonneg = false;
          nonneg_detail = "entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") = " + std::to_string(w(i, j));
          break;
        }
      }
    }
    for (Index i = 0; i < w.rows(); ++i) {
      const double s = w.row(i).sum();
      if (std::abs(s - 1.0) > InfluenceMatrix::kRowSumTol) {
        stochastic = false;
        stochastic_detail =
            "row " + std::to_string(i) + " sums to " + std::to_string(s);
        break;
      }
    }
  } else {
    nonneg = stochastic = false;
  }
  add("nonnegative", nonneg, true, nonneg_detail);
  add("row_stochastic", stochastic, true, stochastic_detail);

  bool irreducible = false;
  if (square && nonneg) {
    const GraphPattern pattern = GraphPattern::from_matrix(w);
    irreducible = is_irreducible(pattern);
    add("irreducible", irreducible, true,
        irreducible ? "" : "nonzero pattern is not strongly connected");
    // Primitivity is reported, not assumed: periodic instances are valid.
    if (irreducible) {
      add("primitive", is_primitive(pattern), false, "");
    }
  } else {
    add("irreducible", false, true, "skipped: W malformed");
  }

  const Vector& p = instance.sigma_tilde;
  bool in_range = p.size() == w.rows() && p.size() > 0;
  std::string range_detail =
      in_range ? "" : "sigma_tilde length does not match W";
  for (Index i = 0; i < p.size() && in_range; ++i) {
    const bool positive = p(i) > 0.0 || (options.allow_zero && p(i) == 0.0);
    if (!std::isfinite(p(i)) || !positive || p(i) > 1.0) {
      in_range = false;
      range_detail =
          "sigma_tilde[" + std::to_string(i) + "] = " + std::to_string(p(i));
    }
  }
  add("sigma_tilde_in_range", in_range, true, range_detail);

  const double max_p = p.size() > 0 ? p.maxCoeff() : 0.0;
  const bool max_one = std::abs(max_p - 1.0) <= ImmunityProfile::kMaxCoeffTol ||
                       (options.renormalize && max_p > 0.0);
  add("sigma_tilde_max_is_one", max_one, true,
      max_one ? "" : "max coefficient is " + std::to_string(max_p));

  if (instance.sigma_max) {
    const double s = *instance.sigma_max;
    const bool ok = s > 0.0 && s <= 1.0 - options.epsilon;
    add("sigma_max_in_range", ok, true,
        ok ? "" : "sigma_max = " + std::to_string(s));
  }
  return report;
}

Instance random_instance(Rng& rng, int n) {
  Matrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w(i, j) = rng.u01();
    }
    const int ring = (i + 1) % n;
    w(i, ring) = std::max(w(i, ring), 0.05);
    w.row(i) /= w.row(i).sum();
  }
  Vector p(n);
  for (int i = 0; i < n; ++i) {
    p(i) = rng.open_closed(0.1, 1.0);
  }
  p(rng.index(n)) = 1.0;
  Vector y0(n);
  for (int i = 0; i < n; ++i) {
    y0(i) = rng.u01();
  }
  Instance inst;
  inst.name = "random";
  inst.w = std::move(w);
  inst.sigma_tilde = std::move(p);
  inst.y0 = std::move(y0);
  return inst;
}

Matrix random_row_bounded_matrix(Rng& rng, int n, double beta) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = 2.0 * rng.u01() - 1.0;
    }
    const double target = rng.open_closed(0.1 * beta, beta);
    const double norm = a.row(i).norm();
    if (norm > 0.0) {
      a.row(i) *= target / norm;
    } else {
      a(i, i) = target;  // astronomically unlikely all-zero row
    }
  }
  return a;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace fjlim
