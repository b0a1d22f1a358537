// Command-line front end: JSON matrices in, JSON reports out.
//
// Exit codes: 0 positive result, 1 negative mathematical verdict,
// 2 invalid input, 3 undecided.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "markov/analysis.hpp"
#include "markov/embedding.hpp"
#include "markov/equal_input.hpp"
#include "markov/errors.hpp"
#include "markov/matrix.hpp"
#include "markov/monotone.hpp"
#include "markov/spectrum.hpp"

namespace {

using json = nlohmann::ordered_json;
using markov::Matrix;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUndecided = 3;

struct CliError {
  int code;
  std::string message;
};

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadedMatrix {
  Matrix m;
  std::string digest;
};

LoadedMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInvalid, "cannot open " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const std::exception& e) {
    throw CliError{kExitInvalid, path + ": JSON parse failure: " + e.what()};
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw CliError{kExitInvalid, path + ": expected an object with a \"rows\" array"};
  const json& rows = doc["rows"];
  const int d = static_cast<int>(rows.size());
  if (d < 1) throw CliError{kExitInvalid, path + ": empty matrix"};
  Matrix m(d);
  for (int i = 0; i < d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
      throw CliError{kExitInvalid, path + ": matrix is not square"};
    for (int j = 0; j < d; ++j) {
      if (!rows[i][j].is_number())
        throw CliError{kExitInvalid, path + ": non-numeric entry"};
      m(i, j) = rows[i][j].get<double>();
    }
  }
  if (!m.all_finite()) throw CliError{kExitInvalid, path + ": non-finite entry"};
  return {std::move(m), fnv1a_digest(bytes)};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"rows", std::move(rows)}};
}

json input_json(const std::string& path, const LoadedMatrix& lm) {
  return json{{"path", path}, {"digest", lm.digest}, {"dim", lm.m.dim()}};
}

json report_shell(const std::string& command, double tol) {
  json r;
  r["command"] = command;
  r["tolerance"] = tol;
  r["warnings"] = json::array();
  return r;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json classify_payload(const Matrix& m, double tol) {
  const markov::ClassificationReport cls = markov::classify(m, tol);
  const markov::Spectrum spec = markov::spectrum(m);
  const markov::StructureInfo st = markov::structure(m, tol);

  json eig = json::array();
  for (const auto& v : spec.eigenvalues)
    eig.push_back(json{{"re", v.real()}, {"im", v.imag()}});
  json clusters = json::array();
  for (const auto& c : spec.clusters)
    clusters.push_back(json{{"re", c.value.real()},
                            {"im", c.value.imag()},
                            {"algebraic", c.algebraic},
                            {"geometric", c.geometric}});

  json out;
  out["classification"] = {{"is_markov", cls.is_markov},
                           {"is_generator", cls.is_generator},
                           {"is_idempotent", cls.is_idempotent},
                           {"is_doubly_stochastic", cls.is_doubly_stochastic},
                           {"det", cls.det},
                           {"trace", cls.trace}};
  out["spectrum"] = {{"eigenvalues", std::move(eig)}, {"clusters", std::move(clusters)}};
  out["structure"] = {{"min_poly_degree", st.min_poly_degree},
                      {"cyclic", st.cyclic},
                      {"simple", st.simple},
                      {"diagonalizable", st.diagonalizable},
                      {"low_confidence", st.low_confidence}};
  if (cls.is_markov)
    out["monotone"] = markov::monotone::is_monotone(m, tol);
  else if (cls.is_generator)
    out["monotone_generator"] = markov::monotone::is_monotone_generator(m, tol);

  const auto ei = markov::equal_input::detect(m, tol);
  json ej;
  ej["detected"] = ei.has_value();
  if (ei) {
    ej["kind"] = (ei->kind == markov::equal_input::Kind::matrix) ? "matrix" : "generator";
    ej["c"] = ei->sum();
    ej["c_vec"] = ei->c_vec;
  }
  out["equal_input"] = std::move(ej);
  return out;
}

json verdict_json(const markov::EmbedVerdict& v) {
  json out;
  out["status"] = markov::to_string(v.status);
  if (v.method) out["method"] = markov::to_string(*v.method);
  if (v.generator) out["generator"] = matrix_json(*v.generator);
  out["unique_in_zero_row_sum_algebra"] = v.unique_in_zero_row_sum_algebra;
  out["monotone_generator"] = v.monotone_generator;
  out["reason"] = v.reason;
  return out;
}

int verdict_exit(const markov::EmbedVerdict& v) {
  switch (v.status) {
    case markov::EmbedStatus::Embeddable: return kExitOk;
    case markov::EmbedStatus::NonEmbeddable: return kExitNegative;
    default: return kExitUndecided;
  }
}

std::vector<std::string> each_paths(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

int run_classify(const std::string& path, double tol, bool each) {
  if (!each) {
    const LoadedMatrix lm = load_matrix(path);
    json report = report_shell("classify", tol);
    report["input"] = input_json(path, lm);
    report["result"] = classify_payload(lm.m, tol);
    emit(report);
    return kExitOk;
  }
  json report = report_shell("classify", tol);
  report["inputs"] = json::array();
  for (const std::string& f : each_paths(path)) {
    const LoadedMatrix lm = load_matrix(f);
    json entry;
    entry["input"] = input_json(f, lm);
    entry["result"] = classify_payload(lm.m, tol);
    report["inputs"].push_back(std::move(entry));
  }
  emit(report);
  return kExitOk;
}

int run_embed(const std::string& path, double tol) {
  const LoadedMatrix lm = load_matrix(path);
  json report = report_shell("embed", tol);
  report["input"] = input_json(path, lm);
  markov::EmbedVerdict v;
  try {
    v = markov::embedding::embed_verdict(lm.m, tol);
  } catch (const markov::NotStochastic&) {
    throw CliError{kExitInvalid, path + ": input is not a Markov matrix"};
  }
  report["result"] = verdict_json(v);
  if (v.reason.find("clamped") != std::string::npos)
    report["warnings"].push_back("generator off-diagonal entries were clamped to zero");
  emit(report);
  return verdict_exit(v);
}

int run_decompose(const std::string& path, const std::string& basis, double tol) {
  const LoadedMatrix lm = load_matrix(path);
  json report = report_shell("decompose", tol);
  report["input"] = input_json(path, lm);
  json result;
  result["basis"] = basis;
  if (basis == "monotone") {
    markov::monotone::Decomposition dec;
    try {
      dec = markov::monotone::decompose(lm.m, tol);
    } catch (const markov::NotMonotone&) {
      std::cerr << "markov decompose: matrix is not monotone\n";
      return kExitNegative;
    } catch (const markov::NotLevel&) {
      std::cerr << "markov decompose: row sums are not equal\n";
      return kExitNegative;
    }
    result["row_sum"] = dec.weight_sum();
    json terms = json::array();
    for (const auto& t : dec.terms)
      terms.push_back(json{{"weight", t.weight}, {"index", t.index.indices}});
    result["terms"] = std::move(terms);
  } else if (basis == "equal-input") {
    markov::equal_input::Decomposition dec;
    try {
      dec = markov::equal_input::decompose(lm.m, tol);
    } catch (const markov::NotEqualInput&) {
      std::cerr << "markov decompose: matrix is not equal-input\n";
      return kExitNegative;
    }
    result["identity_weight"] = dec.identity_weight;
    result["g_weight"] = dec.g_weight;
    result["column_weights"] = dec.column_weights;
  } else {
    throw CliError{kExitInvalid, "unknown basis " + basis};
  }
  report["result"] = std::move(result);
  emit(report);
  return kExitOk;
}

int run_root(const std::string& path, long long n, double tol) {
  const LoadedMatrix lm = load_matrix(path);
  json report = report_shell("root", tol);
  report["input"] = input_json(path, lm);
  Matrix root(0);
  std::string method;
  try {
    if (lm.m.dim() == 2) {
      root = markov::embedding::root2(lm.m, n);
      method = "kendall2";
    } else {
      root = markov::equal_input::root(lm.m, n, tol);
      method = "equal_input";
    }
  } catch (const markov::NotMonotone&) {
    std::cerr << "markov root: no monotone root (tr < 1)\n";
    return kExitNegative;
  } catch (const markov::NoEqualInputRoot&) {
    std::cerr << "markov root: no equal-input root exists (c > 1)\n";
    return kExitNegative;
  } catch (const markov::NotEqualInput&) {
    std::cerr << "markov root: matrix is not equal-input\n";
    return kExitNegative;
  }
  report["result"] = json{{"n", n}, {"method", method}, {"root", matrix_json(root)}};
  emit(report);
  return kExitOk;
}

int run_bch(const std::string& path1, const std::string& path2, double tol) {
  const LoadedMatrix lm1 = load_matrix(path1);
  const LoadedMatrix lm2 = load_matrix(path2);
  const auto p1 = markov::equal_input::detect(lm1.m, tol);
  const auto p2 = markov::equal_input::detect(lm2.m, tol);
  if (!p1 || p1->kind != markov::equal_input::Kind::generator)
    throw CliError{kExitInvalid, path1 + ": not an equal-input generator"};
  if (!p2 || p2->kind != markov::equal_input::Kind::generator)
    throw CliError{kExitInvalid, path2 + ": not an equal-input generator"};
  const markov::equal_input::Params combined = markov::equal_input::bch(*p1, *p2);
  json report = report_shell("bch", tol);
  report["inputs"] = json::array({input_json(path1, lm1), input_json(path2, lm2)});
  report["result"] = json{{"c_vec", combined.c_vec},
                          {"c", combined.sum()},
                          {"generator", matrix_json(markov::equal_input::make(combined))}};
  emit(report);
  return kExitOk;
}

int run_extremals(int d, bool monotone_only) {
  json report = report_shell("extremals", 0.0);
  json indices = json::array();
  long long count = 0;
  if (monotone_only) {
    for (const auto& e : markov::monotone::monotone_extremals(d)) {
      indices.push_back(e.indices);
      ++count;
    }
  } else {
    if (d > 6) throw CliError{kExitInvalid, "full extremal enumeration is capped at d = 6"};
    std::vector<int> tuple(d, 1);
    while (true) {
      indices.push_back(tuple);
      ++count;
      int pos = d - 1;
      while (pos >= 0 && tuple[pos] == d) {
        tuple[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++tuple[pos];
    }
  }
  report["result"] = json{{"d", d}, {"monotone", monotone_only}, {"count", count},
                          {"indices", std::move(indices)}};
  emit(report);
  return kExitOk;
}

int run_poisson(const std::string& p0_path, const std::string& p_path, double s, double tol) {
  const LoadedMatrix p0 = load_matrix(p0_path);
  const LoadedMatrix p = load_matrix(p_path);
  markov::embedding::DivisibleResult res;
  try {
    res = markov::embedding::divisible_construct(p0.m, p.m, s, tol);
  } catch (const markov::InvalidFamily& e) {
    throw CliError{kExitInvalid, std::string("invalid (P0, P) family: ") + e.what()};
  } catch (const markov::DimMismatch&) {
    throw CliError{kExitInvalid, "P0 and P have different dimensions"};
  }
  json report = report_shell("poisson", tol);
  report["inputs"] = json::array({input_json(p0_path, p0), input_json(p_path, p)});
  report["result"] = json{{"s", s},
                          {"m", matrix_json(res.m)},
                          {"embeddable", res.embeddable},
                          {"p0_is_identity", res.embeddable}};
  emit(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equal-input and monotone Markov matrix toolbox"};
  app.require_subcommand(1);
  double tol = markov::kDefaultTol;
  app.add_option("--tol", tol, "classification tolerance (default 1e-9)")->capture_default_str();

  std::string path, path2, basis = "monotone";
  long long n = 2;
  int dim = 3;
  double s = 1.0;
  bool each = false, monotone_only = false;

  CLI::App* c_classify = app.add_subcommand("classify", "full classification report");
  c_classify->add_option("path", path, "matrix JSON file (or directory with --each)")->required();
  c_classify->add_flag("--each", each, "treat path as a directory of .json matrices");

  CLI::App* c_embed = app.add_subcommand("embed", "embeddability verdict and generator");
  c_embed->add_option("path", path)->required();

  CLI::App* c_dec = app.add_subcommand("decompose", "extremal convex decomposition");
  c_dec->add_option("path", path)->required();
  c_dec->add_option("--basis", basis, "monotone | equal-input")->capture_default_str();

  CLI::App* c_root = app.add_subcommand("root", "monotone Markov n-th root");
  c_root->add_option("path", path)->required();
  c_root->add_option("-n", n, "root order")->required();

  CLI::App* c_bch = app.add_subcommand("bch", "combine two equal-input generators");
  c_bch->add_option("path1", path)->required();
  c_bch->add_option("path2", path2)->required();

  CLI::App* c_ext = app.add_subcommand("extremals", "list {0,1} extremal index tuples");
  c_ext->add_option("-d", dim, "dimension")->required();
  c_ext->add_flag("--monotone", monotone_only, "only monotone (non-decreasing) tuples");

  CLI::App* c_poi = app.add_subcommand("poisson", "Poisson-type family member M(s)");
  c_poi->add_option("--p0", path, "idempotent Markov matrix JSON")->required();
  c_poi->add_option("--p", path2, "commuting Markov matrix JSON")->required();
  c_poi->add_option("-s", s, "time parameter")->capture_default_str();

  // Global options like --tol may follow the subcommand.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_classify->parsed()) return run_classify(path, tol, each);
    if (c_embed->parsed()) return run_embed(path, tol);
    if (c_dec->parsed()) return run_decompose(path, basis, tol);
    if (c_root->parsed()) return run_root(path, n, tol);
    if (c_bch->parsed()) return run_bch(path, path2, tol);
    if (c_ext->parsed()) return run_extremals(dim, monotone_only);
    if (c_poi->parsed()) return run_poisson(path, path2, s, tol);
  } catch (const CliError& e) {
    std::cerr << "markov: " << e.message << "\n";
    return e.code;
  } catch (const markov::Error& e) {
    std::cerr << "markov: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "markov: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
