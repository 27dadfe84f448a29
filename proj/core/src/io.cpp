// Copyright 2026 The rlcu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rlcu/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rlcu {

namespace {

using nlohmann::json;

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json parse_object(std::string_view text, const char* what) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string formula_to_json(const LcuFormula& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json term;
    term["prob"] = t.prob;
    if (t.unitary.is_pauli()) {
      term["phase"] = complex_json(t.unitary.phase() * t.unitary.pauli_string().phase());
      term["word"] = t.unitary.pauli_string().word();
    } else {
      term["phase"] = complex_json(t.unitary.phase());
      term["word"] = t.unitary.label();
    }
    if (f.kind() == LcuKind::kChannel) term["paired"] = t.paired;
    terms.push_back(std::move(term));
  }
  json out;
  out["mu"] = f.mu();
  out["kind"] = f.kind() == LcuKind::kUnitary ? "unitary" : "channel";
  out["truncation_error"] = f.truncation_error();
  out["terms"] = std::move(terms);
  return out.dump(2);
}

std::string filter_to_json(const GaussianFilterEnsemble& g, double gap) {
  json out;
  out["mu"] = 1.0;
  out["kind"] = "gaussian-filter";
  out["terms"] = json::array();
  out["tau"] = g.tau;
  out["omega"] = g.omega;
  out["gap"] = gap;
  out["x_distribution"] = "standard-normal";
  out["unitary"] = "exp(i x tau omega) exp(-i x tau H)";
  out["filter"] = "exp(-tau^2 (H - omega)^2 / 2)";
  return out.dump(2);
}

std::string matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_json(m(i, j)));
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out.dump();
}

Matrix matrix_from_json(std::string_view text) {
  const json j = parse_object(text, "matrix");
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw ParseError("matrix: data length does not match rows * cols");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from(data[static_cast<std::size_t>(i * cols + k)]);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

std::string shot_to_jsonl(const ShotRecord& s) {
  json out;
  out["instance_id"] = s.instance_id;
  out["b"] = s.b;
  out["a"] = s.a;
  out["weight"] = complex_json(s.weight);
  out["seed"] = s.seed;
  return out.dump();
}

ShotRecord shot_from_jsonl(std::string_view line) {
  const json j = parse_object(line, "shot record");
  try {
    ShotRecord s;
    s.instance_id = j.at("instance_id").get<std::string>();
    s.b = j.at("b").get<std::vector<int>>();
    s.a = j.at("a").get<std::vector<int>>();
    s.weight = complex_from(j.at("weight"));
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("shot record: ") + e.what());
  }
}

std::string snapshot_to_jsonl(const ShadowSnapshot& s) {
  json out;
  out["basis"] = s.basis;
  out["z"] = s.z;
  out["weight"] = complex_json(s.weight);
  out["norm"] = s.norm;
  return out.dump();
}

ShadowSnapshot snapshot_from_jsonl(std::string_view line) {
  const json j = parse_object(line, "snapshot");
  ShadowSnapshot s;
  try {
    s.basis = j.at("basis").get<std::string>();
    s.z = j.at("z").get<std::string>();
    s.weight = complex_from(j.at("weight"));
    s.norm = j.at("norm").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("snapshot: ") + e.what());
  }
  if (s.basis.size() != s.z.size()) throw ParseError("snapshot: basis and z lengths differ");
  for (char c : s.basis)
    if (c != 'X' && c != 'Y' && c != 'Z') throw ParseError("snapshot: invalid basis letter");
  for (char c : s.z)
    if (c != '0' && c != '1') throw ParseError("snapshot: invalid outcome bit");
  return s;
}

std::vector<ShadowSnapshot> load_snapshots(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot log " + path);
  std::vector<ShadowSnapshot> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(snapshot_from_jsonl(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace rlcu
