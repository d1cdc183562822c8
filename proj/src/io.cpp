#include "fusion/io.hpp"

#include "fusion/numkernel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fusion {

namespace {

constexpr double kOrthonormalTol = 1e-12;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInput(path + ": " + what);
}

double parse_real(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "value is not finite");
  return x;
}

const Json& member(const Json& doc, const char* key, const std::string& path) {
  if (!doc.is_object()) fail(path.empty() ? "document" : path, "expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Index parse_ambient(const Json& doc) {
  const Json& j = member(doc, "ambient_dim", "");
  if (!j.is_number_integer()) fail("ambient_dim", "expected an integer");
  const auto n = j.get<long long>();
  if (n < 1 || n > kMaxAmbientDim) fail("ambient_dim", "must be in [1, " + std::to_string(kMaxAmbientDim) + "]");
  return static_cast<Index>(n);
}

double parse_weight(const Json& j, const std::string& path) {
  const double w = parse_real(j, path);
  if (w <= 0.0) fail(path, "weight must be > 0");
  return w;
}

template <FieldScalar S>
Json scalar_json(const S& x) {
  if constexpr (is_complex_v<S>) {
    return Json::array({x.real(), x.imag()});
  } else {
    return x;
  }
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string document_field(const Json& doc) {
  if (!doc.is_object()) fail("document", "expected an object");
  const auto it = doc.find("field");
  if (it == doc.end()) return "real";
  if (!it->is_string() || (*it != "real" && *it != "complex")) fail("field", "expected \"real\" or \"complex\"");
  return it->get<std::string>();
}

template <FieldScalar S>
S parse_scalar(const Json& j, const std::string& path) {
  if constexpr (is_complex_v<S>) {
    if (j.is_number()) return S(parse_real(j, path), 0.0);
    if (!j.is_array() || j.size() != 2) fail(path, "expected a number or [re, im]");
    return S(parse_real(j[0], at(path, 0)), parse_real(j[1], at(path, 1)));
  } else {
    if (j.is_array()) fail(path, "complex entry in a real document");
    return parse_real(j, path);
  }
}

template <FieldScalar S>
Vector<S> parse_vector(const Json& j, const std::string& path, Index n) {
  if (!j.is_array()) fail(path, "expected an array");
  if (n >= 0 && static_cast<Index>(j.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
  }
  Vector<S> v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = parse_scalar<S>(j[k], at(path, k));
  return v;
}

template <FieldScalar S>
Matrix<S> parse_vector_list(const Json& j, const std::string& path, Index n, bool allow_empty) {
  if (!j.is_array()) fail(path, "expected an array of vectors");
  if (j.empty() && !allow_empty) fail(path, "expected at least one vector");
  Matrix<S> m(n, static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) m.col(static_cast<Index>(k)) = parse_vector<S>(j[k], at(path, k), n);
  return m;
}

template <FieldScalar S>
Matrix<S> parse_square_matrix(const Json& j, const std::string& path, Index n) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) fail(path, "expected " + std::to_string(n) + " rows");
  Matrix<S> m(n, n);
  for (std::size_t r = 0; r < j.size(); ++r) m.row(static_cast<Index>(r)) = parse_vector<S>(j[r], at(path, r), n).transpose();
  return m;
}

template <FieldScalar S>
Json to_json(const Vector<S>& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(scalar_json<S>(v(k)));
  return out;
}

template <FieldScalar S>
Json columns_to_json(const Matrix<S>& m) {
  Json out = Json::array();
  for (Index c = 0; c < m.cols(); ++c) out.push_back(to_json<S>(m.col(c)));
  return out;
}

template <FieldScalar S>
Json rows_to_json(const Matrix<S>& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(to_json<S>(m.row(r).transpose()));
  return out;
}

Json to_json(const RealVector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

template <FieldScalar S>
LoadedFamily<S> parse_family(const Json& doc) {
  document_field(doc);
  const Index n = parse_ambient(doc);
  const Json& subs = member(doc, "subspaces", "");
  if (!subs.is_array()) fail("subspaces", "expected an array");
  LoadedFamily<S> out{WeightedFamily<S>(n), {}};
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string p = at("subspaces", i);
    const double w = parse_weight(member(subs[i], "weight", p), join(p, "weight"));
    const Matrix<S> b = parse_vector_list<S>(member(subs[i], "basis", p), join(p, "basis"), n, true);
    if (b.cols() == 0) {
      out.family.add(Subspace<S>::zero(n), w);
      continue;
    }
    const double defect = (b.adjoint() * b - Matrix<S>::Identity(b.cols(), b.cols())).norm();
    if (defect <= kOrthonormalTol) {
      out.family.add(Subspace<S>::from_orthonormal(b, kOrthonormalTol), w);
    } else {
      out.family.add(Subspace<S>::from_spanning(b), w);
      out.reorthonormalized.push_back(i);
    }
  }
  return out;
}

template <FieldScalar S>
Json serialize_family(const WeightedFamily<S>& fam) {
  Json subs = Json::array();
  for (const auto& it : fam) subs.push_back({{"weight", it.weight}, {"basis", columns_to_json<S>(it.subspace.basis())}});
  return {{"ambient_dim", fam.ambient_dim()}, {"field", is_complex_v<S> ? "complex" : "real"}, {"subspaces", subs}};
}

template <FieldScalar S>
std::vector<WeightedLocal<S>> parse_locals(const Json& doc) {
  document_field(doc);
  const Index n = parse_ambient(doc);
  const Json& ls = member(doc, "locals", "");
  if (!ls.is_array() || ls.empty()) fail("locals", "expected a nonempty array");
  std::vector<WeightedLocal<S>> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string p = at("locals", i);
    WeightedLocal<S> wl;
    wl.weight = ls[i].contains("weight") ? parse_weight(ls[i]["weight"], join(p, "weight")) : 1.0;
    wl.local.vectors = parse_vector_list<S>(member(ls[i], "vectors", p), join(p, "vectors"), n);
    if (ls[i].contains("subspace")) {
      wl.local.subspace_hint = Subspace<S>::from_spanning(parse_vector_list<S>(ls[i]["subspace"], join(p, "subspace"), n));
    }
    if (ls[i].contains("lower")) wl.local.lower_claim = parse_real(ls[i]["lower"], join(p, "lower"));
    if (ls[i].contains("upper")) wl.local.upper_claim = parse_real(ls[i]["upper"], join(p, "upper"));
    out.push_back(std::move(wl));
  }
  return out;
}

template <FieldScalar S>
PartitionInput<S> parse_partition(const Json& doc) {
  document_field(doc);
  const Index n = parse_ambient(doc);
  PartitionInput<S> out;
  out.vectors = parse_vector_list<S>(member(doc, "vectors", ""), "vectors", n);
  const Json& cells = member(doc, "partition", "");
  if (!cells.is_array()) fail("partition", "expected an array of index lists");
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cells[c].is_array()) fail(at("partition", c), "expected an array of indices");
    std::vector<Index> cell;
    for (std::size_t k = 0; k < cells[c].size(); ++k) {
      const Json& e = cells[c][k];
      if (!e.is_number_integer()) fail(at(at("partition", c), k), "expected an integer index");
      cell.push_back(static_cast<Index>(e.get<long long>()));
    }
    out.partition.push_back(std::move(cell));
  }
  try {
    validate_partition(out.partition, out.vectors.cols());
  } catch (const InvalidInput& e) {
    fail("partition", e.what());
  }
  return out;
}

template <FieldScalar S>
Vector<S> parse_vector_document(const Json& doc, Index n) {
  if (doc.is_object()) return parse_vector<S>(member(doc, "vector", ""), "vector", n);
  return parse_vector<S>(doc, "vector", n);
}

template <FieldScalar S>
Matrix<S> parse_vectors_document(const Json& doc, Index n) {
  if (doc.is_object()) return parse_vector_list<S>(member(doc, "vectors", ""), "vectors", n);
  return parse_vector_list<S>(doc, "vectors", n);
}

Json to_json(const Inequality& q) {
  return {{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"slack", q.slack}, {"pass", q.pass}, {"proven", q.proven}};
}

Json to_json(const std::vector<Inequality>& qs) {
  Json out = Json::array();
  for (const auto& q : qs) out.push_back(to_json(q));
  return out;
}

Json to_json(const BoundsReport& b) {
  return {{"C", b.lower}, {"D", b.upper}};
}

std::string dump(const Json& j) {
  return j.dump(2);
}

#define FUSION_INSTANTIATE_IO(S)                                                             \
  template S parse_scalar<S>(const Json&, const std::string&);                               \
  template Vector<S> parse_vector<S>(const Json&, const std::string&, Index);                \
  template Matrix<S> parse_vector_list<S>(const Json&, const std::string&, Index, bool);     \
  template Matrix<S> parse_square_matrix<S>(const Json&, const std::string&, Index);         \
  template Json to_json<S>(const Vector<S>&);                                                \
  template Json columns_to_json<S>(const Matrix<S>&);                                        \
  template Json rows_to_json<S>(const Matrix<S>&);                                           \
  template LoadedFamily<S> parse_family<S>(const Json&);                                     \
  template Json serialize_family<S>(const WeightedFamily<S>&);                               \
  template std::vector<WeightedLocal<S>> parse_locals<S>(const Json&);                       \
  template PartitionInput<S> parse_partition<S>(const Json&);                                \
  template Vector<S> parse_vector_document<S>(const Json&, Index);                           \
  template Matrix<S> parse_vectors_document<S>(const Json&, Index);

FUSION_INSTANTIATE_IO(double)
FUSION_INSTANTIATE_IO(cdouble)

}  // namespace fusion
