#pragma once

#include "fusion/assembly.hpp"
#include "fusion/certificate.hpp"
#include "fusion/fusion_frame.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fusion {

using Json = nlohmann::json;

// JSON documents. Vectors are arrays of entries; a complex entry is [re, im]
// (plain numbers are accepted as real). A list of vectors is stored as an
// array of vectors, i.e. the columns of the matrix they form. Errors throw
// InvalidInput naming the offending field, e.g. "subspaces[1].weight".

/// Reads and parses a file; syntax errors report the byte offset.
Json load_json_file(const std::string& path);

/// "real" or "complex"; defaults to "real" when absent.
std::string document_field(const Json& doc);

template <FieldScalar S>
S parse_scalar(const Json& j, const std::string& path);

/// A vector of length `n` (n < 0 accepts any length).
template <FieldScalar S>
Vector<S> parse_vector(const Json& j, const std::string& path, Index n = -1);

/// A nonempty list of vectors of length `n`, returned as columns.
template <FieldScalar S>
Matrix<S> parse_vector_list(const Json& j, const std::string& path, Index n, bool allow_empty = false);

/// A square matrix given as an array of rows.
template <FieldScalar S>
Matrix<S> parse_square_matrix(const Json& j, const std::string& path, Index n);

template <FieldScalar S>
Json to_json(const Vector<S>& v);

/// Columns as an array of vectors.
template <FieldScalar S>
Json columns_to_json(const Matrix<S>& m);

/// Rows as an array of row arrays.
template <FieldScalar S>
Json rows_to_json(const Matrix<S>& m);

Json to_json(const RealVector& v);

template <FieldScalar S>
struct LoadedFamily {
  WeightedFamily<S> family;
  std::vector<std::size_t> reorthonormalized;  // subspaces whose basis was not orthonormal to 1e-12
};

/// {"ambient_dim", "field", "subspaces": [{"weight", "basis": [vectors]}]}
template <FieldScalar S>
LoadedFamily<S> parse_family(const Json& doc);

template <FieldScalar S>
Json serialize_family(const WeightedFamily<S>& fam);

/// {"ambient_dim", "field", "locals": [{"weight", "vectors", "subspace"?, "lower"?, "upper"?}]}
template <FieldScalar S>
std::vector<WeightedLocal<S>> parse_locals(const Json& doc);

/// {"ambient_dim", "field", "vectors", "partition": [[indices]]}
template <FieldScalar S>
struct PartitionInput {
  Matrix<S> vectors;
  std::vector<std::vector<Index>> partition;
};

template <FieldScalar S>
PartitionInput<S> parse_partition(const Json& doc);

/// {"vector": [...]} or a bare array.
template <FieldScalar S>
Vector<S> parse_vector_document(const Json& doc, Index n);

/// {"vectors": [...]} or a bare array of vectors.
template <FieldScalar S>
Matrix<S> parse_vectors_document(const Json& doc, Index n);

Json to_json(const Inequality& q);
Json to_json(const std::vector<Inequality>& qs);
Json to_json(const BoundsReport& b);

/// Pretty-printed with shortest round-trip number formatting.
std::string dump(const Json& j);

}  // namespace fusion
