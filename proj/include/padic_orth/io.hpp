#pragma once

// JSON instance and corpus files.
//
// Rationals are strings in lowest terms ("3", "-1/2"); vectors are arrays of
// such strings; seeds are decimal strings so 64-bit values survive any JSON
// reader. Objects are written with sorted keys, so equal inputs serialize to
// identical bytes.
//
//   norm:     {"p": 2, "matrix": [[..], ..], "weights": [..], "weight_denominator": 1}
//   instance: {"format": "padic-orth-instance/1", "p", "n", "norm", "second_norm"?,
//              "basis", "target"?, "seed"?, "generation"?}
//   corpus:   {"format": "padic-orth-corpus/1", "seed", "count", "generation", "instances": [..]}

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "padic_orth/error.hpp"
#include "padic_orth/generator.hpp"
#include "padic_orth/linalg.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/rational.hpp"

namespace padic_orth::io {

using json = nlohmann::json;

inline constexpr const char* kInstanceFormat = "padic-orth-instance/1";
inline constexpr const char* kCorpusFormat = "padic-orth-corpus/1";

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

inline const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field '") + key + "'");
  return obj.at(key);
}

inline std::uint64_t unsigned_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned()) malformed(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::uint64_t parse_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_string()) malformed("seed must be a decimal string");
  const std::string s = v.get<std::string>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) malformed("bad seed '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    malformed("seed out of range '" + s + "'");
  }
}

}  // namespace detail

inline json to_json(const Rational& x) { return to_string(x); }

inline Rational rational_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump(), 10));
  detail::malformed("rationals must be strings like \"a/b\", got " + v.dump());
}

inline json to_json(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline QVector vector_from_json(const json& v) {
  if (!v.is_array() || v.empty()) detail::malformed("vectors must be nonempty arrays");
  QVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(rational_from_json(x));
  return out;
}

inline json to_json(const std::vector<QVector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline std::vector<QVector> vectors_from_json(const json& v) {
  if (!v.is_array()) detail::malformed("expected an array of vectors");
  std::vector<QVector> out;
  for (const auto& x : v) out.push_back(vector_from_json(x));
  return out;
}

inline json to_json(const QMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

/// {"w": "3/2", "value": "2^(-3/2)"}; the zero vector gives {"w": "inf", "value": "0"}.
inline json to_json(const NormExponent& w, const Prime& p) {
  return json{{"w", w.to_string()}, {"value", w.symbolic(p)}};
}

inline json to_json(const WeightedCoordinateNorm& norm) {
  return json{{"p", norm.prime().value()},
              {"matrix", to_json(norm.matrix())},
              {"weights", to_json(norm.weights())},
              {"weight_denominator", norm.value_denominator()}};
}

inline WeightedCoordinateNorm norm_from_json(const json& v,
                                             unsigned long max_weight_denominator = kDefaultMaxWeightDenominator) {
  const auto p = detail::unsigned_field(v, "p");
  const std::vector<QVector> rows = vectors_from_json(detail::field(v, "matrix"));
  const QVector weights = vector_from_json(detail::field(v, "weights"));
  const auto d = v.contains("weight_denominator") ? detail::unsigned_field(v, "weight_denominator") : 1;
  if (rows.empty() || rows.size() != rows.front().size()) detail::malformed("norm matrix must be square");
  return WeightedCoordinateNorm(Prime(p), QMatrix::from_rows(rows), weights, d, max_weight_denominator);
}

inline json to_json(const GenerationParams& g) {
  return json{{"p", g.p},
              {"n", g.n},
              {"weight_denominator", g.weight_denominator},
              {"entry_bound", g.entry_bound},
              {"rank", g.basis_size()},
              {"dual", g.dual}};
}

inline GenerationParams params_from_json(const json& v) {
  GenerationParams g;
  g.p = detail::unsigned_field(v, "p");
  g.n = detail::unsigned_field(v, "n");
  g.weight_denominator = detail::unsigned_field(v, "weight_denominator");
  g.entry_bound = static_cast<long>(detail::unsigned_field(v, "entry_bound"));
  g.rank = v.contains("rank") ? detail::unsigned_field(v, "rank") : 0;
  if (g.rank == g.n) g.rank = 0;
  g.dual = v.contains("dual") && v.at("dual").get<bool>();
  return g;
}

inline json to_json(const Instance& inst) {
  json j{{"format", kInstanceFormat},
         {"p", inst.prime().value()},
         {"n", inst.dimension()},
         {"norm", to_json(inst.norm)},
         {"basis", to_json(inst.basis)}};
  if (inst.second_norm) j["second_norm"] = to_json(*inst.second_norm);
  if (inst.target) j["target"] = to_json(*inst.target);
  if (inst.seed) j["seed"] = std::to_string(*inst.seed);
  if (inst.params) j["generation"] = to_json(*inst.params);
  return j;
}

inline Instance instance_from_json(const json& v, unsigned long max_weight_denominator = kDefaultMaxWeightDenominator) {
  if (!v.is_object()) detail::malformed("instance must be a JSON object");
  if (v.contains("format") && v.at("format") != kInstanceFormat) {
    detail::malformed("unknown instance format " + v.at("format").dump());
  }
  WeightedCoordinateNorm norm = norm_from_json(detail::field(v, "norm"), max_weight_denominator);
  const auto p = v.contains("p") ? detail::unsigned_field(v, "p") : norm.prime().value();
  const auto n = v.contains("n") ? detail::unsigned_field(v, "n") : norm.dimension();
  if (p != norm.prime().value()) detail::malformed("instance prime differs from the norm's prime");
  if (n != norm.dimension()) detail::malformed("instance dimension differs from the norm's dimension");

  Instance inst{std::move(norm), std::nullopt, vectors_from_json(detail::field(v, "basis")), std::nullopt,
                std::nullopt, std::nullopt};
  if (v.contains("second_norm")) {
    inst.second_norm = norm_from_json(v.at("second_norm"), max_weight_denominator);
    if (!(inst.second_norm->prime() == inst.norm.prime()) || inst.second_norm->dimension() != n) {
      detail::malformed("second norm must share p and n with the first");
    }
  }
  for (const auto& b : inst.basis) {
    if (b.size() != n) detail::malformed("basis vector of size " + std::to_string(b.size()) + ", expected " + std::to_string(n));
  }
  if (v.contains("target")) {
    inst.target = vector_from_json(v.at("target"));
    if (inst.target->size() != n) detail::malformed("target has the wrong size");
  }
  if (v.contains("seed")) inst.seed = detail::parse_seed(v.at("seed"));
  if (v.contains("generation")) inst.params = params_from_json(v.at("generation"));
  return inst;
}

inline json corpus_to_json(std::uint64_t seed, const GenerationParams& params, const std::vector<Instance>& instances) {
  json list = json::array();
  for (const auto& inst : instances) list.push_back(to_json(inst));
  return json{{"format", kCorpusFormat},
              {"seed", std::to_string(seed)},
              {"count", instances.size()},
              {"generation", to_json(params)},
              {"instances", std::move(list)}};
}

/// Accepts a single instance object or a corpus.
inline std::vector<Instance> instances_from_json(const json& v,
                                                 unsigned long max_weight_denominator = kDefaultMaxWeightDenominator) {
  std::vector<Instance> out;
  if (v.is_object() && v.contains("instances")) {
    if (v.contains("format") && v.at("format") != kCorpusFormat) {
      detail::malformed("unknown corpus format " + v.at("format").dump());
    }
    const json& list = v.at("instances");
    if (!list.is_array()) detail::malformed("'instances' must be an array");
    for (const auto& item : list) out.push_back(instance_from_json(item, max_weight_denominator));
  } else {
    out.push_back(instance_from_json(v, max_weight_denominator));
  }
  return out;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    detail::malformed(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace padic_orth::io
