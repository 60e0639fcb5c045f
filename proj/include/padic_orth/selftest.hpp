#pragma once

// The acceptance suite: eight exact, seeded checks over generated corpora.
// Shared by the acceptance test binary and `padic_orth selftest`.

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "padic_orth/generator.hpp"
#include "padic_orth/lattice.hpp"
#include "padic_orth/norm.hpp"
#include "padic_orth/oracle.hpp"
#include "padic_orth/orthogonalize.hpp"
#include "padic_orth/random.hpp"

namespace padic_orth::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::uint64_t passed_cases = 0;
  std::uint64_t total_cases = 0;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::uint64_t seed = 0x5eed2024ULL;
};

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << "AC" << r.id << " " << r.name << ": " << r.passed_cases << "/"
     << r.total_cases;
  if (!r.detail.empty()) os << " (" << r.detail << ")";
  os << " [" << r.seconds << " s]";
  return os.str();
}

namespace detail {

inline constexpr unsigned long kPrimes[] = {2, 3, 5};

inline std::vector<QVector> normalized(const WeightedCoordinateNorm& norm, const std::vector<QVector>& basis) {
  std::vector<QVector> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(normalize_vector(norm, b).vector);
  return out;
}

inline QVector random_integer_vector(Rng& rng, std::size_t n, long bound) {
  for (;;) {
    QVector v(n);
    for (auto& x : v) x = static_cast<long>(uniform_int(rng, -bound, bound));
    if (!is_zero(v)) return v;
  }
}

inline Rational random_nonzero_rational(Rng& rng, long bound) {
  for (;;) {
    const long num = static_cast<long>(uniform_int(rng, -bound, bound));
    const long den = static_cast<long>(uniform_int(rng, 1, bound));
    if (num == 0) continue;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
}

inline QVector random_rational_vector(Rng& rng, std::size_t n, long bound) {
  QVector v(n);
  for (auto& x : v) {
    x = uniform_below(rng, 4) == 0 ? Rational(0) : random_nonzero_rational(rng, bound);
  }
  return v;
}

template <class Body>
CriterionResult timed(int id, std::string name, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Solver/oracle node counts for one closest-vector instance.
struct CvpPair {
  std::size_t n = 0;
  std::uint64_t pruned_nodes = 0;
  std::uint64_t exhaustive_nodes = 0;
};

}  // namespace detail

/// 200 instances, p in {2,3,5}, n in {2,3,4}, d in {1,2}, entries <= 50:
/// orthogonalize passes the determinant criterion, the sampled criterion
/// (500 trials, depth 5), and has an invertible change of basis; < 300 s.
inline CriterionResult orthogonalization_correctness(const Options& opt) {
  return detail::timed(1, "orthogonalization correctness", [&](CriterionResult& r) {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < 200; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 2 + (k / 3) % 3;
      g.weight_denominator = 1 + (k / 9) % 2;
      g.entry_bound = 50;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac1, k), g);
      const OrthogonalBasisReport rep = orthogonalize(inst.norm, inst.basis);
      const bool exact = oracle::check_orthogonal_determinant(inst.norm, rep.vectors).orthogonal;
      const bool sampled = check_orthogonal_sampled(inst.norm, rep.vectors, 500, 5).orthogonal;
      const bool invertible = sgn(det(rep.change_of_basis)) != 0;
      ++r.total_cases;
      if (exact && sampled && invertible) ++r.passed_cases;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = r.passed_cases == r.total_cases && elapsed < 300.0;
    if (elapsed >= 300.0) r.detail = "runtime over 300 s";
  });
}

/// 100 instances with n <= 3, p <= 3: the pruned search and the exhaustive
/// oracle agree on distance and representative. Node counts go to `pairs`.
inline CriterionResult cvp_oracle_equivalence(const Options& opt, std::vector<detail::CvpPair>& pairs) {
  return detail::timed(2, "CVP oracle equivalence", [&](CriterionResult& r) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      GenerationParams g;
      g.p = 2 + k % 2;
      g.n = 2 + (k / 2) % 2;
      g.weight_denominator = 1 + (k / 4) % 2;
      g.entry_bound = 50;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac2, k), g);
      const std::vector<QVector> basis = detail::normalized(inst.norm, inst.basis);
      const PAdicLattice lattice(inst.prime(), std::vector<QVector>(basis.begin() + 1, basis.end()));
      const CVPResult fast = solve_cvp(inst.norm, lattice, basis.front());
      const CVPResult slow = oracle::exhaustive_cvp(inst.norm, lattice, basis.front());
      ++r.total_cases;
      if (fast.distance == slow.distance && fast.coefficients == slow.coefficients) ++r.passed_cases;
      pairs.push_back({g.n, fast.stats.nodes_explored, slow.stats.nodes_explored});
    }
    r.passed = r.passed_cases == r.total_cases;
  });
}

/// 100 dual-norm instances, n <= 3: orthogonalize_simultaneous passes the
/// determinant criterion under both norms, and its first vector has a ratio
/// exponent no larger than 500 random vectors'.
inline CriterionResult simultaneous_orthogonalization(const Options& opt) {
  return detail::timed(3, "simultaneous orthogonalization", [&](CriterionResult& r) {
    std::uint64_t beaten = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 2 + (k / 3) % 2;
      g.weight_denominator = 1 + (k / 6) % 2;
      g.entry_bound = 50;
      g.dual = true;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac3, k), g);
      const NormPair<WeightedCoordinateNorm> pair(inst.norm, *inst.second_norm);
      const OrthogonalBasisReport rep = orthogonalize_simultaneous(pair, inst.basis);
      const bool first = oracle::check_orthogonal_determinant(inst.norm, rep.vectors).orthogonal;
      const bool second = oracle::check_orthogonal_determinant(*inst.second_norm, rep.vectors).orthogonal;

      const QVector& v1 = rep.vectors.front();
      const Rational best = inst.norm.exponent(v1).value() - inst.second_norm->exponent(v1).value();
      Rng rng(derive_seed(opt.seed ^ 0xac3f, k));
      bool maximal = true;
      for (int s = 0; s < 500 && maximal; ++s) {
        const QVector v = detail::random_integer_vector(rng, g.n, 50);
        const Rational diff = inst.norm.exponent(v).value() - inst.second_norm->exponent(v).value();
        if (diff < best) maximal = false;
      }
      if (maximal) ++beaten;
      ++r.total_cases;
      if (first && second && maximal) ++r.passed_cases;
    }
    r.passed = r.passed_cases == r.total_cases;
    r.detail = "v1 maximal vs 500 samples in " + std::to_string(beaten) + "/100";
  });
}

/// 200 rank-2 lattices: the returned pair is a Z_p-unimodular change of basis
/// of (alpha, beta) and passes the determinant criterion.
inline CriterionResult rank2_lattice(const Options& opt) {
  return detail::timed(4, "rank-2 lattice orthogonalization", [&](CriterionResult& r) {
    for (std::uint64_t k = 0; k < 200; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 2 + (k / 3) % 2;
      g.weight_denominator = 1 + (k / 6) % 2;
      g.entry_bound = 50;
      g.rank = 2;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac4, k), g);
      const Rank2LatticeBasis out = orthogonalize_rank2_lattice(inst.norm, inst.basis[0], inst.basis[1]);
      // Change of basis recomputed from scratch rather than read from `out`.
      QMatrix c(2, 2);
      bool integral = true;
      for (std::size_t j = 0; j < 2; ++j) {
        auto coords = coordinates(inst.basis, j == 0 ? out.alpha : out.beta);
        if (!coords) {
          integral = false;
          break;
        }
        for (std::size_t i = 0; i < 2; ++i) {
          c(i, j) = (*coords)[i];
          if (valuation(c(i, j), inst.prime()) < ExtInt(0)) integral = false;
        }
      }
      const bool unimodular = integral && valuation(det(c), inst.prime()) == ExtInt(0);
      const bool exact = oracle::check_orthogonal_determinant(inst.norm, {out.alpha, out.beta}).orthogonal;
      ++r.total_cases;
      if (unimodular && exact) ++r.passed_cases;
    }
    r.passed = r.passed_cases == r.total_cases;
  });
}

/// 100 full-rank bases are orthogonal for the norm their own lattice induces.
inline CriterionResult induced_norm(const Options& opt) {
  return detail::timed(5, "lattice-induced norm", [&](CriterionResult& r) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 1 + (k / 3) % 4;
      g.entry_bound = 50;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac5, k), g);
      const WeightedCoordinateNorm induced = lattice_induced_norm(inst.basis, inst.prime());
      ++r.total_cases;
      if (oracle::check_orthogonal_determinant(induced, inst.basis).orthogonal) ++r.passed_cases;
    }
    r.passed = r.passed_cases == r.total_cases;
  });
}

/// Norm axioms and lemmas on >= 10^4 random cases each: homogeneity, the
/// ultrametric inequality, equality for unequal norms, the two-sided
/// max-equality criterion, and the freeze rule.
inline CriterionResult axiom_properties(const Options& opt) {
  return detail::timed(6, "axiom and lemma properties", [&](CriterionResult& r) {
    constexpr std::uint64_t kCases = 10000;
    std::vector<Instance> norms;
    for (std::uint64_t k = 0; k < 24; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 1 + (k / 3) % 4;
      g.weight_denominator = 1 + (k / 12) % 2;
      g.entry_bound = 20;
      norms.push_back(generate_instance(derive_seed(opt.seed ^ 0xac6, k), g));
    }
    Rng rng(derive_seed(opt.seed, 0xac6));
    std::uint64_t homogeneity = 0, ultrametric = 0, unequal = 0, max_equality = 0, freeze = 0;
    std::uint64_t violations = 0;
    std::uint64_t lemma_true = 0, lemma_false = 0;

    auto pick = [&]() -> const Instance& { return norms[uniform_below(rng, norms.size())]; };
    auto random_pair = [&](const Instance& inst) {
      const Prime p = inst.prime();
      QVector v = detail::random_rational_vector(rng, inst.dimension(), 30);
      QVector u = detail::random_rational_vector(rng, inst.dimension(), 30);
      const long s = static_cast<long>(uniform_int(rng, -3, 3));
      switch (uniform_below(rng, 3)) {
        case 0: u = prime_power(p, s) * u; break;
        case 1: u = (-v) + prime_power(p, std::abs(s) + 1) * u; break;  // forces cancellation
        default: break;
      }
      return std::pair{v, u};
    };

    while (homogeneity < kCases) {
      const Instance& inst = pick();
      const QVector v = detail::random_rational_vector(rng, inst.dimension(), 40);
      const Rational x = detail::random_nonzero_rational(rng, 200);
      const NormExponent lhs = inst.norm.exponent(x * v);
      const NormExponent rhs = inst.norm.exponent(v).shifted(Rational(valuation(x, inst.prime()).value()));
      if (lhs != rhs) ++violations;
      ++homogeneity;
    }
    while (ultrametric < kCases || unequal < kCases || max_equality < kCases) {
      const Instance& inst = pick();
      auto [v, u] = random_pair(inst);
      const NormExponent wv = inst.norm.exponent(v);
      const NormExponent wu = inst.norm.exponent(u);
      const NormExponent ws = inst.norm.exponent(v + u);
      const NormExponent lo = std::min(wv, wu);
      if (ws < lo) ++violations;
      ++ultrametric;
      if (wv != wu) {
        if (ws != lo) ++violations;
        ++unequal;
      }
      // N(v+u) = max(N(v), N(u))  <=>  N(v+u) >= N(v).
      const bool attains_max = ws == lo;
      const bool at_least_v = ws <= wv;
      if (attains_max != at_least_v) ++violations;
      (attains_max ? lemma_true : lemma_false) += 1;
      ++max_equality;
    }

    while (freeze < kCases) {
      const Instance& inst = pick();
      const std::size_t n = inst.dimension();
      if (n < 2) continue;
      const Prime p = inst.prime();
      const std::size_t m = 1 + uniform_below(rng, n - 1);
      std::vector<QVector> lattice_basis(inst.basis.begin(), inst.basis.begin() + static_cast<std::ptrdiff_t>(m));
      const PAdicLattice lattice(p, lattice_basis);
      const QVector t = inst.basis[m];
      Rational c_l;
      for (std::size_t j = 0; j < m; ++j) {
        const Rational w = inst.norm.exponent(lattice_basis[j]).value();
        if (j == 0 || w < c_l) c_l = w;
      }
      const auto level = static_cast<long>(uniform_below(rng, 4));
      const Integer modulus = prime_power(p, level).get_num();
      std::vector<Integer> a(m);
      for (auto& x : a) x = uniform_integer_below(rng, modulus);
      const QVector residual = t - lattice.combine(a);
      const NormExponent w = inst.norm.exponent(residual);
      if (!(w.value() < Rational(level) + c_l)) continue;  // branch not frozen
      for (int e = 0; e < 10; ++e) {
        std::vector<Integer> ext(m);
        for (auto& x : ext) x = Integer(static_cast<long>(uniform_int(rng, -1000, 1000)));
        const QVector deeper = residual - prime_power(p, level) * lattice.combine(ext);
        if (inst.norm.exponent(deeper) != w) ++violations;
        ++freeze;
      }
    }
    r.total_cases = homogeneity + ultrametric + unequal + max_equality + freeze;
    r.passed_cases = r.total_cases - violations;
    r.passed = violations == 0 && lemma_true > 0 && lemma_false > 0;
    r.detail = "homogeneity " + std::to_string(homogeneity) + ", ultrametric " + std::to_string(ultrametric) +
               ", unequal " + std::to_string(unequal) + ", max-equality " + std::to_string(max_equality) + " (" +
               std::to_string(lemma_true) + " true/" + std::to_string(lemma_false) + " false), freeze " +
               std::to_string(freeze);
  });
}

/// 100 coset tables are unchanged by one forced extra refinement level.
inline CriterionResult coset_finiteness(const Options& opt) {
  return detail::timed(7, "coset value finiteness", [&](CriterionResult& r) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      GenerationParams g;
      g.p = detail::kPrimes[k % 3];
      g.n = 2 + (k / 3) % 2;
      g.weight_denominator = 1 + (k / 6) % 2;
      g.entry_bound = 50;
      const Instance inst = generate_instance(derive_seed(opt.seed ^ 0xac7, k), g);
      const std::vector<QVector> basis = detail::normalized(inst.norm, inst.basis);
      const PAdicLattice lattice(inst.prime(), std::vector<QVector>(basis.begin() + 1, basis.end()));
      const CosetValueTable plain = coset_norm_values(inst.norm, lattice, basis.front());
      const CosetValueTable deeper = coset_norm_values(inst.norm, lattice, basis.front(), 1);
      bool same = plain.entries.size() == deeper.entries.size();
      for (std::size_t i = 0; same && i < plain.entries.size(); ++i) {
        same = plain.entries[i].exponent == deeper.entries[i].exponent;
      }
      ++r.total_cases;
      if (same) ++r.passed_cases;
    }
    r.passed = r.passed_cases == r.total_cases;
  });
}

/// Pruned search never explores more nodes than the exhaustive oracle, and
/// explores at most half as many on >= 25% of n = 3 runs.
inline CriterionResult search_pruning(const std::vector<detail::CvpPair>& pairs) {
  return detail::timed(8, "search pruning", [&](CriterionResult& r) {
    std::uint64_t n3 = 0, halved = 0;
    std::uint64_t pruned_total = 0, exhaustive_total = 0;
    for (const auto& pair : pairs) {
      ++r.total_cases;
      if (pair.pruned_nodes <= pair.exhaustive_nodes) ++r.passed_cases;
      pruned_total += pair.pruned_nodes;
      exhaustive_total += pair.exhaustive_nodes;
      if (pair.n == 3) {
        ++n3;
        if (2 * pair.pruned_nodes <= pair.exhaustive_nodes) ++halved;
      }
    }
    r.passed = r.total_cases > 0 && r.passed_cases == r.total_cases && n3 > 0 && 4 * halved >= n3;
    r.detail = "n=3 halved " + std::to_string(halved) + "/" + std::to_string(n3) + ", nodes " +
               std::to_string(pruned_total) + " pruned vs " + std::to_string(exhaustive_total) + " exhaustive";
  });
}

/// Runs every criterion, writing one line per criterion to `out` as it finishes.
inline std::vector<CriterionResult> run_all(const Options& opt, std::ostream& out) {
  std::vector<CriterionResult> results;
  auto emit = [&](CriterionResult r) {
    out << format_line(r) << std::endl;
    results.push_back(std::move(r));
  };
  std::vector<detail::CvpPair> pairs;
  emit(orthogonalization_correctness(opt));
  emit(cvp_oracle_equivalence(opt, pairs));
  emit(simultaneous_orthogonalization(opt));
  emit(rank2_lattice(opt));
  emit(induced_norm(opt));
  emit(axiom_properties(opt));
  emit(coset_finiteness(opt));
  emit(search_pruning(pairs));
  return results;
}

}  // namespace padic_orth::selftest
