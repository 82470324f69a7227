#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mqht/states.hpp"

namespace mqht {

namespace tol {
inline constexpr double kPovmPsd = 1e-10;
inline constexpr double kPovmSum = 1e-9;
inline constexpr double kRSquared = 1e-9;
}  // namespace tol

/// POVM on a d-dimensional space; element k decides for hypothesis k.
struct Detector {
  std::vector<ComplexMatrix> elements;

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.empty() ? 0 : static_cast<std::size_t>(elements.front().rows()); }
};

struct PovmCheck {
  double min_eigenvalue = 0.0;      // smallest eigenvalue over all elements
  double identity_deviation = 0.0;  // max |sum_k E_k - I|
  bool valid = false;
};

PovmCheck check_povm(const Detector& detector);
/// Throws ConsistencyViolation when a constructed detector is not a POVM.
void require_valid_povm(const Detector& detector, std::string_view what);

/// E1 = supp((rho1 - rho2)_+), E2 = I - E1. Eigenvalues of rho1 - rho2 in
/// (-floor, floor] belong to E2.
Detector holevo_helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// rho1 E2 + rho2 E1 for the Holevo-Helstrom test of (rho1, rho2). Its trace is
/// the optimal sum of the two error probabilities.
ComplexMatrix wedge(const DensityMatrix& rho1, const DensityMatrix& rho2);
ComplexMatrix wedge(const DensityMatrix& rho1, const DensityMatrix& rho2, const Detector& hh);

/// Square-root ("pretty good") measurement with equal priors. The kernel of
/// the average state is shared equally between the elements.
Detector pgm(std::span<const DensityMatrix> states);

struct LemmaTerms {
  double wedge_trace = 0.0;  // tr[rho1 ^ rho2]
  double term_wedge = 0.0;   // 2 tr[rho1 ^ rho2]
  double term_cross = 0.0;   // 2 tr[(rho1 + rho2) E~3]
  double term_rest = 0.0;    // sum_{i>=3} tr[rho_i (I - E_i)]
  double bound() const { return term_wedge + term_cross + term_rest; }
};

/// Operators of the composition E_i = Q^{1/2} E_i^dagger Q^{1/2}, kept for
/// checking R^2 <= E~3 and the error decomposition.
struct CompositionTrace {
  ComplexMatrix q;          // I - E~3
  ComplexMatrix r;          // I - Q^{1/2}
  ComplexMatrix e_tilde_3;  // sum of partial elements
  ComplexMatrix f1;         // I - E1^dagger
  ComplexMatrix f2;         // I - E2^dagger
  double r_min_eigenvalue = 0.0;
  double r_max_eigenvalue = 0.0;
  double r_squared_margin = 0.0;  // min eigenvalue of E~3 - R^2
  std::optional<LemmaTerms> terms;
};

struct CompositionOptions {
  /// false drops the operator matrices after the invariant checks (large d).
  bool retain_operators = true;
};

struct ComposedDetector {
  Detector detector;  // {E1, E2, partials...}
  CompositionTrace trace;
};

/// Completes partial elements E3..Er (sum <= I, sum != I) with a binary test.
ComposedDetector compose_with_binary(std::span<const ComplexMatrix> partials, const Detector& hh,
                                     const CompositionOptions& options = {});

/// Bound terms of the error decomposition for the detector composed from `hh`
/// and `partials`; rest[k] is the state that partials[k] decides for.
LemmaTerms lemma_terms(const DensityMatrix& rho1, const DensityMatrix& rho2, const Detector& hh,
                       std::span<const ComplexMatrix> partials, std::span<const DensityMatrix> rest);

/// `count` PSD matrices summing to strictly less than the identity, built as
/// T^{-1/2} A_k T^{-1/2} from count + 1 seeded random states A_k with T = sum A_k.
std::vector<ComplexMatrix> random_feasible_partials(std::size_t dim, std::size_t count, std::uint64_t seed);

enum class SubDetectorStrategy { Pgm, Recursive };

std::string_view to_string(SubDetectorStrategy strategy);
std::optional<SubDetectorStrategy> parse_strategy(std::string_view text);

struct SplitCounts {
  int n1 = 0;
  int n2 = 0;
};

/// n1 = floor(n w1), n2 = n - n1; both must be >= 1.
SplitCounts split_counts(int n, double w1);

struct SplitReport {
  int n = 0;
  int n1 = 0;
  int n2 = 0;
  double sub_err_1 = 0.0;  // Err_sm of the sub-detector for {rho1, rho3, ...} on n1 copies
  double sub_err_2 = 0.0;  // Err_sm of the sub-detector for {rho2, rho3, ...} on n2 copies
};

struct SplitDetector {
  Detector detector;
  CompositionTrace trace;  // terms always populated
  SplitReport report;
  Detector sub_detector_1;
  Detector sub_detector_2;
};

/// Multi-copy detector: Holevo-Helstrom on (rho1^n, rho2^n) completed by
/// product elements E_j^(n1,1) (x) E_j^(n2,2), j >= 3.
SplitDetector build_split_detector(const Ensemble& ensemble, int n, double w1, SubDetectorStrategy sub,
                                   std::size_t dim_cap = kDefaultDimCap, const CompositionOptions& options = {});

/// Applies the split construction to its own sub-problems until two states
/// remain (Holevo-Helstrom) or a sub-problem has fewer than 2 copies (PGM).
Detector recursive_detector(const Ensemble& ensemble, int n, double w1, std::size_t dim_cap = kDefaultDimCap);

}  // namespace mqht
