#include "mqht/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <string>

#include "mqht/error.hpp"
#include "mqht/evaluation.hpp"
#include "mqht/random.hpp"

namespace mqht {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": states differ in dimension");
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

using SubDetectorFactory = std::function<Detector(std::span<const DensityMatrix>, int)>;

}  // namespace

PovmCheck check_povm(const Detector& detector) {
  PovmCheck out;
  if (detector.elements.empty()) return out;
  const auto d = static_cast<Eigen::Index>(detector.dim());
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& e : detector.elements) {
    if (e.rows() != d || e.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "detector elements differ in dimension");
    }
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(e));
    total += e;
  }
  out.identity_deviation = max_abs(total - identity(d));
  out.valid = out.min_eigenvalue >= -tol::kPovmPsd && out.identity_deviation <= tol::kPovmSum;
  return out;
}

void require_valid_povm(const Detector& detector, std::string_view what) {
  const PovmCheck check = check_povm(detector);
  if (!check.valid) {
    throw Error(ErrorKind::ConsistencyViolation,
                std::string(what) + ": not a POVM (min eigenvalue " + std::to_string(check.min_eigenvalue) +
                    ", |sum - I| = " + std::to_string(check.identity_deviation) + ")");
  }
}

Detector holevo_helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_same_dim(rho1, rho2, "holevo_helstrom");
  const ComplexMatrix diff = rho1.matrix() - rho2.matrix();
  const HermitianEig eig = eigh(diff);
  const double floor = eig.floor();
  Eigen::Index positive = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] > floor) ++positive;
  const auto d = static_cast<Eigen::Index>(rho1.dim());
  // Eigenvalues ascend, so the strictly positive block is the last columns.
  const ComplexMatrix v_plus = eig.vectors.rightCols(positive);
  ComplexMatrix e1 = hermitian_part(v_plus * v_plus.adjoint());
  ComplexMatrix e2 = identity(d) - e1;
  return Detector{{std::move(e1), std::move(e2)}};
}

ComplexMatrix wedge(const DensityMatrix& rho1, const DensityMatrix& rho2, const Detector& hh) {
  require_same_dim(rho1, rho2, "wedge");
  if (hh.size() != 2 || hh.dim() != rho1.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "wedge: expected a binary detector on the states' space");
  }
  const ComplexMatrix& e1 = hh.elements[0];
  const ComplexMatrix& e2 = hh.elements[1];
  const ComplexMatrix left = rho1.matrix() * e2 + rho2.matrix() * e1;
  const ComplexMatrix right = e2 * rho1.matrix() + e1 * rho2.matrix();
  const double gap = max_abs(left - right);
  if (gap > 1e-9) {
    throw Error(ErrorKind::ConsistencyViolation, "wedge: rho1 E2 + rho2 E1 differs from E2 rho1 + E1 rho2 by " +
                                                     std::to_string(gap));
  }
  return hermitian_part(left);
}

ComplexMatrix wedge(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return wedge(rho1, rho2, holevo_helstrom(rho1, rho2));
}

Detector pgm(std::span<const DensityMatrix> states) {
  if (states.size() < 2) throw Error(ErrorKind::InvalidArgument, "pgm needs at least 2 states");
  const auto d = static_cast<Eigen::Index>(states.front().dim());
  const double m = static_cast<double>(states.size());
  ComplexMatrix average = ComplexMatrix::Zero(d, d);
  for (const auto& s : states) {
    require_same_dim(states.front(), s, "pgm");
    average += s.matrix();
  }
  average /= m;
  const HermitianEig eig = eigh(hermitian_part(average));
  const double floor = eig.floor();
  const ComplexMatrix inv_sqrt =
      spectral_apply(eig, [&](double lambda) { return lambda > floor ? 1.0 / std::sqrt(lambda) : 0.0; });
  const ComplexMatrix support = spectral_apply(eig, [&](double lambda) { return lambda > floor ? 1.0 : 0.0; });
  const ComplexMatrix kernel_share = (identity(d) - support) / m;

  Detector out;
  out.elements.reserve(states.size());
  for (const auto& s : states) {
    ComplexMatrix g = inv_sqrt * (s.matrix() / m) * inv_sqrt + kernel_share;
    out.elements.push_back(hermitian_part(g));
  }
  return out;
}

ComposedDetector compose_with_binary(std::span<const ComplexMatrix> partials, const Detector& hh,
                                     const CompositionOptions& options) {
  if (hh.size() != 2) throw Error(ErrorKind::InvalidArgument, "compose_with_binary: expected a binary detector");
  const auto d = static_cast<Eigen::Index>(hh.dim());
  ComplexMatrix e_tilde = ComplexMatrix::Zero(d, d);
  for (const auto& p : partials) {
    if (p.rows() != d || p.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "compose_with_binary: partial element has the wrong dimension");
    }
    e_tilde += p;
  }
  e_tilde = hermitian_part(e_tilde);
  const ComplexMatrix q = identity(d) - e_tilde;
  const HermitianEig q_eig = eigh(q);
  if (q_eig.values[0] < -tol::kPsd) {
    throw Error(ErrorKind::PartialsExceedIdentity,
                "sum of partial elements exceeds I (min eigenvalue of I - sum = " + std::to_string(q_eig.values[0]) + ")");
  }
  if (q_eig.values[q_eig.values.size() - 1] <= tol::kPsd) {
    throw Error(ErrorKind::PartialsEqualIdentity, "sum of partial elements equals I; nothing is left for the binary test");
  }
  const ComplexMatrix q_half = spectral_apply(q_eig, [](double lambda) { return lambda > 0.0 ? std::sqrt(lambda) : 0.0; });

  ComposedDetector out;
  out.detector.elements.reserve(2 + partials.size());
  for (const auto& e : hh.elements) out.detector.elements.push_back(hermitian_part(q_half * e * q_half));
  for (const auto& p : partials) out.detector.elements.push_back(hermitian_part(p));

  CompositionTrace& trace = out.trace;
  trace.r = identity(d) - q_half;
  const RealVector r_values = eigvalsh(trace.r);
  trace.r_min_eigenvalue = r_values[0];
  trace.r_max_eigenvalue = r_values[r_values.size() - 1];
  trace.r_squared_margin = min_eigenvalue(hermitian_part(e_tilde - trace.r * trace.r));
  if (options.retain_operators) {
    trace.q = q;
    trace.e_tilde_3 = std::move(e_tilde);
    trace.f1 = identity(d) - hh.elements[0];
    trace.f2 = identity(d) - hh.elements[1];
  } else {
    trace.r = ComplexMatrix();
  }
  return out;
}

LemmaTerms lemma_terms(const DensityMatrix& rho1, const DensityMatrix& rho2, const Detector& hh,
                       std::span<const ComplexMatrix> partials, std::span<const DensityMatrix> rest) {
  if (partials.size() != rest.size()) {
    throw Error(ErrorKind::InvalidArgument, "lemma_terms: one state per partial element expected");
  }
  LemmaTerms t;
  t.wedge_trace = real_trace_of_product(rho1.matrix(), hh.elements[1]) + real_trace_of_product(rho2.matrix(), hh.elements[0]);
  t.term_wedge = 2.0 * t.wedge_trace;
  double cross = 0.0;
  for (const auto& p : partials) cross += real_trace_of_product(rho1.matrix() + rho2.matrix(), p);
  t.term_cross = 2.0 * cross;
  for (std::size_t k = 0; k < partials.size(); ++k) {
    t.term_rest += 1.0 - real_trace_of_product(rest[k].matrix(), partials[k]);
  }
  return t;
}

std::vector<ComplexMatrix> random_feasible_partials(std::size_t dim, std::size_t count, std::uint64_t seed) {
  SplitMix64 seeds(seed);
  std::vector<ComplexMatrix> raw;
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k <= count; ++k) {
    raw.push_back(random_density(dim, dim, seeds.next()).matrix());
    total += raw.back();
  }
  const ComplexMatrix inv_sqrt = pinv_sqrt_psd(hermitian_part(total));
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(hermitian_part(inv_sqrt * raw[k] * inv_sqrt));
  return out;
}

std::string_view to_string(SubDetectorStrategy strategy) {
  return strategy == SubDetectorStrategy::Pgm ? "pgm" : "recursive";
}

std::optional<SubDetectorStrategy> parse_strategy(std::string_view text) {
  if (text == "pgm") return SubDetectorStrategy::Pgm;
  if (text == "recursive") return SubDetectorStrategy::Recursive;
  return std::nullopt;
}

SplitCounts split_counts(int n, double w1) {
  if (!(w1 > 0.0 && w1 < 1.0)) throw Error(ErrorKind::InvalidArgument, "split weight w1 must lie in (0, 1)");
  if (n < 2) throw Error(ErrorKind::SplitTooSmall, "the split construction needs n >= 2, got " + std::to_string(n));
  const int n1 = static_cast<int>(std::floor(n * w1));
  const int n2 = n - n1;
  if (n1 < 1 || n2 < 1) {
    throw Error(ErrorKind::SplitTooSmall, "n = " + std::to_string(n) + ", w1 = " + std::to_string(w1) +
                                              " leaves an empty part (n1 = " + std::to_string(n1) + ")");
  }
  return {n1, n2};
}

namespace {

SplitDetector split_impl(std::span<const DensityMatrix> base, int n, double w1, const SubDetectorFactory& factory,
                         std::size_t dim_cap, const CompositionOptions& options) {
  if (base.size() < 3) throw Error(ErrorKind::InvalidArgument, "the split construction needs at least 3 states");
  checked_power_dim(base.front().dim(), n, dim_cap);
  const SplitCounts counts = split_counts(n, w1);

  std::vector<DensityMatrix> sub1_states{base[0]};
  std::vector<DensityMatrix> sub2_states{base[1]};
  for (std::size_t j = 2; j < base.size(); ++j) {
    sub1_states.push_back(base[j]);
    sub2_states.push_back(base[j]);
  }

  SplitDetector out;
  out.sub_detector_1 = factory(sub1_states, counts.n1);
  out.sub_detector_2 = factory(sub2_states, counts.n2);
  out.report.n = n;
  out.report.n1 = counts.n1;
  out.report.n2 = counts.n2;
  out.report.sub_err_1 = error_sum(tensor_powers(sub1_states, counts.n1, dim_cap), out.sub_detector_1, counts.n1).err_sm;
  out.report.sub_err_2 = error_sum(tensor_powers(sub2_states, counts.n2, dim_cap), out.sub_detector_2, counts.n2).err_sm;

  std::vector<ComplexMatrix> partials;
  for (std::size_t k = 1; k + 1 < base.size(); ++k) {
    partials.push_back(kron(out.sub_detector_1.elements[k], out.sub_detector_2.elements[k]));
  }

  const std::vector<DensityMatrix> powered = tensor_powers(base, n, dim_cap);
  const Detector hh = holevo_helstrom(powered[0], powered[1]);
  ComposedDetector composed = compose_with_binary(partials, hh, options);
  composed.trace.terms = lemma_terms(powered[0], powered[1], hh, partials,
                                     std::span<const DensityMatrix>(powered).subspan(2));
  out.detector = std::move(composed.detector);
  out.trace = std::move(composed.trace);
  return out;
}

Detector recursive_on(std::span<const DensityMatrix> states, int n, double w1, std::size_t dim_cap, bool top_level) {
  if (states.size() == 2) {
    return holevo_helstrom(tensor_power(states[0], n, dim_cap), tensor_power(states[1], n, dim_cap));
  }
  if (!top_level) {
    const int n1 = static_cast<int>(std::floor(n * w1));
    if (n < 2 || n1 < 1 || n - n1 < 1) {
      const std::vector<DensityMatrix> powered = tensor_powers(states, n, dim_cap);
      return pgm(powered);
    }
  }
  const SubDetectorFactory factory = [w1, dim_cap](std::span<const DensityMatrix> sub, int copies) {
    return recursive_on(sub, copies, w1, dim_cap, false);
  };
  return split_impl(states, n, w1, factory, dim_cap, CompositionOptions{false}).detector;
}

}  // namespace

SplitDetector build_split_detector(const Ensemble& ensemble, int n, double w1, SubDetectorStrategy sub,
                                   std::size_t dim_cap, const CompositionOptions& options) {
  if (ensemble.size() < 3) throw Error(ErrorKind::InvalidArgument, "build_split_detector needs r >= 3");
  SubDetectorFactory factory;
  if (sub == SubDetectorStrategy::Pgm) {
    factory = [dim_cap](std::span<const DensityMatrix> states, int copies) {
      const std::vector<DensityMatrix> powered = tensor_powers(states, copies, dim_cap);
      return pgm(powered);
    };
  } else {
    factory = [w1, dim_cap](std::span<const DensityMatrix> states, int copies) {
      return recursive_on(states, copies, w1, dim_cap, false);
    };
  }
  return split_impl(ensemble.states(), n, w1, factory, dim_cap, options);
}

Detector recursive_detector(const Ensemble& ensemble, int n, double w1, std::size_t dim_cap) {
  checked_power_dim(ensemble.dim(), n, dim_cap);
  return recursive_on(ensemble.states(), n, w1, dim_cap, true);
}

}  // namespace mqht
