#include "mqht/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqht/error.hpp"

namespace mqht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xi_from_overlap(double f_min) {
  if (f_min <= kZeroOverlap) return kInf;
  if (f_min >= 1.0) return 0.0;
  return -std::log(f_min);
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": states differ in dimension");
}

}  // namespace

ChernoffCurve::ChernoffCurve(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_same_dim(rho1, rho2, "chernoff_curve");
  const HermitianEig ea = eigh(rho1.matrix());
  const HermitianEig eb = eigh(rho2.matrix());
  std::vector<Eigen::Index> ia;
  std::vector<Eigen::Index> ib;
  for (Eigen::Index k = 0; k < ea.values.size(); ++k)
    if (ea.values[k] > ea.floor()) ia.push_back(k);
  for (Eigen::Index k = 0; k < eb.values.size(); ++k)
    if (eb.values[k] > eb.floor()) ib.push_back(k);

  const ComplexMatrix inner = ea.vectors.adjoint() * eb.vectors;
  overlap_.resize(static_cast<Eigen::Index>(ia.size()), static_cast<Eigen::Index>(ib.size()));
  for (std::size_t a = 0; a < ia.size(); ++a) {
    log_a_.push_back(std::log(ea.values[ia[a]]));
    for (std::size_t b = 0; b < ib.size(); ++b)
      overlap_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = std::norm(inner(ia[a], ib[b]));
  }
  for (Eigen::Index k : ib) log_b_.push_back(std::log(eb.values[k]));
}

double ChernoffCurve::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidArgument, "chernoff_curve: s outside [0, 1]");
  double total = 0.0;
  for (std::size_t a = 0; a < log_a_.size(); ++a) {
    const double pa = (1.0 - s) * log_a_[a];
    for (std::size_t b = 0; b < log_b_.size(); ++b)
      total += std::exp(pa + s * log_b_[b]) * overlap_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
  return std::clamp(total, 0.0, 1.0);
}

double chernoff_curve(const DensityMatrix& rho1, const DensityMatrix& rho2, double s) {
  return ChernoffCurve(rho1, rho2)(s);
}

std::pair<double, double> minimize_on_unit_interval(const std::function<double(double)>& f, double s_tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > s_tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  double best_s = 0.5 * (lo + hi);
  double best_f = f(best_s);
  // The support convention can put the infimum at an endpoint.
  for (double s : {0.0, 1.0}) {
    const double fs = f(s);
    if (fs < best_f) {
      best_f = fs;
      best_s = s;
    }
  }
  return {best_s, best_f};
}

ChernoffResult chernoff_distance(const DensityMatrix& rho1, const DensityMatrix& rho2, const ChernoffOptions& options) {
  const ChernoffCurve curve(rho1, rho2);
  const auto [s_star, f_min] = minimize_on_unit_interval(curve, options.s_tolerance);
  ChernoffResult out;
  out.s_star = s_star;
  out.f_min = f_min;
  out.xi = xi_from_overlap(f_min);
  if (options.curve_points > 1) {
    for (int k = 0; k < options.curve_points; ++k) {
      const double s = static_cast<double>(k) / (options.curve_points - 1);
      out.curve.emplace_back(s, curve(s));
    }
  }
  return out;
}

double classical_chernoff(std::span<const double> p, std::span<const double> q, double s_tolerance) {
  if (p.size() != q.size()) throw Error(ErrorKind::DimensionMismatch, "classical_chernoff: length mismatch");
  auto f = [&](double s) {
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] > 0.0 && q[k] > 0.0) total += std::pow(p[k], 1.0 - s) * std::pow(q[k], s);
    return std::clamp(total, 0.0, 1.0);
  };
  return xi_from_overlap(minimize_on_unit_interval(f, s_tolerance).second);
}

PairwiseChernoff::PairwiseChernoff(const Ensemble& ensemble, const ChernoffOptions& options) {
  const auto r = static_cast<Eigen::Index>(ensemble.size());
  xi_ = Eigen::MatrixXd::Zero(r, r);
  s_star_ = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      const ChernoffResult res = chernoff_distance(ensemble[static_cast<std::size_t>(i)],
                                                   ensemble[static_cast<std::size_t>(j)], options);
      xi_(i, j) = xi_(j, i) = res.xi;
      s_star_(i, j) = res.s_star;
    }
  }
}

PairwiseChernoff PairwiseChernoff::from_xi(const Eigen::MatrixXd& xi) {
  if (xi.rows() != xi.cols() || xi.rows() < 2) {
    throw Error(ErrorKind::InvalidArgument, "pairwise table needs a square matrix with r >= 2");
  }
  PairwiseChernoff out;
  out.xi_ = Eigen::MatrixXd::Zero(xi.rows(), xi.cols());
  out.s_star_ = Eigen::MatrixXd::Constant(xi.rows(), xi.cols(), 0.5);
  for (Eigen::Index i = 0; i < xi.rows(); ++i)
    for (Eigen::Index j = i + 1; j < xi.cols(); ++j) out.xi_(i, j) = out.xi_(j, i) = xi(i, j);
  return out;
}

double PairwiseChernoff::s_star(std::size_t i, std::size_t j) const {
  if (i < j) return s_star_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return 1.0 - s_star_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
}

MqcbResult mqcb(const PairwiseChernoff& table) {
  MqcbResult best{kInf, IndexPair{0, 1}};
  bool first = true;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      if (first || table.xi(i, j) < best.value) {
        best = {table.xi(i, j), IndexPair{i, j}};
        first = false;
      }
    }
  }
  return best;
}

MqcbResult mqcb(const Ensemble& ensemble) { return mqcb(PairwiseChernoff(ensemble)); }

double xi_bar(const PairwiseChernoff& table, std::size_t i, std::size_t j) {
  const std::size_t r = table.size();
  if (r < 3) throw Error(ErrorKind::Undefined, "xi_bar needs at least 3 states");
  if (!(i < j && j < r)) throw Error(ErrorKind::InvalidArgument, "xi_bar: need i < j < r");
  double best = kInf;
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = k + 1; l < r; ++l)
      if (!(k == i && l == j)) best = std::min(best, table.xi(k, l));
  return best;
}

double xi_bar(const Ensemble& ensemble, std::size_t i, std::size_t j) {
  return xi_bar(PairwiseChernoff(ensemble), i, j);
}

bool attainability_condition(double xi_ij, double xi_bar_ij) { return xi_ij <= xi_bar_ij / 6.0; }

ConditionReport theorem_condition(const PairwiseChernoff& table) {
  if (table.size() < 3) throw Error(ErrorKind::Undefined, "the attainability condition needs at least 3 states");
  const MqcbResult least = mqcb(table);
  ConditionReport out;
  out.pair = least.pair;
  out.xi_ij = table.xi(least.pair.i, least.pair.j);
  out.xi_bar = xi_bar(table, least.pair.i, least.pair.j);
  out.mqcb = least.value;
  out.holds = attainability_condition(out.xi_ij, out.xi_bar);
  const double sixth = out.xi_bar / 6.0;
  out.margin = (std::isinf(sixth) && std::isinf(out.xi_ij)) ? 0.0 : sixth - out.xi_ij;
  if (out.holds && out.mqcb != out.xi_ij) {
    throw Error(ErrorKind::ConsistencyViolation, "condition holds but mqcb differs from xi_ij");
  }
  return out;
}

ConditionReport theorem_condition(const Ensemble& ensemble) { return theorem_condition(PairwiseChernoff(ensemble)); }

}  // namespace mqht
