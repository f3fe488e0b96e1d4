#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "solwalk/bigint.hpp"
#include "solwalk/distribution.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"

namespace solwalk {

/// Term of the sufficient-for-recurrence series: 1 / ((a_1...a_n) sqrt(Q_n)).
/// Q_n = 0 (finite support) makes the term +infinity.
inline double sufficient_series_term(const GroupSequence& seq,
                                     const StepDistribution& dist, int n) {
  if (n < 0) throw contract_error("sufficient_series_term: negative index");
  const double q_tail = n <= dist.max_index() + 1 ? dist.tail(n) : 0.0;
  if (q_tail <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (to_double(seq.product(n)) * std::sqrt(q_tail));
}

/// Term of the necessary-for-recurrence series: a_{n+1} / ((a_1...a_n) sqrt(q_n)).
/// Theorem 2 assumes q_n > 0 throughout; a vanishing weight is a contract break.
inline double necessary_series_term(const GroupSequence& seq,
                                    const StepDistribution& dist, int n) {
  if (n < 0) throw contract_error("necessary_series_term: negative index");
  const double q = dist.weight(n);
  if (!(q > 0.0))
    throw contract_error("necessary_series_term: q_n = 0 violates the positivity hypothesis");
  return static_cast<double>(seq.a(n + 1)) / (to_double(seq.product(n)) * std::sqrt(q));
}

enum class SeriesVerdict { ProvenDivergent, ProvenConvergent, Undetermined };
enum class VerdictReason { TermsBoundedBelow, RatioLimitBelowOne, ClosedFormComparison, None };

inline const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::ProvenDivergent: return "proven_divergent";
    case SeriesVerdict::ProvenConvergent: return "proven_convergent";
    case SeriesVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

inline const char* to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::TermsBoundedBelow: return "terms_bounded_below";
    case VerdictReason::RatioLimitBelowOne: return "ratio_limit_below_one";
    case VerdictReason::ClosedFormComparison: return "closed_form_comparison";
    case VerdictReason::None: return "none";
  }
  return "?";
}

struct SeriesDiagnostics {
  std::string series_id;  // "sufficient" | "necessary"
  std::vector<double> terms;
  std::vector<double> partial_sums;
  SeriesVerdict verdict = SeriesVerdict::Undetermined;
  VerdictReason reason = VerdictReason::None;
  double witness = 0.0;  // c for TermsBoundedBelow, the ratio otherwise
  std::string description;
};

enum class SeriesKind { Sufficient, Necessary };

namespace detail {

/// Eventual multiplicative structure of the series terms over one period L
/// of the sequence. For the Geometric and SolenoidMatched families the
/// relation term_{n+L} = ratio * term_n holds exactly for n >= start; for a
/// declared custom tail it holds as a Theta-asymptotic; for PowerLaw the
/// terms admit a geometric majorant.
struct BlockLaw {
  enum class Kind { ExactGeometric, DeclaredGeometric, GeometricMajorant, FiniteSupport, Unknown };
  Kind kind = Kind::Unknown;
  int start = 0;
  int period = 1;
  double ratio = 0.0;
  std::string description;
};

inline BlockLaw term_block_law(const GroupSequence& seq, const StepDistribution& dist,
                               SeriesKind kind) {
  BlockLaw law;
  law.start = seq.period_start();
  law.period = seq.period_length();
  const BigInt P = seq.period_product();
  std::ostringstream desc;
  switch (dist.family()) {
    case Family::Geometric: {
      const double r = dist.param();
      law.kind = BlockLaw::Kind::ExactGeometric;
      law.ratio = 1.0 / (to_double(P) * std::pow(r, law.period / 2.0));
      desc << "geometric weights: sqrt(" << (kind == SeriesKind::Sufficient ? "Q_n" : "q_n")
           << ") scales by r^(L/2) per period, products by P; block ratio 1/(P r^(L/2)) = "
           << law.ratio;
      break;
    }
    case Family::SolenoidMatched: {
      const double kappa = dist.param();
      law.kind = BlockLaw::Kind::ExactGeometric;
      law.ratio = kappa == 2.0 ? 1.0 : neg_pow(P, 1.0 - kappa / 2.0);
      desc << "solenoid-matched weights: tails scale by P^-kappa per period; block ratio "
              "P^(kappa/2-1) = "
           << law.ratio;
      break;
    }
    case Family::PowerLaw: {
      law.kind = BlockLaw::Kind::GeometricMajorant;
      law.ratio = 1.0 / to_double(P);
      desc << "power-law weights: term_n <= a_max (n+1)^(s/2) / (sqrt(c) a_1...a_n); the "
              "majorant's block ratio tends to 1/P = "
           << law.ratio << " < 1";
      break;
    }
    case Family::FiniteSupport:
      law.kind = BlockLaw::Kind::FiniteSupport;
      desc << "finite support: Q_n = 0 beyond the last generator";
      break;
    case Family::CustomTable:
      if (dist.declared_tail()) {
        const double rho = dist.declared_tail()->geometric_rate;
        law.kind = BlockLaw::Kind::DeclaredGeometric;
        law.ratio = 1.0 / (to_double(P) * std::pow(rho, law.period / 2.0));
        desc << "declared tail law q_n = Theta(" << rho
             << "^n): terms are Theta of a block-geometric with ratio 1/(P rho^(L/2)) = "
             << law.ratio;
      } else {
        law.kind = BlockLaw::Kind::Unknown;
        desc << "custom table without a declared tail law";
      }
      break;
  }
  law.description = desc.str();
  return law;
}

inline double block_minimum(const GroupSequence& seq, const StepDistribution& dist,
                            SeriesKind kind, int start, int period) {
  double c = std::numeric_limits<double>::infinity();
  for (int n = start; n < start + period; ++n) {
    const double t = kind == SeriesKind::Sufficient ? sufficient_series_term(seq, dist, n)
                                                    : necessary_series_term(seq, dist, n);
    c = std::min(c, t);
  }
  return c;
}

}  // namespace detail

/// Decide a nonnegative series from its closed-form structure. Divergence
/// and convergence are only ever proven from that structure; partial sums
/// are diagnostics. Parameters within 1e-12 of the critical manifold
/// (block ratio 1) are treated as exactly critical.
inline SeriesDiagnostics series_verdict(const GroupSequence& seq,
                                        const StepDistribution& dist, SeriesKind kind,
                                        int n_terms) {
  SeriesDiagnostics diag;
  diag.series_id = kind == SeriesKind::Sufficient ? "sufficient" : "necessary";

  // computable diagnostic range
  int n_max = std::min(n_terms - 1, seq.depth_cap() - (kind == SeriesKind::Necessary ? 1 : 0));
  if (dist.family() == Family::CustomTable && kind == SeriesKind::Necessary)
    n_max = std::min(n_max, dist.max_index());
  double running = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (kind == SeriesKind::Necessary && !(dist.weight(n) > 0.0)) break;
    const double t = kind == SeriesKind::Sufficient ? sufficient_series_term(seq, dist, n)
                                                    : necessary_series_term(seq, dist, n);
    diag.terms.push_back(t);
    running += t;
    diag.partial_sums.push_back(running);
    if (!std::isfinite(t)) break;
  }

  const auto law = detail::term_block_law(seq, dist, kind);
  constexpr double kCriticalWindow = 1e-12;
  switch (law.kind) {
    case detail::BlockLaw::Kind::ExactGeometric: {
      if (law.ratio < 1.0 - kCriticalWindow) {
        diag.verdict = SeriesVerdict::ProvenConvergent;
        if (law.period == 1) {
          diag.reason = VerdictReason::RatioLimitBelowOne;
          diag.witness = law.ratio;
        } else {
          diag.reason = VerdictReason::ClosedFormComparison;
          diag.witness = law.ratio;
        }
        diag.description = law.description + "; exact block-geometric comparison";
      } else {
        // ratio >= 1: terms are exactly periodic (ratio 1) or grow; either
        // way bounded below by the minimum over one block.
        diag.verdict = SeriesVerdict::ProvenDivergent;
        diag.reason = VerdictReason::TermsBoundedBelow;
        diag.witness = detail::block_minimum(seq, dist, kind, law.start, law.period);
        diag.description =
            law.description + (law.ratio > 1.0 + kCriticalWindow
                                   ? "; terms grow block over block"
                                   : "; terms are exactly periodic beyond the preperiod");
      }
      break;
    }
    case detail::BlockLaw::Kind::DeclaredGeometric: {
      if (law.ratio < 1.0 - kCriticalWindow) {
        diag.verdict = SeriesVerdict::ProvenConvergent;
        diag.reason = VerdictReason::ClosedFormComparison;
        diag.witness = law.ratio;
        diag.description = law.description + "; geometric comparison under the declared law";
      } else if (law.ratio > 1.0 + kCriticalWindow) {
        diag.verdict = SeriesVerdict::ProvenDivergent;
        diag.reason = VerdictReason::TermsBoundedBelow;
        double c = std::numeric_limits<double>::infinity();
        for (std::size_t i = static_cast<std::size_t>(std::min<int>(
                 law.start, static_cast<int>(diag.terms.size())));
             i < diag.terms.size(); ++i)
          c = std::min(c, diag.terms[i]);
        diag.witness = c;
        diag.description =
            law.description + "; under the declared law terms grow without bound";
      } else {
        diag.verdict = SeriesVerdict::Undetermined;
        diag.reason = VerdictReason::None;
        diag.description =
            law.description + "; declared law sits on the critical manifold, Theta "
                              "constants cannot decide";
      }
      break;
    }
    case detail::BlockLaw::Kind::GeometricMajorant:
      diag.verdict = SeriesVerdict::ProvenConvergent;
      diag.reason = VerdictReason::ClosedFormComparison;
      diag.witness = law.ratio;
      diag.description = law.description;
      break;
    case detail::BlockLaw::Kind::FiniteSupport:
      if (kind == SeriesKind::Sufficient) {
        diag.verdict = SeriesVerdict::ProvenDivergent;
        diag.reason = VerdictReason::TermsBoundedBelow;
        diag.witness = std::numeric_limits<double>::infinity();
        diag.description = law.description + "; terms are +infinity beyond the support";
      } else {
        diag.verdict = SeriesVerdict::Undetermined;
        diag.description = law.description + "; positivity hypothesis fails";
      }
      break;
    case detail::BlockLaw::Kind::Unknown:
      diag.verdict = SeriesVerdict::Undetermined;
      diag.reason = VerdictReason::None;
      diag.description =
          law.description + "; refusing to extrapolate a finite table to an infinite series";
      break;
  }
  return diag;
}

enum class WalkVerdict { Recurrent, Transient, Inconclusive };
enum class FiredBy { Theorem1, Theorem2, FiniteSupportSpecialCase, None };

inline const char* to_string(WalkVerdict v) {
  switch (v) {
    case WalkVerdict::Recurrent: return "Recurrent";
    case WalkVerdict::Transient: return "Transient";
    case WalkVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline const char* to_string(FiredBy f) {
  switch (f) {
    case FiredBy::Theorem1: return "Theorem1";
    case FiredBy::Theorem2: return "Theorem2";
    case FiredBy::FiniteSupportSpecialCase: return "FiniteSupportSpecialCase";
    case FiredBy::None: return "None";
  }
  return "?";
}

struct ClassificationReport {
  WalkVerdict verdict = WalkVerdict::Inconclusive;
  FiredBy fired = FiredBy::None;
  SeriesDiagnostics sufficient;
  std::optional<SeriesDiagnostics> necessary;  // nullopt: positivity fails
  bool internal_contradiction = false;
  std::vector<std::string> notes;
};

struct ClassifyOptions {
  int n_terms = 64;
};

/// Three-valued classifier. Recurrent only on a proven-divergent sufficient
/// series (or the finitely supported special case); Transient only on a
/// proven-convergent necessary series under strict positivity; everything
/// else is Inconclusive, because the two theorems leave a genuine gap.
inline ClassificationReport classify(const GroupSequence& seq, const StepDistribution& dist,
                                     const ClassifyOptions& options = {}) {
  ClassificationReport report;
  const int n_terms = std::max(1, options.n_terms);
  report.sufficient = series_verdict(seq, dist, SeriesKind::Sufficient, n_terms);
  if (dist.strictly_positive()) {
    report.necessary = series_verdict(seq, dist, SeriesKind::Necessary, n_terms);
  } else {
    report.notes.push_back(
        "necessary series not applicable: the positivity hypothesis of the "
        "transience criterion (all q_j > 0) is not established");
  }

  if (report.sufficient.verdict == SeriesVerdict::ProvenDivergent && report.necessary &&
      report.necessary->verdict == SeriesVerdict::ProvenConvergent) {
    // Mutually inconsistent conclusions would falsify the implementation:
    // recurrence forces the necessary series to diverge.
    report.internal_contradiction = true;
    report.verdict = WalkVerdict::Inconclusive;
    report.fired = FiredBy::None;
    report.notes.push_back(
        "internal contradiction: sufficient series proven divergent while necessary "
        "series proven convergent");
    return report;
  }

  if (dist.family() == Family::FiniteSupport) {
    report.verdict = WalkVerdict::Recurrent;
    report.fired = FiredBy::FiniteSupportSpecialCase;
    report.notes.push_back(
        "finitely supported symmetric step law: the walk lives on the cyclic "
        "subgroup generated by the deepest generator, a copy of Z, where a "
        "symmetric bounded-step walk is recurrent by the classical "
        "one-dimensional criterion (outside the positivity hypothesis of the "
        "transience criterion)");
    return report;
  }

  if (report.sufficient.verdict == SeriesVerdict::ProvenDivergent) {
    report.verdict = WalkVerdict::Recurrent;
    report.fired = FiredBy::Theorem1;
    return report;
  }
  if (report.necessary && report.necessary->verdict == SeriesVerdict::ProvenConvergent) {
    report.verdict = WalkVerdict::Transient;
    report.fired = FiredBy::Theorem2;
    return report;
  }

  report.verdict = WalkVerdict::Inconclusive;
  report.fired = FiredBy::None;
  if (report.sufficient.verdict == SeriesVerdict::ProvenConvergent && report.necessary &&
      report.necessary->verdict == SeriesVerdict::ProvenDivergent) {
    report.notes.push_back(
        "gap case: the sufficient series converges and the necessary series "
        "diverges; neither criterion decides this law");
  }
  return report;
}

/// Specialized term formulas for reporting; for a constant sequence a_j = p
/// they reduce to the H_p forms.
inline bool is_constant_sequence(const GroupSequence& seq) {
  const auto& base = seq.base();
  for (auto a : base)
    if (a != base.front()) return false;
  return seq.extension() == Extension::Periodic ||
         seq.extension_constant() == base.front();
}

inline std::string sufficient_term_formula(const GroupSequence& seq) {
  if (is_constant_sequence(seq)) {
    const auto p = std::to_string(seq.base().front());
    return p + "^-n / sqrt(Q_n)";
  }
  return "1 / ((a_1...a_n) sqrt(Q_n))";
}

inline std::string necessary_term_formula(const GroupSequence& seq) {
  if (is_constant_sequence(seq)) {
    const auto p = std::to_string(seq.base().front());
    return p + " * " + p + "^-n / sqrt(q_n)";
  }
  return "a_{n+1} / ((a_1...a_n) sqrt(q_n))";
}

}  // namespace solwalk
