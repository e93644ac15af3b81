#pragma once

#include "nsoc/objective.hpp"
#include "nsoc/operator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsoc {

/// Pass thresholds of the individual checks.
struct StationarityTolerances {
  double b_stat_rel = 1e-5;      // min J' >= -b_stat_rel * (1 + |J|)
  double strong = 1e-5;          // strong-system residuals
  double multiplier = 1e-4;      // multiplier-system residual
  double mu_under_cq = 1e-5;     // |mu| when the constraint qualification holds
  double bound_case = 1e-6;      // adjoint inequalities at (u_b, v_b)
  double probe_radius = 1.0;     // spread of random admissible probes
};

struct ProbeRecord {
  std::string kind;
  double value = 0.0;
};

struct BStationarity {
  double min_value = 0.0;
  double scale = 1.0;  // 1 + |J(w)|
  std::vector<ProbeRecord> probes;
  bool pass = false;
};

/// Samples J'(w; u - w_u, v - w_v) over admissible (u, v); deterministic for a given seed.
BStationarity check_b_stationarity(const ProblemSpec& spec, const ControlPair& w, int n_probes,
                                   std::uint64_t seed, const StationarityTolerances& tol = {});

/// Nodes with |u - u_b| <= active_tol.
std::vector<bool> active_set_omega(const ProblemSpec& spec, const ControlPair& w);
std::vector<bool> active_set_gamma(const ProblemSpec& spec, const ControlPair& w);
double active_tolerance_omega(const ProblemSpec& spec);
double active_tolerance_gamma(const ProblemSpec& spec);

/// Measure of the geometric kink band that lies within one cell of the active set.
double check_cq(const ProblemSpec& spec, const ControlPair& w, const Field& y);
/// Threshold below which the constraint qualification counts as satisfied.
double cq_threshold(const ProblemSpec& spec);

struct StrongRecord {
  Field p;            // adjoint with coefficient a_tilde
  Field a_tilde;
  Field zeta_omega;
  BoundaryField zeta_gamma;
  double inactive_omega = 0.0;  // max |zeta_Omega| off the active set
  double active_omega = 0.0;    // max(0, -min zeta_Omega) on the active set
  double inactive_gamma = 0.0;
  double active_gamma = 0.0;
  double sign = 0.0;    // max(0, -p (d1' - d2')) on the kink band
  double clarke = 0.0;  // distance of a_tilde to the Clarke interval
  double cq = 0.0;
  bool conditional = false;
  bool pass = false;

  double max_residual() const;
};

StrongRecord check_strong_stationarity(const ProblemSpec& spec, const ControlPair& w,
                                       const Field& y, const StationarityTolerances& tol = {});

struct MultiplierRecord {
  Side side = Side::Minus;
  Field p;
  Field mu;
  Field zeta_omega;
  BoundaryField zeta_gamma;
  double residual_max = 0.0;  // max nodal stationarity residual
  double residual_l2 = 0.0;   // quadrature-weighted residual
  double mu_norm = 0.0;       // |mu|_Omega
  double mu_min = 0.0;
  bool support_in_band = true;
  int band_nodes = 0;
  bool pass = false;
};

MultiplierRecord check_multiplier_system(const ProblemSpec& spec, const ControlPair& w,
                                         const Field& y, Side side,
                                         const StationarityTolerances& tol = {});

struct BoundCaseRecord {
  Field p;
  double omega = 0.0;  // min(-p / kappa_Omega - u_b)
  double gamma = 0.0;  // min(-trace p / kappa_Gamma - v_b)
  bool pass = false;
};

BoundCaseRecord check_bound_case(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                                 const StationarityTolerances& tol = {});

struct AppendixRecord {
  double strong_residual = 0.0;    // max |-Delta_h y + d(y) - u| at interior nodes
  double band_laplacian = 0.0;     // max |Delta_h y| on interior band nodes
  double band_discrepancy = 0.0;   // max |u - d(t_bar)| on interior band nodes
  int band_nodes = 0;
};

AppendixRecord check_appendix_levelset(const ProblemSpec& spec, const ControlPair& w,
                                       const Field& y);

struct EquivalenceVerdict {
  bool b_pass = false;
  bool strong_pass = false;
  bool cq_holds = false;
  bool conditional = false;
  bool strong_implies_b = true;
  bool b_implies_strong = true;
  bool pass = false;
};

EquivalenceVerdict equivalence_verdict(const BStationarity& b, const StrongRecord& s, double cq,
                                       double cq_thr);
EquivalenceVerdict check_equivalence(const ProblemSpec& spec, const ControlPair& w, int n_probes,
                                     std::uint64_t seed, const StationarityTolerances& tol = {});

struct StationarityReport {
  BStationarity b_stat;
  double cq = 0.0;
  double cq_threshold = 0.0;
  StrongRecord strong;
  std::optional<MultiplierRecord> multiplier_minus;
  std::optional<MultiplierRecord> multiplier_plus;
  std::optional<BoundCaseRecord> ubvb;
  AppendixRecord appendix;
  EquivalenceVerdict equivalence;
  double objective = 0.0;

  bool all_pass() const;
};

StationarityReport verify_stationarity(const ProblemSpec& spec, const ControlPair& w,
                                       int n_probes, std::uint64_t seed,
                                       const StationarityTolerances& tol = {});

}  // namespace nsoc
