#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "roofcoh/parallel.hpp"
#include "roofcoh/report.hpp"
#include "roofcoh/sample.hpp"
#include "roofcoh/verify.hpp"

namespace roofcoh {

/// Everything a randomized sweep needs to be reproduced exactly: dims, count,
/// measure, inequality ids, seed, tolerances, and roof overrides. The spec is
/// embedded verbatim in the CSV header, and rerunning the same spec yields a
/// byte-identical report regardless of thread count.
struct SweepSpec {
  std::vector<int> dims;
  int count = 100;
  std::string measure = "formation";
  std::vector<std::string> inequalities;
  std::uint64_t seed = 0;
  double tol = kPureCheckTol;       // pure-state checks
  double roof_tol = kRoofCheckTol;  // checks with a roof value on either side
  int mixed_rank = 2;               // rank of sampled mixed states
  bool exploratory = false;         // record gaps without asserting their sign
  RoofConfig roof;                  // per-row seeds are derived from `seed`
  std::string out_path;             // not part of row determinism

  nlohmann::json to_json() const {
    return nlohmann::json{{"dims", dims},
                          {"count", count},
                          {"measure", measure},
                          {"inequalities", inequalities},
                          {"seed", seed},
                          {"tol", tol},
                          {"roof_tol", roof_tol},
                          {"mixed_rank", mixed_rank},
                          {"exploratory", exploratory},
                          {"roof",
                           {{"ensemble_size", roof.ensemble_size},
                            {"restarts", roof.restarts},
                            {"max_iters", roof.max_iters},
                            {"obj_tol", roof.obj_tol}}}};
  }

  static SweepSpec from_json(const nlohmann::json& j) {
    SweepSpec spec;
    spec.dims = j.at("dims").get<std::vector<int>>();
    spec.count = j.at("count").get<int>();
    spec.measure = j.at("measure").get<std::string>();
    spec.inequalities = j.at("inequalities").get<std::vector<std::string>>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) spec.tol = j["tol"].get<double>();
    if (j.contains("roof_tol")) spec.roof_tol = j["roof_tol"].get<double>();
    if (j.contains("mixed_rank")) spec.mixed_rank = j["mixed_rank"].get<int>();
    if (j.contains("exploratory")) spec.exploratory = j["exploratory"].get<bool>();
    if (j.contains("roof")) {
      const auto& r = j["roof"];
      if (r.contains("ensemble_size")) spec.roof.ensemble_size = r["ensemble_size"].get<int>();
      if (r.contains("restarts")) spec.roof.restarts = r["restarts"].get<int>();
      if (r.contains("max_iters")) spec.roof.max_iters = r["max_iters"].get<int>();
      if (r.contains("obj_tol")) spec.roof.obj_tol = r["obj_tol"].get<double>();
    }
    return spec;
  }
};

struct SweepSummary {
  int rows = 0;
  double min_gap = 0.0;
  double max_gap = 0.0;
  double mean_gap = 0.0;
  int fails = 0;
  int findings = 0;
  int indeterminates = 0;

  int violations() const { return fails + findings; }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<LabeledReport> rows;
  SweepSummary summary;
};

inline const std::vector<std::string>& known_inequalities() {
  static const std::vector<std::string> ids = {
      "bipartite-sufficient", "bipartite-alternative", "tripartite",
      "npartite",             "reduced-superadditivity", "mixed-superadditivity",
      "product-additivity",   "mult-separability"};
  return ids;
}

namespace detail {

inline bool is_superadditivity_check(const std::string& id) {
  return id == "bipartite-sufficient" || id == "bipartite-alternative" ||
         id == "tripartite" || id == "npartite" || id == "reduced-superadditivity" ||
         id == "mixed-superadditivity";
}

inline void validate_arity(const SweepSpec& spec, const std::string& id) {
  const int parties = static_cast<int>(spec.dims.size());
  if ((id == "bipartite-sufficient" || id == "bipartite-alternative") && parties != 2) {
    throw std::invalid_argument(id + " requires exactly 2 parties");
  }
  if (id == "tripartite" && parties != 3) {
    throw std::invalid_argument("tripartite requires exactly 3 parties");
  }
  if ((id == "npartite" || id == "reduced-superadditivity" ||
       id == "mixed-superadditivity" || id == "product-additivity") &&
      parties < 2) {
    throw std::invalid_argument(id + " requires at least 2 parties");
  }
  if (id == "mult-separability" && parties != 2) {
    throw std::invalid_argument("mult-separability uses dims as the two vector lengths");
  }
}

/// One report for inequality `id` on the state drawn from `state_seed`.
inline VerificationReport sweep_row(const SweepSpec& spec, const CoherenceFunctional& f,
                                    const std::string& id, std::uint64_t state_seed) {
  const SubsystemShape shape(spec.dims);
  if (id == "bipartite-sufficient") {
    return check_bipartite_sufficient(haar_pure(shape, state_seed), f, spec.tol);
  }
  if (id == "bipartite-alternative") {
    return check_bipartite_alternative(haar_pure(shape, state_seed), f, spec.tol);
  }
  if (id == "tripartite") {
    return check_tripartite(haar_pure(shape, state_seed), f, spec.tol);
  }
  if (id == "npartite") {
    return check_npartite(haar_pure(shape, state_seed), f, spec.tol);
  }
  if (id == "reduced-superadditivity") {
    const PureState psi = haar_pure(shape, state_seed);
    const bool all_qubits =
        std::all_of(spec.dims.begin(), spec.dims.end(), [](int d) { return d == 2; });
    const bool closed = all_qubits && f.name() == "formation";
    RoofConfig cfg = spec.roof;
    cfg.seed = state_seed;
    return check_superadditivity_reduced(
        psi, f, closed ? spec.tol : spec.roof_tol,
        closed ? MarginalMethod::closed_form : MarginalMethod::roof_optimizer, cfg);
  }
  if (id == "mixed-superadditivity") {
    const DensityMatrix rho = ginibre_mixed(shape, spec.mixed_rank, state_seed);
    RoofConfig cfg = spec.roof;
    cfg.seed = state_seed;
    return check_mixed_superadditivity(rho, f, cfg, spec.roof_tol);
  }
  if (id == "product-additivity") {
    return check_product_additivity(random_product_pure(shape, state_seed).parts, f,
                                    spec.tol);
  }
  if (id == "mult-separability") {
    auto draw_probs = [](int d, std::uint64_t s) {
      return diag_probs(haar_pure(SubsystemShape({d}), s));
    };
    const ProbabilityVector x = draw_probs(spec.dims[0], rng::derive_stream(state_seed, 0));
    const ProbabilityVector y = draw_probs(spec.dims[1], rng::derive_stream(state_seed, 1));
    const SeparabilityCheck check = check_mult_separability(f, x, y, spec.tol);
    VerificationReport report;
    report.inequality_id = "mult-separability";
    report.lhs = check.f_xy;
    report.rhs_terms = {{"f_x", check.f_x}, {"f_y", check.f_y}};
    report.gap = report.lhs - report.rhs_total();
    report.tol = spec.tol;
    report.verdict = check.pass ? Verdict::pass : Verdict::fail;
    report.direction_notes = "equality check, |gap| <= tol, both sides exact";
    std::uint64_t h = fnv1a64("probs", 5);
    for (Eigen::Index i = 0; i < x.size(); ++i) h = fnv1a64_double(x(i), h);
    for (Eigen::Index i = 0; i < y.size(); ++i) h = fnv1a64_double(y(i), h);
    report.input_digest = hex16(h);
    return report;
  }
  throw std::invalid_argument("unknown inequality id: " + id);
}

}  // namespace detail

/// Runs count x inequalities checks. Row i uses the state stream derived from
/// (seed, i); rows are emitted in (state, inequality) order regardless of how
/// the work is scheduled. In exploratory mode superadditivity gaps are
/// recorded without a pass/fail claim, and any gap below -tol becomes a
/// FINDING row.
inline SweepResult run_sweep(const SweepSpec& spec,
                             const FunctionalRegistry& registry = FunctionalRegistry::builtins()) {
  if (spec.count < 1) throw std::invalid_argument("sweep: count must be >= 1");
  if (spec.inequalities.empty()) {
    throw std::invalid_argument("sweep: at least one inequality id required");
  }
  for (const auto& id : spec.inequalities) detail::validate_arity(spec, id);
  const CoherenceFunctional& f = registry.get(spec.measure);
  const SubsystemShape shape(spec.dims);

  SweepResult result;
  result.spec = spec;
  const int per_state = static_cast<int>(spec.inequalities.size());
  result.rows.assign(static_cast<std::size_t>(spec.count) * per_state, LabeledReport{});
  parallel_for(spec.count, [&](int i) {
    const std::uint64_t state_seed = rng::derive_stream(spec.seed, static_cast<std::uint64_t>(i));
    for (int k = 0; k < per_state; ++k) {
      const std::string& id = spec.inequalities[static_cast<std::size_t>(k)];
      VerificationReport report = detail::sweep_row(spec, f, id, state_seed);
      report.seed = state_seed;
      LabeledReport row;
      const bool exploratory_row = spec.exploratory && detail::is_superadditivity_check(id);
      if (exploratory_row) {
        row.finding = report.gap < -report.tol;
        report.verdict = Verdict::indeterminate;  // recorded, not asserted
        report.direction_notes += "; exploratory sweep: gap recorded without sign assertion";
      } else {
        row.finding = false;
      }
      row.report = std::move(report);
      row.dims = shape.to_string();
      row.measure = spec.measure;
      result.rows[static_cast<std::size_t>(i) * per_state + static_cast<std::size_t>(k)] =
          std::move(row);
    }
  });

  SweepSummary& summary = result.summary;
  summary.rows = static_cast<int>(result.rows.size());
  summary.min_gap = result.rows.front().report.gap;
  summary.max_gap = summary.min_gap;
  double total = 0.0;
  for (const auto& row : result.rows) {
    summary.min_gap = std::min(summary.min_gap, row.report.gap);
    summary.max_gap = std::max(summary.max_gap, row.report.gap);
    total += row.report.gap;
    if (row.finding) {
      ++summary.findings;
    } else if (row.report.verdict == Verdict::fail) {
      ++summary.fails;
    } else if (row.report.verdict == Verdict::indeterminate) {
      ++summary.indeterminates;
    }
  }
  summary.mean_gap = total / summary.rows;
  return result;
}

inline std::string sweep_csv(const SweepResult& result) {
  std::string out;
  out += "# roofcoh sweep v1\n";
  out += std::string("# prng: ") + rng::kAlgorithm + "\n";
  out += "# spec: " + result.spec.to_json().dump() + "\n";
  out += csv_header();
  out += '\n';
  for (const auto& row : result.rows) {
    out += csv_row(row);
    out += '\n';
  }
  const SweepSummary& s = result.summary;
  out += "# summary: rows=" + std::to_string(s.rows) + " min_gap=" + format_double(s.min_gap) +
         " mean_gap=" + format_double(s.mean_gap) + " max_gap=" + format_double(s.max_gap) +
         " fails=" + std::to_string(s.fails) + " findings=" + std::to_string(s.findings) +
         " indeterminate=" + std::to_string(s.indeterminates) + "\n";
  return out;
}

/// Gap histogram as plain columns "bin_lo bin_hi count" — data for external
/// plotting, no rendering here.
inline std::string sweep_histogram(const SweepResult& result, int bins = 32) {
  const SweepSummary& s = result.summary;
  double lo = s.min_gap;
  double hi = s.max_gap;
  if (hi <= lo) hi = lo + 1e-15;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& row : result.rows) {
    int bin = static_cast<int>((row.report.gap - lo) / (hi - lo) * bins);
    bin = std::clamp(bin, 0, bins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  std::string out = "# gap histogram: bin_lo bin_hi count\n";
  for (int b = 0; b < bins; ++b) {
    const double left = lo + (hi - lo) * b / bins;
    const double right = lo + (hi - lo) * (b + 1) / bins;
    out += format_double(left) + " " + format_double(right) + " " +
           std::to_string(counts[static_cast<std::size_t>(b)]) + "\n";
  }
  return out;
}

}  // namespace roofcoh
