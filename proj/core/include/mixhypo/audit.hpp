#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixhypo/family.hpp"

namespace mixhypo {

// Verdict for one audited display. MATCH: the printed formula agrees with
// the numerical oracle. ERRATUM: the printed formula disagrees but the
// corrected form agrees, i.e. a documented transcription error. SKIPPED:
// the display is not numerically evaluable as printed (divergent series or
// ill-typed expression); carries a citation and an explanation. FAILED:
// the corrected form itself disagrees with the oracle — an implementation
// defect, never an expected finding.
enum class Verdict { MATCH, ERRATUM, SKIPPED, FAILED };

std::string_view verdict_name(Verdict v);

// One audited display or one sampling check. Curve checks (CDF,
// reliability, hazard) evaluate all three routes on a quantile grid;
// rel_diff is the worst printed-vs-oracle relative gap over the grid and
// the value fields snapshot that worst point. Single-value checks (moment,
// MGF) fill the fields directly. KS checks store the observed distance in
// rel_diff and the critical value in tolerance, with the value fields
// empty.
struct AuditCheck {
    std::string name;      // e.g. "mhw/corollary/cdf", "ks/mhe/n3"
    std::string citation;  // which display this audits, self-describing
    Verdict verdict = Verdict::SKIPPED;
    std::optional<double> printed_value;        // formula as printed
    std::optional<double> corrected_value;      // corrected closed form
    std::optional<double> oracle_value;         // quadrature / reference
    std::optional<double> abs_diff;             // |printed - oracle|
    std::optional<double> rel_diff;             // printed vs oracle
    std::optional<double> corrected_rel_diff;   // corrected vs oracle
    double tolerance = 0.0;
    std::string note;
};

struct OracleReport {
    std::vector<AuditCheck> checks;  // sorted by name
    double tolerance = 1e-6;         // MATCH threshold for formula checks
    std::uint64_t seed = 0;          // nonzero only when sampling was used
    double runtime_seconds = 0.0;

    bool any_failed() const;
};

// sup-distance between the empirical CDF of samples and cdf, evaluated at
// the sorted sample points (both one-sided gaps at each point).
// ConstructionError on an empty sample.
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);

// Parameters the audit and KS suites run at. Chosen so every documented
// discrepancy is numerically visible (in particular no unit scales, which
// would mask a dropped scale factor, and no shape/scale coincidences that
// make a symbol swap value-neutral). n_components in [1, 4].
FamilySpec default_audit_spec(Family family, int n_components = 2);

// Audits every printed closed-form display attached to spec's family: the
// base law's CDF / reliability / MGF / moment displays and the family
// corollary displays. Curve displays are compared against quadrature of
// the density at `grid` quantile points; moment displays are audited at
// order 1 and MGF displays at t = 0.3. Findings are report entries, never
// exceptions.
OracleReport audit_closed_forms(const FamilySpec& spec, int grid = 21);

// Construction equivalence: for each family and n in {2,3,4}, n_samples
// transform-route draws against the signed-mixture CDF, one KS check each
// (18 cases). Per-case substreams are derived from seed in a fixed order,
// so the whole suite is deterministic.
OracleReport run_ks_suite(std::uint64_t seed, std::int64_t n_samples = 100000);

// Union of several reports: checks re-sorted by name, runtimes summed,
// seed taken from the first part that set one.
OracleReport merge_reports(std::vector<OracleReport> parts);

}  // namespace mixhypo
