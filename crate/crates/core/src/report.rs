//! Machine-readable check rows. Every verification in the crate reports
//! through these types; rows are strictly ordered and field order is
//! fixed, so serialized reports are byte-stable across runs.

use serde::Serialize;

/// Grade of a check: theorem-backed failures break the build, while
/// conjecture-grade failures are findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Theorem,
    Conjecture,
}

/// Status of one check row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Finding,
    Skipped,
}

/// One report row. `check` is the stable identifier listed in
/// docs/checks.md; `params` is a deterministic key=value listing.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub grade: Grade,
    pub status: Status,
    pub params: String,
    pub detail: String,
    /// No verification in this crate depends on a choice of complex
    /// embedding; recorded per row for auditability.
    pub iota_dependent: bool,
}

impl CheckRow {
    pub fn new(
        check: &'static str,
        grade: Grade,
        status: Status,
        params: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        CheckRow {
            check,
            grade,
            status,
            params: params.into(),
            detail: detail.into(),
            iota_dependent: false,
        }
    }

    pub fn pass(check: &'static str, grade: Grade, params: impl Into<String>) -> Self {
        Self::new(check, grade, Status::Pass, params, "")
    }

    pub fn is_breaking(&self) -> bool {
        self.grade == Grade::Theorem && self.status == Status::Fail
    }
}

/// All check identifiers the crate can emit, with one-line descriptions.
/// docs/checks.md mirrors this table; a test keeps the two in sync.
pub const CHECK_INDEX: &[(&str, &str)] = &[
    ("presentation-rank", "relative and cuspidal ranks match the genus and cusp-count formulas"),
    ("two-term-relation", "symbol relation [u:v] + [-v:u] = 0 holds in the presentation"),
    ("three-term-relation", "symbol relation [u:v] = [u:u+v] + [u+v:v] holds in the presentation"),
    ("diamond-scaling", "diamond operators satisfy <j>^{-1}[u:v] = [ju:jv]"),
    ("hecke-eigenvalue", "pinned Hecke eigenvalue on a known cuspidal space"),
    ("hecke-commutativity", "constructed Hecke and diamond operators commute"),
    ("hecke-aggregation", "U_t xi(tu:v) equals the sum of xi(u+kQ:v) over k"),
    ("quotient-aggregation", "the aggregation identity descends to the Eisenstein quotient"),
    ("ordinary-idempotent", "the ordinary projector is idempotent and central"),
    ("ordinary-cusp-vanishing", "infinity-type cusps die in the ordinary boundary module"),
    ("splitting-section", "the splitting restricts to the identity on ordinary cuspidal classes"),
    ("splitting-equivariance", "the splitting commutes with the Hecke action"),
    ("xi-residue-invariance", "xi(u:v) depends only on the residues of u and v"),
    ("eisenstein-locus-vs-bernoulli", "locus nonzero exactly when p divides B_{1,theta}"),
    ("eisenstein-quotient-order", "order of the Eisenstein quotient at the flagship sector"),
    ("congruence-module-cyclic", "congruence module is cyclic, generated by the (0,1)-cusp class"),
    ("xi-table", "table of xi-bar classes per sector"),
    ("pairing-antisymmetry", "the intersection pairing is antisymmetric"),
    ("pairing-perfect", "unit Gram determinant on the relevant part"),
    ("pairing-self-adjoint", "Hecke operators are self-adjoint for the twisted pairing"),
    ("pairing-isotropy", "each star eigenspace pairs trivially with itself"),
    ("pairing-diamond-bilinear", "the group-ring pairing layer is diamond-bilinear"),
    ("pairing-level-compat", "the level-compatibility identity of the pairing layers"),
    ("pairing-sector-perfect", "sector layers of the group-ring pairing are perfect"),
    ("theta-pushforward", "theta layers are compatible under level pushforward"),
    ("theta-local-membership", "theta coefficients lie in the Eisenstein-local part"),
    ("diamond-inversion", "the diamond-inversion identity for specialized symbols"),
    ("functional-equation", "the assembled functional equation of the specialized layers"),
    ("compare-full-vs-star", "full and star theta layers agree up to Euler factors"),
    ("compare-specialized", "the specialized comparison identity"),
    ("compare-divisor-level", "the divisor-level comparison identity"),
    ("star-odd-vanishing", "star layers vanish under odd twist characters"),
    ("specialization-separates", "joint kernel of the specialization maps is zero"),
    ("distribution-normal-form", "normal forms are idempotent and kill the relation module"),
    ("mobius-sieve", "the Moebius sieve identity in the star group ring"),
    ("unit-euler-factor", "unit comparison with Euler factors (part a)"),
    ("unit-index-ratio", "unit comparison across divisor levels (part b)"),
    ("dual-pushforward-compat", "dual functionals push forward compatibly across levels"),
    ("relation-module-well-defined", "all symbol relations die in the relation module"),
    ("relation-module-equivariance", "the relation-module map intertwines diamonds and the group action"),
    ("eisenstein-hecke-transport", "the relation-module map transports T_l Eisenstein-style"),
    ("shadow-antisymmetry", "xi-bar antisymmetry (conjecture-grade shadow)"),
    ("shadow-diagonal", "xi-bar vanishes on the diagonal (conjecture-grade shadow)"),
    ("shadow-negation", "xi-bar sign invariances (conjecture-grade shadow)"),
    ("cache-roundtrip", "cache entries survive a write/read round trip"),
    ("report-determinism", "repeated runs produce byte-identical reports"),
];

/// Look up the description of a check id.
pub fn check_description(id: &str) -> Option<&'static str> {
    CHECK_INDEX.iter().find(|(k, _)| *k == id).map(|&(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_has_no_duplicates() {
        let mut ids: Vec<&str> = CHECK_INDEX.iter().map(|&(k, _)| k).collect();
        ids.sort_unstable();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }
}
