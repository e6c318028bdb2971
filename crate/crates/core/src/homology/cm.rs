//! Homological form of weak Cohen–Macaulayness of `C^n`.

use serde_json::json;

use super::connectivity_report;
use crate::complexes::{build_cn, check_links, ComplexError};
use crate::diagrams::FamilySpec;
use crate::report::Report;

/// `C^n` is homologically `(n-1)`-connected and the link of every
/// `p`-simplex is homologically `(n-p-2)`-connected. One simplex per
/// `W_n`-orbit is examined; the links are also compared with `C^{n-p-1}`.
pub fn check_weakly_cm(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check cm", json!({"family": spec.name(), "n": n}));
    let cn = build_cn(spec, n, cap)?;
    let nu = cn.n();
    let whole = connectivity_report(&cn.complex, nu as i64 - 1, false);
    report.extend("complex.", whole);
    for p in 0..=nu {
        let orbits = cn.action.orbits(&cn.complex, p);
        let need = nu as i64 - p as i64 - 2;
        let mut failing = None;
        for orbit in &orbits {
            let simplex = &cn.complex.simplices(p)[orbit[0]];
            let link = cn.complex.link(simplex)?;
            let r = connectivity_report(&link, need, false);
            if !r.passed() && failing.is_none() {
                failing = Some(json!({"simplex": simplex, "link_f_vector": link.f_vector(), "report": r.checks}));
            }
        }
        report.push_witness(
            format!("link_p{p}"),
            failing.is_none(),
            json!({"orbits": orbits.len(), "connectivity": need}),
            failing,
        );
    }
    let links = check_links(spec, n, cap, false)?;
    report.push("links_match_smaller_complexes", links.passed(), json!({"checks": links.checks.len()}));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, Builtin};

    #[test]
    fn builtins_are_weakly_cm() {
        for (b, nmax) in [(Builtin::A, 3), (Builtin::B, 2), (Builtin::D, 2)] {
            for n in 0..=nmax {
                let r = check_weakly_cm(&builtin_family(b).unwrap(), n, 100_000).unwrap();
                assert!(r.passed(), "{b} {n}\n{}", r.to_text());
            }
        }
    }

    #[test]
    fn top_links_are_vacuous() {
        let r = check_weakly_cm(&builtin_family(Builtin::B).unwrap(), 1, 1000).unwrap();
        assert_eq!(r.get("link_p1").unwrap().detail["connectivity"], json!(-2));
    }
}
