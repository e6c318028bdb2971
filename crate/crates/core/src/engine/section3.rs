//! Exhaustive verification of the algebraic facts about the cosets
//! `s_j ⋯ s_n W_{n-1}` that the complex `C^n` is built on.

use std::collections::HashMap;

use serde_json::json;

use crate::diagrams::FamilySpec;
use crate::report::Report;

use super::{EngineError, Tower};

/// Four checks, each by enumeration over `W_n`:
/// - `permutations`: `s_i` swaps `s_i⋯s_n W_{n-1}` and `s_{i+1}⋯s_n W_{n-1}` and fixes the rest;
/// - `intersection`: `W_{i-1} ∩ u W_{n-1} u^{-1} = W_{i-2}` for `u = s_i⋯s_n`;
/// - `tuple_stabilizer`: agreeing on `σ s_j⋯s_n W_{n-1}`, `j >= i`, forces `σ^{-1}τ ∈ W_{i-2}`;
/// - `distinct`: the cosets `c s_j⋯s_n W_{n-1}` are pairwise distinct.
pub fn check_section3(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, EngineError> {
    let mut report = Report::new("check s3", json!({"family": spec.name(), "n": n}));
    if n < 1 {
        report.skip("permutations", "needs n >= 1");
        return Ok(report);
    }
    let tower = Tower::new(spec, n)?;
    let elems = tower.elements(cap)?;
    let cosets = tower.cosets(n - 1, cap)?;
    let nu = n as usize;
    let level = |g: usize| tower.level_of_support(elems.support_mask(g));
    let suffix_elem: Vec<usize> = (1..=nu + 1).map(|j| elems.element_of(&tower.suffix(j))).collect();
    let proj = elems.project(&cosets);
    let x: Vec<usize> = suffix_elem.iter().map(|&e| proj[e] as usize).collect();

    // permutations
    let mut witness = None;
    for i in 1..=nu {
        for j in 1..=nu + 1 {
            let expected = if j == i {
                x[i]
            } else if j == i + 1 {
                x[i - 1]
            } else {
                x[j - 1]
            };
            if cosets.act(x[j - 1], tower.s(i)) != expected && witness.is_none() {
                witness = Some(json!({"i": i, "j": j}));
            }
        }
    }
    report.push_witness("permutations", witness.is_none(), json!({"cosets": nu + 1}), witness);

    // intersection
    let mut witness = None;
    'inter: for i in 1..=nu {
        let u = suffix_elem[i - 1];
        let u_inv = elems.inverse(u);
        for g in 0..elems.len() {
            let conj = elems.multiply(elems.multiply(u_inv, g), u);
            let lhs = level(g) <= i as i64 - 1 && level(conj) <= n - 1;
            let rhs = level(g) <= i as i64 - 2;
            if lhs != rhs {
                witness = Some(json!({"i": i, "element": tower.system.format_word(&elems.word(g))}));
                break 'inter;
            }
        }
    }
    report.push_witness("intersection", witness.is_none(), json!({"group_order": elems.len()}), witness);

    // tuple stabilizer; g·x_j computed through the left action on cosets
    let images: Vec<Vec<usize>> = (0..elems.len())
        .map(|g| {
            let w = elems.word(g);
            x.iter().map(|&c| cosets.act_word(&w, c)).collect()
        })
        .collect();
    let mut witness = None;
    'tuple: for i in 1..=nu {
        let mut first_with: HashMap<&[usize], usize> = HashMap::new();
        for (g, img) in images.iter().enumerate() {
            let key = &img[i - 1..];
            match first_with.get(key) {
                None => {
                    first_with.insert(key, g);
                }
                Some(&s) => {
                    if level(elems.multiply(elems.inverse(s), g)) > i as i64 - 2 {
                        witness = Some(json!({
                            "i": i,
                            "sigma": tower.system.format_word(&elems.word(s)),
                            "tau": tower.system.format_word(&elems.word(g)),
                        }));
                        break 'tuple;
                    }
                }
            }
        }
    }
    report.push_witness("tuple_stabilizer", witness.is_none(), json!(null), witness);

    // distinct
    let bad = images.iter().position(|img| {
        let mut v = img.clone();
        v.sort_unstable();
        v.dedup();
        v.len() != img.len()
    });
    let witness = bad.map(|g| json!({"c": tower.system.format_word(&elems.word(g))}));
    report.push_witness("distinct", bad.is_none(), json!(null), witness);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, parse_diagram, Builtin};

    #[test]
    fn builtin_families_pass() {
        for (b, n) in [(Builtin::A, 1), (Builtin::A, 3), (Builtin::B, 2), (Builtin::D, 2), (Builtin::I(5), 1)] {
            let r = check_section3(&builtin_family(b).unwrap(), n, 100_000).unwrap();
            assert!(r.passed(), "{b} n={n}: {}", r.to_text());
            assert_eq!(r.checks.len(), 4);
        }
    }

    #[test]
    fn custom_family_with_odd_label_passes() {
        let spec = FamilySpec::from_diagram(parse_diagram("vertices a b; edge a b 5; preferred b").unwrap()).unwrap();
        assert!(check_section3(&spec, 2, 100_000).unwrap().passed());
    }

    #[test]
    fn infinite_group_reports_cap() {
        let r = check_section3(&builtin_family(Builtin::I(7)).unwrap(), 2, 5000);
        assert!(matches!(r, Err(EngineError::CapExceeded { .. })));
    }
}
