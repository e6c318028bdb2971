//! Exhaustive checks of the combinatorics of `C^n`: transitivity, links and
//! stabilizers of faces of the base chamber.

use std::collections::{BTreeSet, HashMap};

use serde_json::json;

use crate::diagrams::FamilySpec;
use crate::report::Report;

use super::{
    barycentric_subdivision, base_chamber, build_cn, iso_check, ComplexError, CosetComplex, GroupAction, Simplex,
    SimplicialComplex, DEFAULT_ISO_BUDGET,
};

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Orbit counts of `W_n` on simplices of `C^n` and of `sd C^n`, realization of
/// every vertex permutation of a simplex, and the fixed-point property of `sd C^n`.
pub fn check_transitivity(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check transitivity", json!({"family": spec.name(), "n": n}));
    let cn = build_cn(spec, n, cap)?;
    let nu = cn.n();
    let order = cn.elements.len();
    let k = &cn.complex;

    let orbit_counts: Vec<usize> = (0..=nu).map(|d| cn.action.orbits(k, d).len()).collect();
    report.push("orbits", orbit_counts.iter().all(|&c| c == 1), json!({"per_dimension": orbit_counts}));

    let facets = k.facets();
    let pure = facets.iter().all(|f| f.len() == nu + 1);
    report.push("pure", pure, json!({"facets": facets.len()}));

    let perms = cn.element_perms();
    let mut realized = Vec::new();
    let mut stab_sizes = Vec::new();
    for d in 0..=nu {
        let base = cn.lift(0, d);
        let mut sorted = base.clone();
        sorted.sort_unstable();
        let mut seen = BTreeSet::new();
        let mut stab = 0;
        for p in &perms {
            if GroupAction::apply(p, &base) == sorted {
                stab += 1;
                let pos: Vec<usize> =
                    base.iter().map(|&v| base.iter().position(|&w| w == p[v as usize]).unwrap()).collect();
                seen.insert(pos);
            }
        }
        realized.push(seen.len());
        stab_sizes.push(stab);
    }
    let all_realized = realized.iter().enumerate().all(|(d, &r)| r == factorial(d + 1));
    report.push("permutations_realized", all_realized, json!({"distinct": realized}));
    let orbit_stab = (0..=nu).all(|d| k.count(d) * stab_sizes[d] == order);
    report.push(
        "orbit_stabilizer",
        orbit_stab,
        json!({"orbit_sizes": k.f_vector(), "stabilizer_sizes": stab_sizes, "group_order": order}),
    );

    let sd = barycentric_subdivision(k);
    let sd_action = sd.induced_action(&cn.action);
    let sd_orbits = sd_action.orbits(&sd.complex, nu).len();
    report.push(
        "sd_top_orbits",
        sd_orbits == 1 && sd.complex.count(nu) == order,
        json!({"orbits": sd_orbits, "top_simplices": sd.complex.count(nu), "group_order": order}),
    );

    let sd_perms = sd_action.element_perms(&cn.elements);
    let witness = fixed_point_violation(&sd.complex, &sd_perms, nu);
    let wj = witness.map(|(g, f)| {
        json!({"element": cn.tower.system.format_word(&cn.elements.word(g)), "simplex": sd.complex.simplices(nu)[f]})
    });
    report.push_witness("fixed_points", witness.is_none(), json!(null), wj);
    Ok(report)
}

/// First `(element, top simplex)` where some vertex `u` of `C` has `w·u ∈ C` but `w·u ≠ u`.
pub fn fixed_point_violation(sd: &SimplicialComplex, perms: &[Vec<u32>], top: usize) -> Option<(usize, usize)> {
    for (f, simplex) in sd.simplices(top).iter().enumerate() {
        for (g, p) in perms.iter().enumerate() {
            for &u in simplex {
                let img = p[u as usize];
                if img != u && simplex.binary_search(&img).is_ok() {
                    return Some((g, f));
                }
            }
        }
    }
    None
}

/// Verifies `lk(C) ≅ C^{n-p-1}` through the explicit map
/// `d W_{n-p-2} ↦ c d s_{n-p} ⋯ s_n W_{n-1}` for a lift `c` of `C`.
pub fn check_link_iso(
    spec: &FamilySpec,
    cn: &CosetComplex,
    p: usize,
    cap: usize,
    all: bool,
) -> Result<Report, ComplexError> {
    let n = cn.n();
    let mut report = Report::new("check links", json!({"family": spec.name(), "n": n, "p": p, "all": all}));
    if p >= n {
        report.skip(format!("link_p{p}"), "link of a top simplex is empty");
        return Ok(report);
    }
    let small_n = n - p - 1;
    let small = build_cn(spec, small_n as i64, cap)?;
    let e = cn.suffix_element(n - p);
    let reps: Vec<(Simplex, usize)> = if all {
        let mut v: Vec<(Simplex, usize)> = cn.first_lifts(p).into_iter().collect();
        v.sort();
        v
    } else {
        let mut base = cn.lift(0, p);
        base.sort_unstable();
        vec![(base, 0)]
    };

    // every element of the small group, imported by generator names
    let imported: Vec<usize> = (0..small.elements.len())
        .map(|d| cn.elements.element_of(&cn.tower.import_word(&small.tower, &small.elements.word(d))))
        .collect();

    let mut failure = None;
    let mut cross_ok = true;
    for (simplex, c) in &reps {
        let link = cn.complex.link(simplex)?;
        let mut phi: HashMap<u32, u32> = HashMap::new();
        let mut well_defined = true;
        for (d, &dbig) in imported.iter().enumerate() {
            let v = small.proj[d];
            let img = cn.proj[cn.elements.multiply(cn.elements.multiply(*c, dbig), e)];
            if *phi.entry(v).or_insert(img) != img {
                well_defined = false;
            }
        }
        let images: BTreeSet<u32> = phi.values().copied().collect();
        let injective = images.len() == phi.len();
        let onto_vertices = images.iter().copied().collect::<Vec<_>>() == link.vertices();
        let simplicial = small.complex.all_simplices().all(|s| {
            let mut img: Vec<u32> = s.iter().map(|v| phi[v]).collect();
            img.sort_unstable();
            link.contains(&img)
        });
        let counts = small.complex.f_vector() == link.f_vector();
        if !(well_defined && injective && onto_vertices && simplicial && counts) && failure.is_none() {
            failure = Some(json!({
                "simplex": simplex,
                "lift": cn.tower.system.format_word(&cn.elements.word(*c)),
                "well_defined": well_defined,
                "injective": injective,
                "onto_vertices": onto_vertices,
                "simplicial": simplicial,
                "counts": counts,
            }));
        }
        if iso_check(&link, &small.complex, DEFAULT_ISO_BUDGET)?.is_none() {
            cross_ok = false;
        }
    }
    report.push_witness(
        format!("link_p{p}"),
        failure.is_none(),
        json!({"simplices_checked": reps.len(), "link_f_vector": small.complex.f_vector()}),
        failure,
    );
    report.push(format!("link_p{p}_iso_search"), cross_ok, json!(null));
    Ok(report)
}

/// Runs [`check_link_iso`] for every `p < n`.
pub fn check_links(spec: &FamilySpec, n: i64, cap: usize, all: bool) -> Result<Report, ComplexError> {
    let cn = build_cn(spec, n, cap)?;
    let mut report = Report::new("check links", json!({"family": spec.name(), "n": n, "all": all}));
    if n == 0 {
        report.skip("links", "no p < n");
    }
    for p in 0..cn.n() {
        report.extend("", check_link_iso(spec, &cn, p, cap, all)?);
    }
    Ok(report)
}

/// For every face `F` of `Δ`, the setwise stabilizer in `W_n` is the
/// parabolic subgroup on `{s : F ⊆ Δ_s}` and fixes `F` pointwise.
pub fn check_stabilizers(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check stabilizers", json!({"family": spec.name(), "n": n}));
    let cn = build_cn(spec, n, cap)?;
    let sd = barycentric_subdivision(&cn.complex);
    let ch = base_chamber(&cn, &sd);
    let nu = cn.n();
    let perms = cn.element_perms();
    // image of each a_i under each element, as an index into `a` (or None)
    let moved: Vec<Vec<Option<usize>>> = perms
        .iter()
        .map(|p| {
            ch.a_simplices
                .iter()
                .map(|s| {
                    let img = GroupAction::apply(p, s);
                    ch.a_simplices.iter().position(|t| *t == img)
                })
                .collect()
        })
        .collect();
    let mut witness = None;
    let mut pointwise = true;
    let mut faces = 0;
    for mask in 1u32..(1 << (nu + 1)) {
        faces += 1;
        let face: Vec<usize> = (0..=nu).filter(|&i| mask >> i & 1 == 1).collect();
        let t = ch.face_type(&face);
        for g in 0..cn.elements.len() {
            let images: BTreeSet<usize> = face.iter().filter_map(|&i| moved[g][i]).collect();
            let setwise = images.len() == face.len() && face.iter().all(|i| images.contains(i));
            let in_parabolic = cn.elements.support_mask(g) & !t == 0;
            if setwise != in_parabolic && witness.is_none() {
                witness = Some(json!({
                    "face": face,
                    "element": cn.tower.system.format_word(&cn.elements.word(g)),
                    "setwise": setwise,
                }));
            }
            if setwise && face.iter().any(|&i| moved[g][i] != Some(i)) {
                pointwise = false;
            }
        }
    }
    report.push_witness("setwise_is_parabolic", witness.is_none(), json!({"faces": faces}), witness);
    report.push("setwise_is_pointwise", pointwise, json!(null));

    // {a_i} is stabilized by the subgroup on S_n ∖ S_{=i}
    let all_mask = (1u64 << cn.tower.rank()) - 1;
    let vertex_ok = (0..=nu).all(|i| {
        let s_eq: u64 = if i == 0 {
            ch.s_eq0.iter().fold(0, |m, &s| m | 1 << s)
        } else {
            1 << cn.tower.s(i)
        };
        ch.face_type(&[i]) == all_mask & !s_eq
    });
    report.push("vertex_stabilizers", vertex_ok, json!(null));

    // S_{=0} as the generators of S_0 not commuting with s_1
    if nu >= 1 {
        let s1 = cn.tower.s(1);
        let noncommuting: Vec<usize> = cn
            .tower
            .gens_at(0)
            .into_iter()
            .filter(|&s| cn.tower.system.m(s, s1) != Some(2))
            .collect();
        report.push("s_eq0_noncommuting", noncommuting == ch.s_eq0, json!({"s_eq0": ch.s_eq0.len()}));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{builtin_family, Builtin};

    fn spec(b: Builtin) -> FamilySpec {
        builtin_family(b).unwrap()
    }

    #[test]
    fn transitivity_passes() {
        for (b, n) in [(Builtin::A, 0), (Builtin::A, 2), (Builtin::B, 1), (Builtin::B, 2), (Builtin::D, 1)] {
            let r = check_transitivity(&spec(b), n, 100_000).unwrap();
            assert!(r.passed(), "{b} {n}\n{}", r.to_text());
        }
        let r = check_transitivity(&spec(Builtin::A), 2, 1000).unwrap();
        assert_eq!(r.get("orbit_stabilizer").unwrap().detail["stabilizer_sizes"], json!([2, 2, 6]));
        let r = check_transitivity(&spec(Builtin::B), 1, 1000).unwrap();
        assert_eq!(r.get("orbit_stabilizer").unwrap().detail["orbit_sizes"], json!([4, 4]));
    }

    #[test]
    fn links_pass() {
        let r = check_links(&spec(Builtin::A), 3, 100_000, true).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = check_links(&spec(Builtin::B), 2, 100_000, true).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let cn = build_cn(&spec(Builtin::B), 2, 1000).unwrap();
        let top = check_link_iso(&spec(Builtin::B), &cn, 2, 1000, false).unwrap();
        assert_eq!(top.checks[0].verdict, crate::report::Verdict::Skipped);
    }

    #[test]
    fn stabilizers_pass() {
        for (b, n) in [(Builtin::A, 1), (Builtin::A, 2), (Builtin::B, 2), (Builtin::D, 1), (Builtin::I(5), 1)] {
            let r = check_stabilizers(&spec(b), n, 100_000).unwrap();
            assert!(r.passed(), "{b} {n}\n{}", r.to_text());
        }
    }

    #[test]
    fn top_face_has_trivial_stabilizer() {
        let cn = build_cn(&spec(Builtin::A), 2, 1000).unwrap();
        let sd = barycentric_subdivision(&cn.complex);
        let ch = base_chamber(&cn, &sd);
        assert_eq!(ch.face_type(&[0, 1, 2]), 0);
    }
}
