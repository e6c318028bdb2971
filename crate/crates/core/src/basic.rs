//! Mirrored simplicial complexes, the basic construction `U(W, X)` and its
//! chamber filtration, compared with `sd C^n` for the chamber `Δ`.

use std::collections::HashMap;

use serde_json::json;

use crate::complexes::{
    barycentric_subdivision, base_chamber, build_cn, BaseChamber, ComplexError, CosetComplex, GroupAction, Simplex,
    SimplicialComplex, Subdivision,
};
use crate::diagrams::FamilySpec;
use crate::engine::{enumerate_group, CoxeterSystem, ElementTable};
use crate::homology::{chain_complex_of, homology, mayer_vietoris_check, Coefficients, HomologyTable};
use crate::report::Report;

/// A complex with one mirror subcomplex per generator.
#[derive(Debug, Clone)]
pub struct MirroredSpace {
    pub complex: SimplicialComplex,
    pub mirrors: Vec<SimplicialComplex>,
}

impl MirroredSpace {
    /// Bitmask of `{s : x ∈ X_s}` for a vertex `x`.
    pub fn vertex_type(&self, x: u32) -> u64 {
        self.mirrors.iter().enumerate().filter(|(_, m)| m.contains(&[x])).fold(0, |acc, (s, _)| acc | 1 << s)
    }
}

/// `X^T = ⋃_{s∈T} X_s`.
pub fn mirror_union(x: &MirroredSpace, t_mask: u64) -> SimplicialComplex {
    x.mirrors
        .iter()
        .enumerate()
        .filter(|(s, _)| t_mask >> s & 1 == 1)
        .fold(SimplicialComplex::empty(x.complex.labels().to_vec()), |acc, (_, m)| acc.union(m))
}

/// `U(W, X)` with the left-translation action.
#[derive(Debug, Clone)]
pub struct ChamberComplex {
    pub complex: SimplicialComplex,
    pub action: GroupAction,
    /// `chamber[w][x]`: the vertex `[w, x]`, for `x` in the universe of `X`.
    pub chamber: Vec<Vec<u32>>,
    pub space: MirroredSpace,
}

impl ChamberComplex {
    /// Image of a simplex of `X` in the chamber `wX`.
    pub fn image(&self, w: usize, s: &[u32]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&x| self.chamber[w][x as usize]).collect();
        out.sort_unstable();
        out
    }

    pub fn chamber_complex(&self, w: usize) -> SimplicialComplex {
        self.complex.subcomplex(self.space.complex.facets().iter().map(|f| self.image(w, f)))
    }

    /// `w X^T` inside `U`.
    pub fn translate(&self, w: usize, sub: &SimplicialComplex) -> SimplicialComplex {
        self.complex.subcomplex(sub.facets().iter().map(|f| self.image(w, f)))
    }
}

/// Quotient of `W × X` by `(v, x) ~ (w, x)` whenever `v^{-1} w` lies in the
/// subgroup generated by `{s : x ∈ X_s}`; the class of `(w, x)` is named by
/// the minimal representative of `w W_{T(x)}`.
pub fn basic_construction(system: &CoxeterSystem, elements: &ElementTable, x: &MirroredSpace) -> ChamberComplex {
    let universe = x.complex.universe_size();
    let verts = x.complex.vertices();
    let types: Vec<u64> = (0..universe as u32).map(|v| x.vertex_type(v)).collect();
    let mut id: HashMap<(usize, u32), u32> = HashMap::new();
    let mut labels = Vec::new();
    let mut chamber = vec![vec![u32::MAX; universe]; elements.len()];
    for (w, row) in chamber.iter_mut().enumerate() {
        for &v in &verts {
            let rep = elements.min_coset_rep(w, types[v as usize]);
            let next = id.len() as u32;
            let k = *id.entry((rep, v)).or_insert_with(|| {
                labels.push(format!("{}.{}", system.format_word(&elements.word(rep)), x.complex.label(v)));
                next
            });
            row[v as usize] = k;
        }
    }
    let mut simplices = Vec::new();
    for row in &chamber {
        for s in x.complex.all_simplices() {
            simplices.push(s.iter().map(|&v| row[v as usize]).collect());
        }
    }
    let points = labels.len();
    let complex = SimplicialComplex::from_simplices(labels, simplices).expect("images of faces are faces");
    let mut perms = vec![vec![0u32; points]; elements.rank()];
    for (s, perm) in perms.iter_mut().enumerate() {
        for w in 0..elements.len() {
            let sw = elements.left_mul(s, w);
            for &v in &verts {
                perm[chamber[w][v as usize] as usize] = chamber[sw][v as usize];
            }
        }
    }
    ChamberComplex { complex, action: GroupAction { points, perms }, chamber, space: x.clone() }
}

pub fn basic_construction_for(
    system: &CoxeterSystem,
    x: &MirroredSpace,
    cap: usize,
) -> Result<(ElementTable, ChamberComplex), ComplexError> {
    let elements = enumerate_group(system, cap)?;
    let u = basic_construction(system, &elements, x);
    Ok((elements, u))
}

/// Everything needed to compare `U(W_n, Δ)` with `sd C^n`.
pub struct ChamberSetting {
    pub cn: CosetComplex,
    pub sd: Subdivision,
    pub base: BaseChamber,
    pub space: MirroredSpace,
    pub u: ChamberComplex,
}

/// `Δ` as the simplex on `a_0, …, a_n` with mirrors `Δ_s`.
pub fn chamber_space(base: &BaseChamber) -> MirroredSpace {
    let labels: Vec<String> = (0..=base.n).map(|i| format!("a{i}")).collect();
    let complex = SimplicialComplex::from_facets(labels.clone(), vec![(0..=base.n as u32).collect()]);
    let mirrors = base
        .mirror
        .iter()
        .map(|face| SimplicialComplex::from_facets(labels.clone(), vec![face.iter().map(|&i| i as u32).collect()]))
        .collect();
    MirroredSpace { complex, mirrors }
}

pub fn chamber_setting(spec: &FamilySpec, n: i64, cap: usize) -> Result<ChamberSetting, ComplexError> {
    let cn = build_cn(spec, n, cap)?;
    let sd = barycentric_subdivision(&cn.complex);
    let base = base_chamber(&cn, &sd);
    let space = chamber_space(&base);
    let u = basic_construction(&cn.tower.system, &cn.elements, &space);
    Ok(ChamberSetting { cn, sd, base, space, u })
}

/// Shape of `Δ^T` for `T ≠ ∅`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachmentType {
    /// Some `Δ_s` is all of `Δ`.
    Full,
    /// A proper nonempty union of facets, a cone on any omitted vertex.
    Cone,
    /// All facets: `∂Δ`.
    Boundary,
    Empty,
}

impl AttachmentType {
    pub fn as_str(self) -> &'static str {
        match self {
            AttachmentType::Full => "full",
            AttachmentType::Cone => "cone",
            AttachmentType::Boundary => "boundary",
            AttachmentType::Empty => "empty",
        }
    }
}

pub fn classify_attachment(base: &BaseChamber, t_mask: u64) -> AttachmentType {
    let faces: Vec<&Vec<usize>> = base.mirror.iter().enumerate().filter(|(s, _)| t_mask >> s & 1 == 1).map(|(_, f)| f).collect();
    if faces.is_empty() {
        return AttachmentType::Empty;
    }
    if faces.iter().any(|f| f.len() == base.n + 1) {
        return AttachmentType::Full;
    }
    let omitted: std::collections::BTreeSet<usize> =
        faces.iter().flat_map(|f| (0..=base.n).filter(move |i| !f.contains(i))).collect();
    if omitted.len() == base.n + 1 {
        AttachmentType::Boundary
    } else {
        AttachmentType::Cone
    }
}

#[derive(Debug, Clone)]
pub struct TraceRow {
    pub m: usize,
    pub word: String,
    pub in_size: usize,
    pub kind: AttachmentType,
    /// Reduced integral Betti numbers of the attachment.
    pub betti: Vec<usize>,
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("m,element,in_size,attachment,betti\n");
    for r in rows {
        let betti: Vec<String> = r.betti.iter().map(|b| b.to_string()).collect();
        out.push_str(&format!("{},{},{},{},{}\n", r.m, r.word, r.in_size, r.kind.as_str(), betti.join(" ")));
    }
    out
}

fn reduced_z(k: &SimplicialComplex) -> HomologyTable {
    homology(&chain_complex_of(k, true), Coefficients::Integers)
}

/// Builds `P_m = P_{m-1} ∪ w_m Δ` in ShortLex order and verifies the
/// attachment identity `P_{m-1} ∩ w_m Δ = w_m Δ^{In(w_m)}`, the shape of each
/// attachment, and the Mayer–Vietoris sequence of each step.
pub fn check_chamber_filtration(spec: &FamilySpec, n: i64, cap: usize) -> Result<(Report, Vec<TraceRow>), ComplexError> {
    let mut report = Report::new("check basic", json!({"family": spec.name(), "n": n}));
    let st = chamber_setting(spec, n, cap)?;
    let (el, u, base) = (&st.cn.elements, &st.u, &st.base);
    let nu = base.n as i64;
    let order_ok = el.length(0) == 0 && (1..el.len()).all(|m| el.length(m - 1) <= el.length(m));
    report.push("order", order_ok, json!({"chambers": el.len()}));

    let mut p = u.chamber_complex(0);
    let mut identity_fail = None;
    let mut shape_fail = None;
    let mut mv_fail = None;
    let mut connectivity_fail = None;
    let mut trace = Vec::new();
    for m in 1..el.len() {
        let chamber = u.chamber_complex(m);
        let attach = p.intersection(&chamber);
        let t = el.in_mask(m);
        let expected = u.translate(m, &mirror_union(&st.space, t));
        let word = st.cn.tower.system.format_word(&el.word(m));
        if !attach.same_simplices(&expected) && identity_fail.is_none() {
            identity_fail = Some(json!({"m": m, "element": word}));
        }
        let kind = classify_attachment(base, t);
        let h = reduced_z(&attach);
        let shape_ok = match kind {
            AttachmentType::Full | AttachmentType::Cone => h.first_nonvanishing().is_none(),
            AttachmentType::Boundary if nu == 0 => attach.is_empty(),
            AttachmentType::Boundary => {
                h.first_nonvanishing() == Some((nu - 1).max(0) as usize)
                    && h.rank((nu - 1).max(0) as usize) == 1
                    && h.degrees.iter().all(|d| d.torsion.is_empty())
                    && h.ranks().iter().sum::<usize>() == 1
            }
            AttachmentType::Empty => false,
        };
        if !shape_ok && shape_fail.is_none() {
            shape_fail = Some(json!({"m": m, "element": word, "kind": kind.as_str(), "betti": h.ranks()}));
        }
        let next = p.union(&chamber);
        match mayer_vietoris_check(&next, &p, &chamber, 2) {
            Ok(r) if r.passed() => {}
            _ => {
                if mv_fail.is_none() {
                    mv_fail = Some(json!({"m": m, "element": word}));
                }
            }
        }
        if h.vanishes_through(nu - 2) && !reduced_z(&next).vanishes_through(nu - 1) && connectivity_fail.is_none() {
            connectivity_fail = Some(json!({"m": m, "element": word}));
        }
        trace.push(TraceRow { m, word, in_size: t.count_ones() as usize, kind, betti: h.ranks() });
        p = next;
    }
    let counts = |k: AttachmentType| trace.iter().filter(|r| r.kind == k).count();
    report.push_witness("attachment_identity", identity_fail.is_none(), json!({"steps": trace.len()}), identity_fail);
    report.push_witness(
        "attachment_shape",
        shape_fail.is_none(),
        json!({
            "full": counts(AttachmentType::Full),
            "cone": counts(AttachmentType::Cone),
            "boundary": counts(AttachmentType::Boundary),
        }),
        shape_fail,
    );
    report.push_witness("mayer_vietoris", mv_fail.is_none(), json!(null), mv_fail);
    report.push_witness("step_connectivity", connectivity_fail.is_none(), json!(null), connectivity_fail);
    report.push("covers", p.same_simplices(&u.complex), json!(null));
    report.push(
        "union_connectivity",
        reduced_z(&p).vanishes_through(nu - 1),
        json!({"reduced_betti": reduced_z(&p).ranks()}),
    );
    Ok((report, trace))
}

/// Compares `U(W_n, Δ)` with `sd C^n` through `[w, a_i] ↦ w·a_i`, and checks
/// the mirror relation, stabilizers and equivariance of the construction.
pub fn check_sd_iso(spec: &FamilySpec, n: i64, cap: usize) -> Result<Report, ComplexError> {
    let mut report = Report::new("check sd-iso", json!({"family": spec.name(), "n": n}));
    let st = chamber_setting(spec, n, cap)?;
    let (el, u) = (&st.cn.elements, &st.u);
    let order = el.len();
    let sd_perms = st.sd.induced_action(&st.cn.action).element_perms(el);
    let xs = st.space.complex.vertices();

    let mut f = vec![u32::MAX; u.complex.universe_size()];
    let mut well_defined = true;
    for w in 0..order {
        for &x in &xs {
            let img = sd_perms[w][st.base.a[x as usize] as usize];
            let v = u.chamber[w][x as usize] as usize;
            if f[v] != u32::MAX && f[v] != img {
                well_defined = false;
            }
            f[v] = img;
        }
    }
    report.push("map_well_defined", well_defined, json!(null));
    let mut images: Vec<u32> = f.clone();
    images.sort_unstable();
    images.dedup();
    let bijective = images.len() == f.len() && f.len() == st.sd.complex.count(0);
    report.push("bijective_on_vertices", bijective, json!({"vertices": f.len(), "sd_vertices": st.sd.complex.count(0)}));
    let simplicial = u.complex.all_simplices().all(|s| {
        let mut img: Simplex = s.iter().map(|&v| f[v as usize]).collect();
        img.sort_unstable();
        st.sd.complex.contains(&img)
    });
    let counts = u.complex.f_vector() == st.sd.complex.f_vector();
    report.push(
        "simplicial_isomorphism",
        simplicial && counts,
        json!({"f_vector": u.complex.f_vector(), "sd_f_vector": st.sd.complex.f_vector()}),
    );
    let top = st.base.n;
    report.push(
        "chambers",
        u.complex.count(top) == order,
        json!({"chambers": order, "top_simplices": u.complex.count(top)}),
    );

    // (v, x) ~ (w, y) iff x = y and v^{-1} w ∈ W_{T(x)}
    let mut relation_fail = None;
    for v in 0..order {
        let vinv = el.inverse(v);
        for w in 0..order {
            let support = el.support_mask(el.multiply(vinv, w));
            for &x in &xs {
                let same = u.chamber[v][x as usize] == u.chamber[w][x as usize];
                let expected = support & !st.space.vertex_type(x) == 0;
                if same != expected && relation_fail.is_none() {
                    relation_fail = Some(json!({"v": v, "w": w, "x": x}));
                }
                for &y in &xs {
                    if y != x && u.chamber[v][x as usize] == u.chamber[w][y as usize] && relation_fail.is_none() {
                        relation_fail = Some(json!({"v": v, "w": w, "x": x, "y": y}));
                    }
                }
            }
        }
    }
    report.push_witness("mirror_relation", relation_fail.is_none(), json!(null), relation_fail);

    // stabilizer of [e, x] is W_{T(x)}
    let u_perms = u.action.element_perms(el);
    let stab_ok = xs.iter().all(|&x| {
        let t = st.space.vertex_type(x);
        let v = u.chamber[0][x as usize] as usize;
        (0..order).all(|g| (u_perms[g][v] as usize == v) == (el.support_mask(g) & !t == 0))
    });
    report.push("vertex_stabilizers", stab_ok, json!(null));

    let equivariant = (0..el.rank()).all(|s| {
        (0..order).all(|w| {
            let sw = el.left_mul(s, w);
            xs.iter().all(|&x| u.action.perms[s][u.chamber[w][x as usize] as usize] == u.chamber[sw][x as usize])
        })
    });
    report.push("equivariance", equivariant, json!(null));
    Ok(report)
}
