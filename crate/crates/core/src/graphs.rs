//! The degree-ℓ isogeny graph on level structures and the base
//! supersingular ℓ-isogeny graph, with connectedness, base projection, and
//! deterministic DOT/CSV export.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isogeny::{dual_kernel_xs, velu_quotient, IsogenyStep};
use crate::session::Session;

/// A directed edge: a degree-ℓ isogeny from `from` to `to`, identified by
/// the canonical generator x of its kernel.  `dual_key` identifies the
/// kernel of the dual isogeny (an edge `to -> from`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kernel_key: String,
    pub dual_key: String,
}

/// An ℓ-isogeny graph; directed storage, with an undirected view available
/// when p = 1 mod 12 (isogenies identified with their duals).
#[derive(Clone, Debug)]
pub struct LevelGraph {
    pub p: u64,
    pub ell: u64,
    /// True when vertices carry level structure, false for the base graph.
    pub leveled: bool,
    pub labels: Vec<String>,
    /// Curve index of each vertex (projection to the base graph).
    pub curve_of: Vec<usize>,
    pub edges: Vec<Edge>,
}

/// The Vélu steps out of a curve, one per order-ℓ subgroup, with the
/// canonical keys of the kernel and of the dual kernel.
fn ell_steps(session: &Session, ci: usize) -> Result<Vec<(IsogenyStep, String, String)>> {
    let rec = &session.curves[ci];
    let subs = rec
        .ell_subgroups
        .as_ref()
        .ok_or_else(|| Error::Params("session has no ell".into()))?;
    let mut out = Vec::with_capacity(subs.len());
    for sub in subs {
        let step = velu_quotient(session, ci, &sub.xs)?;
        let dual = dual_kernel_xs(session, &step)?;
        let cod_subs = session.curves[step.codomain]
            .ell_subgroups
            .as_ref()
            .expect("ell subgroups cached");
        let dual_sub = cod_subs
            .iter()
            .find(|s| s.xs == dual)
            .ok_or_else(|| Error::Invariant("dual kernel is not an ell-subgroup".into()))?;
        let kkey = sub.gen_x.to_string();
        let dkey = dual_sub.gen_x.to_string();
        out.push((step, kkey, dkey));
    }
    Ok(out)
}

/// The graph on classes [E, G] at level N, one edge per order-ℓ subgroup of
/// the representative curve (out-degree ℓ+1 everywhere).
pub fn build_level_graph(session: &Session) -> Result<LevelGraph> {
    let ell = session
        .ell
        .ok_or_else(|| Error::Params("graph construction requires ell".into()))?;
    let set = session.level_set();
    let steps: Vec<Vec<(IsogenyStep, String, String)>> = (0..session.curve_count())
        .map(|ci| ell_steps(session, ci))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (vi, class) in set.classes.iter().enumerate() {
        for (step, kkey, dkey) in &steps[class.curve_idx] {
            let pushed = step.push_xs(&class.rep.xs)?;
            let cod = &session.curves[step.codomain];
            let to = set
                .class_of_xs(step.codomain, &cod.aut_x, &pushed)
                .ok_or_else(|| Error::Invariant("pushed level structure unrecognized".into()))?;
            edges.push(Edge {
                from: vi,
                to,
                kernel_key: kkey.clone(),
                dual_key: dkey.clone(),
            });
        }
        debug_assert_eq!(
            edges.len() % (ell as usize + 1),
            0,
            "out-degree must be ell+1"
        );
    }
    edges.sort_by(|a, b| (a.from, &a.kernel_key).cmp(&(b.from, &b.kernel_key)));
    let labels = (0..set.len())
        .map(|i| session.class_label(&set, i))
        .collect();
    let curve_of = set.classes.iter().map(|c| c.curve_idx).collect();
    Ok(LevelGraph {
        p: session.p,
        ell,
        leveled: true,
        labels,
        curve_of,
        edges,
    })
}

/// The base graph: vertices are the supersingular j-invariants, one edge
/// per order-ℓ subgroup of each representative curve.
pub fn build_base_graph(session: &Session) -> Result<LevelGraph> {
    let ell = session
        .ell
        .ok_or_else(|| Error::Params("graph construction requires ell".into()))?;
    let mut edges = Vec::new();
    for ci in 0..session.curve_count() {
        for (step, kkey, dkey) in ell_steps(session, ci)? {
            edges.push(Edge {
                from: ci,
                to: step.codomain,
                kernel_key: kkey,
                dual_key: dkey,
            });
        }
    }
    edges.sort_by(|a, b| (a.from, &a.kernel_key).cmp(&(b.from, &b.kernel_key)));
    let labels = (0..session.curve_count())
        .map(|ci| session.curve_label(ci))
        .collect();
    Ok(LevelGraph {
        p: session.p,
        ell,
        leveled: false,
        labels,
        curve_of: (0..session.curve_count()).collect(),
        edges,
    })
}

/// Number of connected components, ignoring edge direction.
pub fn connected_components(g: &LevelGraph) -> usize {
    let n = g.labels.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a] = b;
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Project a leveled graph to the base graph; returns the base graph and
/// the projection fiber size over each j-invariant (label, size).  Fiber
/// size is N+1 exactly when j is away from 0 and 1728.
pub fn project_to_base(session: &Session, g: &LevelGraph) -> Result<(LevelGraph, Vec<(String, usize)>)> {
    if !g.leveled {
        return Err(Error::Params("projection requires a leveled graph".into()));
    }
    let base = build_base_graph(session)?;
    let mut sizes = vec![0usize; session.curve_count()];
    for &ci in &g.curve_of {
        sizes[ci] += 1;
    }
    let fibers = sizes
        .into_iter()
        .enumerate()
        .map(|(ci, s)| (session.curve_label(ci), s))
        .collect();
    Ok((base, fibers))
}

/// The undirected presentation: edges paired with their duals, one
/// representative per pair.  Valid only for p = 1 mod 12, where
/// Aut(E) = {±1} everywhere and the dual pairing is canonical.
pub fn undirected_edges(g: &LevelGraph) -> Result<Vec<Edge>> {
    if g.p % 12 != 1 {
        return Err(Error::Params(format!(
            "undirected view requires p = 1 mod 12 (got p = {}): curves with \
             extra automorphisms obstruct the canonical dual pairing",
            g.p
        )));
    }
    let mut used = vec![false; g.edges.len()];
    let mut out = Vec::with_capacity(g.edges.len() / 2 + 1);
    for i in 0..g.edges.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let e = &g.edges[i];
        // Self-paired loop: its dual is itself.
        if !(e.from == e.to && e.dual_key == e.kernel_key) {
            let j = g
                .edges
                .iter()
                .enumerate()
                .position(|(j, f)| {
                    !used[j]
                        && f.from == e.to
                        && f.to == e.from
                        && f.kernel_key == e.dual_key
                        && f.dual_key == e.kernel_key
                })
                .ok_or_else(|| {
                    Error::Invariant(format!(
                        "no dual edge for {} -> {} (kernel {})",
                        e.from, e.to, e.kernel_key
                    ))
                })?;
            used[j] = true;
        }
        out.push(e.clone());
    }
    Ok(out)
}

/// DOT export; byte-stable for fixed inputs.  Undirected output pairs each
/// edge with its dual and requires p = 1 mod 12.
pub fn export_dot(g: &LevelGraph, undirected: bool) -> Result<String> {
    let mut s = String::new();
    let (kw, arrow) = if undirected {
        ("graph", "--")
    } else {
        ("digraph", "->")
    };
    writeln!(s, "{kw} isogeny_graph {{").unwrap();
    for (i, label) in g.labels.iter().enumerate() {
        writeln!(s, "  n{i} [label=\"{label}\"];").unwrap();
    }
    let edges;
    let edge_list: &[Edge] = if undirected {
        edges = undirected_edges(g)?;
        &edges
    } else {
        &g.edges
    };
    for e in edge_list {
        writeln!(
            s,
            "  n{} {arrow} n{} [label=\"{}\"];",
            e.from, e.to, e.kernel_key
        )
        .unwrap();
    }
    writeln!(s, "}}").unwrap();
    Ok(s)
}

/// CSV export with columns from,to,kernel_key (fields quoted; labels may
/// contain commas); byte-stable for fixed inputs.
pub fn export_csv(g: &LevelGraph, undirected: bool) -> Result<String> {
    let mut s = String::from("from,to,kernel_key\n");
    let edges;
    let edge_list: &[Edge] = if undirected {
        edges = undirected_edges(g)?;
        &edges
    } else {
        &g.edges
    };
    for e in edge_list {
        writeln!(
            s,
            "\"{}\",\"{}\",\"{}\"",
            g.labels[e.from], g.labels[e.to], e.kernel_key
        )
        .unwrap();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::SessionConfig;

    fn p37_session() -> Session {
        let cfg = SessionConfig {
            p: 37,
            n: 3,
            ell: Some(2),
            fp2_modulus: Some("s^2+33*s+2".into()),
            tower_modulus: Some("a^4+6*a^2+24*a+2".into()),
            overrides: Some(
                "j = 8; a = 25; b = 4\n\
                 j = 10s+20; a = 2s+23; b = 16s+5\n\
                 j = 27s+23; a = 35s+31; b = 21s+32\n"
                    .into(),
            ),
        };
        Session::new(&cfg).unwrap()
    }

    fn p61_session(n: u64, ell: u64) -> Session {
        let cfg = SessionConfig {
            p: 61,
            n,
            ell: Some(ell),
            fp2_modulus: Some("s^2+60*s+2".into()),
            overrides: Some(
                "j = 9; a = 53; b = 18\n\
                 j = 41; a = 6; b = 34\n\
                 j = 50; a = 14; b = 36\n\
                 j = 20s+32; a = 30s+47; b = 48s+49\n\
                 j = 41s+52; a = 31s+16; b = 13s+36\n"
                    .into(),
            ),
            ..Default::default()
        };
        Session::new(&cfg).unwrap()
    }

    /// a^3-coefficient of the class generator (the labeling convention of
    /// the p=37 reference figure).
    fn a3(s: &Session, set: &crate::level::LevelSet, v: usize) -> (String, u64) {
        let c = &set.classes[v];
        (
            s.curve_label(c.curve_idx),
            c.rep.gen_x.coords().get(3).copied().unwrap_or(0),
        )
    }

    #[test]
    fn p37_level_graph_matches_reference_figure() {
        let s = p37_session();
        let g = build_level_graph(&s).unwrap();
        assert_eq!(g.labels.len(), 12);
        // Out-degree ell+1 = 3 at every vertex.
        let mut outdeg = vec![0usize; 12];
        for e in &g.edges {
            outdeg[e.from] += 1;
        }
        assert!(outdeg.iter().all(|&d| d == 3));
        assert_eq!(connected_components(&g), 1);

        // Undirected adjacency by (curve, a^3 coefficient of generator).
        let set = s.level_set();
        let und = undirected_edges(&g).unwrap();
        // 36 directed edges: two self-paired loops plus 17 dual pairs.
        assert_eq!(und.len(), 19);
        let mut adj: Vec<((String, u64), (String, u64))> = und
            .iter()
            .map(|e| {
                let (u, v) = (a3(&s, &set, e.from), a3(&s, &set, e.to));
                if u <= v {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect();
        adj.sort();
        let e8 = "E_8".to_string();
        let al = "E_10s+20".to_string();
        let cj = "E_27s+23".to_string();
        let mut want: Vec<((String, u64), (String, u64))> = vec![
            ((e8.clone(), 17), (e8.clone(), 17)),
            ((e8.clone(), 17), (al.clone(), 4)),
            ((cj.clone(), 21), (e8.clone(), 17)),
            ((e8.clone(), 20), (e8.clone(), 20)),
            ((e8.clone(), 20), (al.clone(), 16)),
            ((cj.clone(), 33), (e8.clone(), 20)),
            ((e8.clone(), 35), (al.clone(), 23)),
            ((e8.clone(), 35), (e8.clone(), 2)),
            ((cj.clone(), 6), (e8.clone(), 35)),
            ((e8.clone(), 2), (al.clone(), 31)),
            ((cj.clone(), 14), (e8.clone(), 2)),
            ((al.clone(), 4), (cj.clone(), 14)),
            ((al.clone(), 4), (cj.clone(), 33)),
            ((cj.clone(), 21), (al.clone(), 16)),
            ((cj.clone(), 21), (al.clone(), 16)),
            ((al.clone(), 23), (cj.clone(), 6)),
            ((al.clone(), 31), (cj.clone(), 6)),
            ((al.clone(), 31), (cj.clone(), 14)),
            ((cj.clone(), 33), (al.clone(), 23)),
        ];
        // Canonicalize the wanted pairs the same way.
        let mut want: Vec<_> = want
            .drain(..)
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        want.sort();
        assert_eq!(adj, want);
    }

    #[test]
    fn p37_projection_and_base_graph() {
        let s = p37_session();
        let g = build_level_graph(&s).unwrap();
        let (base, fibers) = project_to_base(&s, &g).unwrap();
        assert_eq!(base.labels.len(), 3);
        // Every fiber has size N+1 = 4 (37 = 1 mod 12, no extra
        // automorphisms).
        assert!(fibers.iter().all(|(_, s)| *s == 4));
        // Base graph: loop at E_8, single edges E_8 -- alpha and E_8 --
        // conj, double edge alpha -- conj.
        let und = undirected_edges(&base).unwrap();
        assert_eq!(und.len(), 5);
        let mut pairs: Vec<(usize, usize)> = und
            .iter()
            .map(|e| (e.from.min(e.to), e.from.max(e.to)))
            .collect();
        pairs.sort_unstable();
        // Vertex order: 0 = E_8, 1 = alpha, 2 = conj (list order).
        assert_eq!(pairs, vec![(0, 0), (0, 1), (0, 2), (1, 2), (1, 2)]);
    }

    #[test]
    fn p61_level_graph_regular_and_connected() {
        let s = p61_session(2, 3);
        let g = build_level_graph(&s).unwrap();
        assert_eq!(g.labels.len(), 15);
        let mut outdeg = vec![0usize; 15];
        for e in &g.edges {
            outdeg[e.from] += 1;
        }
        assert!(outdeg.iter().all(|&d| d == 4));
        assert_eq!(connected_components(&g), 1);
        assert_eq!(undirected_edges(&g).unwrap().len(), 30);
    }

    #[test]
    fn p61_base_graphs_match_figures() {
        // ell = 3: two loops at j=9, two loops at j=50, a double edge
        // between the conjugate pair.
        let s = p61_session(2, 3);
        let base = build_base_graph(&s).unwrap();
        let loops_at = |g: &LevelGraph, label: &str| {
            let v = g.labels.iter().position(|l| l == label).unwrap();
            g.edges.iter().filter(|e| e.from == v && e.to == v).count()
        };
        let between = |g: &LevelGraph, l1: &str, l2: &str| {
            let u = g.labels.iter().position(|l| l == l1).unwrap();
            let v = g.labels.iter().position(|l| l == l2).unwrap();
            g.edges.iter().filter(|e| e.from == u && e.to == v).count()
        };
        assert_eq!(loops_at(&base, "E_9"), 2);
        assert_eq!(loops_at(&base, "E_50"), 2);
        assert_eq!(between(&base, "E_20s+32", "E_41s+52"), 2);
        assert_eq!(between(&base, "E_41s+52", "E_20s+32"), 2);

        // ell = 5: triple edge between the conjugate pair, two loops at
        // j=50.
        let s5 = p61_session(2, 5);
        let base5 = build_base_graph(&s5).unwrap();
        assert_eq!(between(&base5, "E_20s+32", "E_41s+52"), 3);
        assert_eq!(between(&base5, "E_41s+52", "E_20s+32"), 3);
        assert_eq!(loops_at(&base5, "E_50"), 2);
        assert_eq!(loops_at(&base5, "E_9"), 0);
        assert_eq!(connected_components(&base5), 1);
    }

    #[test]
    fn p23_projection_collapses_at_j0() {
        let cfg = SessionConfig {
            p: 23,
            n: 3,
            ell: Some(2),
            fp2_modulus: Some("s^2+21*s+5".into()),
            overrides: Some(
                "j = 0; a = 0; b = 1\n\
                 j = 3; a = 6; b = 0\n\
                 j = 19; a = 8; b = 1\n"
                    .into(),
            ),
            ..Default::default()
        };
        let s = Session::new(&cfg).unwrap();
        let g = build_level_graph(&s).unwrap();
        let (_, fibers) = project_to_base(&s, &g).unwrap();
        let size_of = |label: &str| {
            fibers
                .iter()
                .find(|(l, _)| l == label)
                .map(|(_, s)| *s)
                .unwrap()
        };
        // Four order-3 subgroups on E_0 collapse into orbits {1,3}: two
        // classes.  E_3 collapses to 3 (orbits {2,1,1}), E_19 keeps all 4.
        assert_eq!(size_of("E_0"), 2);
        assert!(size_of("E_3") <= 4);
        assert_eq!(size_of("E_19"), 4);
        assert_eq!(fibers.iter().map(|(_, s)| *s).sum::<usize>(), g.labels.len());
        // Undirected view refused at p = 23.
        assert!(undirected_edges(&g).is_err());
        assert_eq!(connected_components(&g), 1);
    }

    #[test]
    fn exports_are_byte_stable() {
        let s = p37_session();
        let g1 = build_level_graph(&s).unwrap();
        let s2 = p37_session();
        let g2 = build_level_graph(&s2).unwrap();
        assert_eq!(export_dot(&g1, false).unwrap(), export_dot(&g2, false).unwrap());
        assert_eq!(export_dot(&g1, true).unwrap(), export_dot(&g2, true).unwrap());
        assert_eq!(export_csv(&g1, false).unwrap(), export_csv(&g2, false).unwrap());
        let dot = export_dot(&g1, false).unwrap();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("\n  n0 [label=").count(), 1);
        let csv = export_csv(&g1, false).unwrap();
        assert_eq!(csv.lines().count(), 1 + 36);
    }
}
