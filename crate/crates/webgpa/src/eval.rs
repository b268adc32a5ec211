//! Evaluation of webs in the graph planar algebra of a building graph.
//!
//! A web with domain sigma and codomain tau acts on pairs of paths (p1 of
//! type sigma, p2 of type tau) with common endpoints, counting the internal
//! labelings of the diagram that are compatible with the pair. Evaluation
//! walks the layers bottom to top, maintaining a sparse map from candidate
//! intermediate paths to accumulated scalars; each generator consumes a
//! segment of the path below and emits its locally compatible
//! continuations. Strands labeled n consume and emit nothing, so caps and
//! cups are bookkeeping only.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::graph::{effective_labels, enumerate_paths, enumerate_paths_to, BuildingGraph, Path};
use crate::relations::RelationInstance;
use crate::web::{Generator, LinComb, Web, WebObject};

/// A matched pair of boundary paths: common start and common end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPair<V> {
    p1: Path<V>,
    p2: Path<V>,
}

impl<V: Clone + Eq> BoundaryPair<V> {
    /// Validates both paths against the graph and checks the endpoints.
    pub fn new<G>(g: &G, p1: Path<V>, p2: Path<V>) -> Result<BoundaryPair<V>>
    where
        G: BuildingGraph<V = V>,
    {
        p1.validate(g)?;
        p2.validate(g)?;
        if p1.start() != p2.start() || p1.end() != p2.end() {
            return Err(Error::invalid("boundary paths must share start and end"));
        }
        Ok(BoundaryPair { p1, p2 })
    }

    /// For paths the caller has already produced by graph enumeration.
    pub fn from_paths_unchecked(p1: Path<V>, p2: Path<V>) -> BoundaryPair<V> {
        debug_assert!(p1.start() == p2.start() && p1.end() == p2.end());
        BoundaryPair { p1, p2 }
    }

    pub fn p1(&self) -> &Path<V> {
        &self.p1
    }

    pub fn p2(&self) -> &Path<V> {
        &self.p2
    }
}

fn check_type<V: Clone + Eq>(n: usize, path: &Path<V>, obj: &WebObject, side: &str) -> Result<()> {
    let want = effective_labels(n, obj.labels())?;
    if path.type_labels() != want {
        return Err(Error::invalid(format!(
            "{side} path has type {:?}, the web needs {:?} (n-strands empty)",
            path.type_labels(),
            want
        )));
    }
    Ok(())
}

/// The 0/1 functional of a single generator on a matched segment pair.
/// Types must match the generator's arities (n-labeled slots are empty);
/// unmatched endpoints give 0, and otherwise the value records whether the
/// configuration closes (a triangle, a 2-cycle, or literal equality).
pub fn eval_generator<G, F>(
    g: &G,
    gen: Generator,
    p_in: &Path<G::V>,
    p_out: &Path<G::V>,
    field: &F,
) -> Result<F::Elem>
where
    G: BuildingGraph,
    F: CoeffField,
{
    let n = g.rank();
    gen.validate(n)?;
    let want_in = effective_labels(n, &gen.inputs(n))?;
    let want_out = effective_labels(n, &gen.outputs(n))?;
    if p_in.type_labels() != want_in || p_out.type_labels() != want_out {
        return Err(Error::invalid(format!(
            "generator {gen} expects types {want_in:?} -> {want_out:?}, got {:?} -> {:?}",
            p_in.type_labels(),
            p_out.type_labels()
        )));
    }
    if p_in.start() != p_out.start() || p_in.end() != p_out.end() {
        return Ok(field.zero());
    }
    let hit = match gen {
        Generator::Id(_) => p_in == p_out,
        Generator::Merge(j, k) => {
            if j + k < n {
                g.edge_label(p_in.start(), p_in.end())? == Some(j + k)
            } else {
                p_in.end() == p_in.start()
            }
        }
        Generator::Split(j, k) => {
            if j + k < n {
                g.edge_label(p_out.start(), p_out.end())? == Some(j + k)
            } else {
                p_out.end() == p_out.start()
            }
        }
        Generator::NCap | Generator::NCup => true,
    };
    Ok(if hit { field.one() } else { field.zero() })
}

/// Continuations of one generator: given the consumed segment (steps only;
/// `x` is the vertex where the segment begins), all output segments. Each
/// continuation carries weight 1.
fn generator_continuations<G: BuildingGraph>(
    g: &G,
    gen: Generator,
    x: &G::V,
    seg: &[(usize, G::V)],
) -> Result<Vec<Vec<(usize, G::V)>>> {
    let n = g.rank();
    Ok(match gen {
        Generator::Id(k) => {
            if k < n {
                vec![seg.to_vec()]
            } else {
                vec![Vec::new()]
            }
        }
        Generator::NCap | Generator::NCup => vec![Vec::new()],
        Generator::Merge(j, k) => {
            let z = &seg[1].1;
            if j + k < n {
                if g.edge_label(x, z)? == Some(j + k) {
                    vec![vec![(j + k, z.clone())]]
                } else {
                    Vec::new()
                }
            } else if z == x {
                vec![Vec::new()]
            } else {
                Vec::new()
            }
        }
        Generator::Split(j, k) => {
            if j + k < n {
                let z = &seg[0].1;
                g.split_targets(x, z, j)?
                    .into_iter()
                    .map(|y| vec![(j, y), (k, z.clone())])
                    .collect()
            } else {
                g.neighbors(x, j)?
                    .into_iter()
                    .map(|y| vec![(j, y), (n - j, x.clone())])
                    .collect()
            }
        }
    })
}

/// All whole-layer continuations of `path`.
fn layer_continuations<G: BuildingGraph>(
    g: &G,
    layer: &[Generator],
    path: &Path<G::V>,
) -> Result<Vec<Path<G::V>>> {
    let mut out = Vec::new();
    // Depth-first over generators, tracking the input cursor and the output
    // steps accumulated so far.
    fn rec<G: BuildingGraph>(
        g: &G,
        layer: &[Generator],
        gi: usize,
        pos: usize,
        path: &Path<G::V>,
        acc: &mut Vec<(usize, G::V)>,
        out: &mut Vec<Path<G::V>>,
    ) -> Result<()> {
        if gi == layer.len() {
            debug_assert_eq!(pos, path.len(), "layer arities tile the path");
            out.push(Path::from_steps(path.start().clone(), acc.clone()));
            return Ok(());
        }
        let n = g.rank();
        let gen = layer[gi];
        let consumed = gen.inputs(n).iter().filter(|&&l| l < n).count();
        let x = path.vertex_at(pos).clone();
        let seg = &path.steps()[pos..pos + consumed];
        for cont in generator_continuations(g, gen, &x, seg)? {
            let before = acc.len();
            acc.extend(cont);
            rec(g, layer, gi + 1, pos + consumed, path, acc, out)?;
            acc.truncate(before);
        }
        Ok(())
    }
    let mut acc = Vec::new();
    rec(g, layer, 0, 0, path, &mut acc, &mut out)?;
    Ok(out)
}

/// Evaluate a web on a boundary pair by layerwise dynamic programming; the
/// result is the number of compatible internal labelings, in the field.
pub fn eval_web<G, F>(g: &G, w: &Web, bp: &BoundaryPair<G::V>, field: &F) -> Result<F::Elem>
where
    G: BuildingGraph,
    F: CoeffField,
{
    let n = g.rank();
    if w.n() != n {
        return Err(Error::invalid(format!("web has n={}, graph has n={n}", w.n())));
    }
    check_type(n, &bp.p1, w.dom(), "domain")?;
    check_type(n, &bp.p2, &w.codomain(), "codomain")?;
    let mut state: HashMap<Path<G::V>, F::Elem> = HashMap::new();
    state.insert(bp.p1.clone(), field.one());
    for layer in w.layers() {
        let mut next: HashMap<Path<G::V>, F::Elem> = HashMap::new();
        for (path, coeff) in &state {
            for cont in layer_continuations(g, layer, path)? {
                let slot = next.entry(cont).or_insert_with(|| field.zero());
                *slot = field.add(slot, coeff);
            }
        }
        state = next;
    }
    Ok(state.remove(&bp.p2).unwrap_or_else(|| field.zero()))
}

/// Evaluate a linear combination: coefficients reduce into the field.
pub fn eval_lincomb<G, F>(g: &G, lc: &LinComb, bp: &BoundaryPair<G::V>, field: &F) -> Result<F::Elem>
where
    G: BuildingGraph,
    F: CoeffField,
{
    let mut acc = field.zero();
    for (c, w) in lc.terms() {
        let v = eval_web(g, w, bp, field)?;
        acc = field.add(&acc, &field.mul(&field.from_int(c), &v));
    }
    Ok(acc)
}

/// Every matched pair with both paths based at `base`: all domain-type
/// paths, crossed with all codomain-type paths to the same endpoint.
pub fn exhaustive_pairs<G: BuildingGraph>(
    g: &G,
    base: &G::V,
    dom: &WebObject,
    cod: &WebObject,
) -> Result<Vec<BoundaryPair<G::V>>> {
    let mut out = Vec::new();
    for p1 in enumerate_paths(g, base, dom.labels())? {
        for p2 in enumerate_paths_to(g, base, p1.end(), cod.labels())? {
            out.push(BoundaryPair { p1: p1.clone(), p2 });
        }
    }
    Ok(out)
}

/// Deterministic seeded sampling. Matched pairs are grouped by base vertex
/// and shared endpoint, the domain paths of each group are shuffled, and
/// the groups are then drained round robin, one domain path with all its
/// codomain partners per visit. This keeps coverage balanced across bases
/// and endpoint classes, and asking for more pairs than exist returns the
/// whole space.
pub fn sampled_pairs<G: BuildingGraph>(
    g: &G,
    bases: &[G::V],
    dom: &WebObject,
    cod: &WebObject,
    seed: u64,
    max_pairs: usize,
) -> Result<Vec<BoundaryPair<G::V>>> {
    if bases.is_empty() {
        return Err(Error::invalid("sampled_pairs needs at least one base vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<(Vec<Path<G::V>>, Vec<Path<G::V>>)> = Vec::new();
    for base in bases {
        let mut by_end: BTreeMap<G::V, (Vec<Path<G::V>>, Vec<Path<G::V>>)> = BTreeMap::new();
        for p1 in enumerate_paths(g, base, dom.labels())? {
            by_end.entry(p1.end().clone()).or_default().0.push(p1);
        }
        for p2 in enumerate_paths(g, base, cod.labels())? {
            if let Some(slot) = by_end.get_mut(p2.end()) {
                slot.1.push(p2);
            }
        }
        for (_, (mut p1s, mut p2s)) in by_end {
            if !p2s.is_empty() {
                p1s.shuffle(&mut rng);
                p2s.shuffle(&mut rng);
                groups.push((p1s, p2s));
            }
        }
    }
    groups.shuffle(&mut rng);
    let mut out = Vec::new();
    let mut cursor = vec![0usize; groups.len()];
    'outer: loop {
        let mut progressed = false;
        for (gi, (p1s, p2s)) in groups.iter().enumerate() {
            if cursor[gi] >= p1s.len() {
                continue;
            }
            let p1 = &p1s[cursor[gi]];
            cursor[gi] += 1;
            progressed = true;
            for p2 in p2s {
                if out.len() >= max_pairs {
                    break 'outer;
                }
                out.push(BoundaryPair { p1: p1.clone(), p2: p2.clone() });
            }
        }
        if !progressed {
            break;
        }
    }
    Ok(out)
}

/// Which graph a report talks about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelInfo {
    pub kind: String,
    pub n: usize,
    pub q: u64,
}

impl ModelInfo {
    pub fn weight_lattice(n: usize) -> ModelInfo {
        ModelInfo { kind: "weight-lattice".into(), n, q: 1 }
    }

    pub fn bruhat_tits(n: usize, q: u64) -> ModelInfo {
        ModelInfo { kind: "bruhat-tits".into(), n, q }
    }
}

/// One disagreement, with both values rendered in the field.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub p1: serde_json::Value,
    pub p2: serde_json::Value,
    pub lhs: String,
    pub rhs: String,
}

/// The outcome of checking one relation instance over one pair sample.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub relation: String,
    pub params: serde_json::Value,
    pub model: ModelInfo,
    pub field: String,
    pub pairs_tested: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compare both sides of a relation on every pair. Disagreements are data
/// in the report, never errors.
pub fn verify_relation<G, F>(
    g: &G,
    model: &ModelInfo,
    inst: &RelationInstance,
    sides: &(LinComb, LinComb),
    pairs: &[BoundaryPair<G::V>],
    field: &F,
) -> Result<Report>
where
    G: BuildingGraph,
    F: CoeffField,
{
    let (lhs, rhs) = sides;
    let mut failures = Vec::new();
    for bp in pairs {
        let l = eval_lincomb(g, lhs, bp, field)?;
        let r = eval_lincomb(g, rhs, bp, field)?;
        if l != r {
            failures.push(Failure {
                p1: bp.p1.to_json(),
                p2: bp.p2.to_json(),
                lhs: field.display(&l),
                rhs: field.display(&r),
            });
        }
    }
    Ok(Report {
        relation: inst.id.to_string(),
        params: serde_json::to_value(inst.params).expect("params serialize"),
        model: model.clone(),
        field: field.name(),
        pairs_tested: pairs.len(),
        failures,
    })
}
