//! Vector-space bundles over a building graph and the path endofunctors on
//! them: finite-support objects, the functors that sum fibers along typed
//! paths, matrices of natural transformations on point-object windows, the
//! block law for tensor products, type-rotating symmetries with an
//! invariance checker, and the fiber matrices that the simply transitive
//! translation model collapses to.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::eval::{eval_lincomb, BoundaryPair, Failure, ModelInfo, Report};
use crate::field::CoeffField;
use crate::graph::{effective_labels, enumerate_paths, enumerate_paths_to, BuildingGraph, Path};
use crate::web::{LinComb, WebObject};
use crate::weight_lattice::{WeightLattice, WlVertex};

/// A vector space attached to every vertex, almost all of them zero. Only
/// the nonzero dimensions are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BundleObject<V: Ord>(BTreeMap<V, usize>);

impl<V: Ord + Clone> BundleObject<V> {
    pub fn new() -> Self {
        BundleObject(BTreeMap::new())
    }

    /// The point object: one dimension at `v`, zero elsewhere.
    pub fn point(v: V) -> Self {
        let mut dims = BTreeMap::new();
        dims.insert(v, 1);
        BundleObject(dims)
    }

    pub fn set(&mut self, v: V, dim: usize) {
        if dim == 0 {
            self.0.remove(&v);
        } else {
            self.0.insert(v, dim);
        }
    }

    pub fn dim(&self, v: &V) -> usize {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&V, usize)> {
        self.0.iter().map(|(v, &d)| (v, d))
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn total_dim(&self) -> usize {
        self.0.values().sum()
    }

    /// Componentwise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut dims = self.0.clone();
        for (v, &d) in &other.0 {
            *dims.entry(v.clone()).or_insert(0) += d;
        }
        BundleObject(dims)
    }
}

/// The basis `apply_f` produces: per vertex, one slot for every pair of a
/// typed path out of that vertex and a basis index of the fiber at its
/// endpoint, in path enumeration order.
pub type PathBasis<V> = BTreeMap<V, Vec<(Path<V>, usize)>>;

/// Apply the path functor of type `sigma` to a finite object: the new
/// dimension at `i` adds up the fiber dimensions at the endpoints of all
/// sigma-typed paths out of `i`. Support stays finite because candidate
/// vertices are found by walking backwards from the old support along
/// complement-labeled edges.
pub fn apply_f<G: BuildingGraph>(
    g: &G,
    sigma: &WebObject,
    x: &BundleObject<G::V>,
) -> Result<(BundleObject<G::V>, PathBasis<G::V>)> {
    let n = g.rank();
    let eff = effective_labels(n, sigma.labels())?;
    let back: Vec<usize> = eff.iter().rev().map(|&l| n - l).collect();
    let mut candidates: BTreeSet<G::V> = BTreeSet::new();
    for (a, _) in x.support() {
        for p in enumerate_paths(g, a, &back)? {
            candidates.insert(p.end().clone());
        }
    }
    let mut dims = BundleObject::new();
    let mut basis = PathBasis::new();
    for i in candidates {
        let mut slots = Vec::new();
        for p in enumerate_paths(g, &i, sigma.labels())? {
            for slot in 0..x.dim(p.end()) {
                slots.push((p.clone(), slot));
            }
        }
        if !slots.is_empty() {
            dims.set(i.clone(), slots.len());
            basis.insert(i, slots);
        }
    }
    Ok((dims, basis))
}

/// Anything that assigns field values to matched boundary pairs, with fixed
/// domain and codomain types.
pub trait GpaFunctional<G: BuildingGraph, F: CoeffField> {
    fn dom(&self) -> &WebObject;
    fn cod(&self) -> &WebObject;
    fn value(&self, g: &G, bp: &BoundaryPair<G::V>, field: &F) -> Result<F::Elem>;
}

impl<G: BuildingGraph, F: CoeffField> GpaFunctional<G, F> for LinComb {
    fn dom(&self) -> &WebObject {
        LinComb::dom(self)
    }

    fn cod(&self) -> &WebObject {
        LinComb::cod(self)
    }

    fn value(&self, g: &G, bp: &BoundaryPair<G::V>, field: &F) -> Result<F::Elem> {
        eval_lincomb(g, self, bp, field)
    }
}

/// An explicit functional on a finite vertex window. Absent pairs whose
/// endpoints stay inside the window count as zero; querying a pair that
/// leaves the window is an error, because the table cannot distinguish a
/// true zero from missing data out there.
#[derive(Clone, Debug)]
pub struct PairTable<V: Ord, E> {
    n: usize,
    dom: WebObject,
    cod: WebObject,
    window: BTreeSet<V>,
    entries: BTreeMap<(Path<V>, Path<V>), E>,
}

impl<V: Ord + Clone + Eq, E: Clone> PairTable<V, E> {
    pub fn new(
        n: usize,
        dom: WebObject,
        cod: WebObject,
        window: impl IntoIterator<Item = V>,
    ) -> Self {
        PairTable { n, dom, cod, window: window.into_iter().collect(), entries: BTreeMap::new() }
    }

    fn in_window(&self, p: &Path<V>) -> bool {
        (0..=p.len()).all(|i| self.window.contains(p.vertex_at(i)))
    }

    pub fn insert(&mut self, p1: Path<V>, p2: Path<V>, value: E) -> Result<()> {
        if p1.type_labels() != effective_labels(self.n, self.dom.labels())?
            || p2.type_labels() != effective_labels(self.n, self.cod.labels())?
        {
            return Err(Error::invalid("pair types do not match the table boundary"));
        }
        if p1.start() != p2.start() || p1.end() != p2.end() {
            return Err(Error::invalid("pair endpoints are not matched"));
        }
        if !self.in_window(&p1) || !self.in_window(&p2) {
            return Err(Error::invalid("pair leaves the table window"));
        }
        self.entries.insert((p1, p2), value);
        Ok(())
    }
}

impl<G: BuildingGraph, F: CoeffField> GpaFunctional<G, F> for PairTable<G::V, F::Elem> {
    fn dom(&self) -> &WebObject {
        &self.dom
    }

    fn cod(&self) -> &WebObject {
        &self.cod
    }

    fn value(&self, _g: &G, bp: &BoundaryPair<G::V>, field: &F) -> Result<F::Elem> {
        if !self.in_window(bp.p1()) || !self.in_window(bp.p2()) {
            return Err(Error::invalid("window too small: pair leaves the table window"));
        }
        Ok(self
            .entries
            .get(&(bp.p1().clone(), bp.p2().clone()))
            .cloned()
            .unwrap_or_else(|| field.zero()))
    }
}

/// The matrix of the component map a functional induces between the path
/// spaces from `base` to `target`: rows over codomain-type paths, columns
/// over domain-type paths, entry = the functional on that matched pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatMatrix<V, E> {
    pub sigma: WebObject,
    pub tau: WebObject,
    pub base: V,
    pub target: V,
    pub col_paths: Vec<Path<V>>,
    pub row_paths: Vec<Path<V>>,
    pub entries: Vec<Vec<E>>,
}

pub fn nat_matrix<G, F, T>(
    g: &G,
    f: &T,
    base: &G::V,
    target: &G::V,
    field: &F,
) -> Result<NatMatrix<G::V, F::Elem>>
where
    G: BuildingGraph,
    F: CoeffField,
    T: GpaFunctional<G, F>,
{
    let col_paths = enumerate_paths_to(g, base, target, f.dom().labels())?;
    let row_paths = enumerate_paths_to(g, base, target, f.cod().labels())?;
    let mut entries = Vec::with_capacity(row_paths.len());
    for q in &row_paths {
        let mut row = Vec::with_capacity(col_paths.len());
        for p in &col_paths {
            let bp = BoundaryPair::from_paths_unchecked(p.clone(), q.clone());
            row.push(f.value(g, &bp, field)?);
        }
        entries.push(row);
    }
    Ok(NatMatrix {
        sigma: f.dom().clone(),
        tau: f.cod().clone(),
        base: base.clone(),
        target: target.clone(),
        col_paths,
        row_paths,
        entries,
    })
}

impl<V: serde::Serialize, E> NatMatrix<V, E> {
    /// Sparse JSON form: entry triplets [row, col, value] with values
    /// rendered by the field.
    pub fn to_json<F>(&self, field: &F) -> serde_json::Value
    where
        F: CoeffField<Elem = E>,
    {
        let mut triplets = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if !field.is_zero(e) {
                    triplets.push(json!([r, c, field.display(e)]));
                }
            }
        }
        json!({
            "sigma": self.sigma.labels(),
            "tau": self.tau.labels(),
            "base": self.base,
            "target": self.target,
            "rows": self.entries.len(),
            "cols": self.col_paths.len(),
            "entries": triplets,
        })
    }
}

/// Dense product of small matrices over the field. Row-major, `a` applied
/// after `b`.
pub fn mat_mul<F: CoeffField>(
    field: &F,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let cols = b.first().map(Vec::len).unwrap_or(0);
    let mut out = vec![vec![field.zero(); cols]; a.len()];
    for (i, arow) in a.iter().enumerate() {
        for (k, e) in arow.iter().enumerate() {
            if field.is_zero(e) {
                continue;
            }
            for (j, f_kj) in b[k].iter().enumerate() {
                out[i][j] = field.add(&out[i][j], &field.mul(e, f_kj));
            }
        }
    }
    out
}

fn split_path<V: Clone + Eq>(p: &Path<V>, cut: usize) -> (Path<V>, Path<V>) {
    let prefix = Path::from_steps(p.start().clone(), p.steps()[..cut].to_vec());
    let suffix = Path::from_steps(p.vertex_at(cut).clone(), p.steps()[cut..].to_vec());
    (prefix, suffix)
}

/// Check the block law for the tensor of two functionals on the window
/// from `base` to `target`: the direct matrix, whose entry is the product
/// of the factors on the split pairs, must equal the product of the two
/// sparse one-factor-at-a-time matrices.
pub fn tensor_block_check<G, F, A, B>(
    g: &G,
    eta: &A,
    mu: &B,
    base: &G::V,
    target: &G::V,
    field: &F,
) -> Result<bool>
where
    G: BuildingGraph,
    F: CoeffField,
    A: GpaFunctional<G, F>,
    B: GpaFunctional<G, F>,
{
    let n = g.rank();
    let dom12 = eta.dom().then(mu.dom());
    let cod12 = eta.cod().then(mu.cod());
    let mid12 = eta.cod().then(mu.dom());
    let cols = enumerate_paths_to(g, base, target, dom12.labels())?;
    let rows = enumerate_paths_to(g, base, target, cod12.labels())?;
    let mids = enumerate_paths_to(g, base, target, mid12.labels())?;
    let cut_dom = effective_labels(n, eta.dom().labels())?.len();
    let cut_cod = effective_labels(n, eta.cod().labels())?.len();

    let mut direct = vec![vec![field.zero(); cols.len()]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        let (q2, p2) = split_path(row, cut_cod);
        for (c, col) in cols.iter().enumerate() {
            let (q1, p1) = split_path(col, cut_dom);
            if q1.end() != q2.end() {
                continue;
            }
            let left = eta.value(g, &BoundaryPair::from_paths_unchecked(q1.clone(), q2.clone()), field)?;
            let right = mu.value(g, &BoundaryPair::from_paths_unchecked(p1, p2.clone()), field)?;
            direct[r][c] = field.mul(&left, &right);
        }
    }

    // First factor acts on the leading segment and must not move the
    // trailing one; the second factor is the mirror image.
    let mut m = vec![vec![field.zero(); cols.len()]; mids.len()];
    for (i, mid) in mids.iter().enumerate() {
        let (qm, pm) = split_path(mid, cut_cod);
        for (c, col) in cols.iter().enumerate() {
            let (q1, p1) = split_path(col, cut_dom);
            if p1 == pm {
                m[i][c] =
                    eta.value(g, &BoundaryPair::from_paths_unchecked(q1, qm.clone()), field)?;
            }
        }
    }
    let mut mp = vec![vec![field.zero(); mids.len()]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        let (q2, p2) = split_path(row, cut_cod);
        for (i, mid) in mids.iter().enumerate() {
            let (qm, pm) = split_path(mid, cut_cod);
            if q2 == qm {
                mp[r][i] =
                    mu.value(g, &BoundaryPair::from_paths_unchecked(pm, p2.clone()), field)?;
            }
        }
    }
    // With no middle paths the product has zero-width rows; spell out the
    // zero matrix so the comparison is by value, not by shape.
    let product = if mids.is_empty() {
        vec![vec![field.zero(); cols.len()]; rows.len()]
    } else {
        mat_mul(field, &mp, &m)
    };
    Ok(direct == product)
}

/// A candidate symmetry of the weight lattice. Translations are honest
/// type-rotating automorphisms; coordinate negation is a graph automorphism
/// that flips every edge label to its complement, kept around as the
/// canonical rejected example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WlSymmetry {
    Translation(Vec<i64>),
    Negation,
}

impl WlSymmetry {
    pub fn apply(&self, v: &WlVertex) -> WlVertex {
        match self {
            WlSymmetry::Translation(t) => v.translate(t),
            WlSymmetry::Negation => WlVertex::new(v.coords().iter().map(|&c| -c).collect()),
        }
    }

    /// The image of a path, step by step. Negation flips labels to their
    /// complements, which is exactly why it fails validation.
    pub fn apply_path(&self, p: &Path<WlVertex>, n: usize) -> Path<WlVertex> {
        let steps = p
            .steps()
            .iter()
            .map(|(l, v)| {
                let label = match self {
                    WlSymmetry::Translation(_) => *l,
                    WlSymmetry::Negation => n - *l,
                };
                (label, self.apply(v))
            })
            .collect();
        Path::from_steps(self.apply(p.start()), steps)
    }
}

impl fmt::Display for WlSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WlSymmetry::Translation(t) => {
                write!(f, "translation (")?;
                for (i, c) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            WlSymmetry::Negation => write!(f, "negation"),
        }
    }
}

/// Confirm that the symmetry rotates types by one constant and preserves
/// every edge label over the given vertex window; the constant is returned.
/// A violated edge is reported in the error.
pub fn validate_action(
    g: &WeightLattice,
    sym: &WlSymmetry,
    window: &[WlVertex],
) -> Result<usize> {
    let n = g.rank();
    let Some(first) = window.first() else {
        return Err(Error::invalid("validate_action needs a nonempty vertex window"));
    };
    let shift_of = |v: &WlVertex| (g.type_of(&sym.apply(v)) + n - g.type_of(v)) % n;
    let c = shift_of(first);
    for v in window {
        if shift_of(v) != c {
            return Err(Error::invalid(format!(
                "{sym} is not type rotating: vertex {first} shifts by {c}, vertex {v} by {}",
                shift_of(v)
            )));
        }
        for m in 1..n {
            for y in g.neighbors(v, m)? {
                let image = g.edge_label(&sym.apply(v), &sym.apply(&y))?;
                if image != Some(m) {
                    return Err(Error::invalid(format!(
                        "{sym} does not preserve labels: edge {v} -> {y} with label {m} \
                         maps to an edge with label {image:?}"
                    )));
                }
            }
        }
    }
    Ok(c)
}

/// Compare a functional against its pullback along a symmetry on every
/// given pair. The symmetry must first validate as type rotating on the
/// vertices the pairs touch. Disagreements are data in the report.
pub fn check_invariance<F, T>(
    g: &WeightLattice,
    f: &T,
    sym: &WlSymmetry,
    pairs: &[BoundaryPair<WlVertex>],
    field: &F,
) -> Result<Report>
where
    F: CoeffField,
    T: GpaFunctional<WeightLattice, F>,
{
    let n = g.rank();
    let mut window: BTreeSet<WlVertex> = BTreeSet::new();
    for bp in pairs {
        for p in [bp.p1(), bp.p2()] {
            for i in 0..=p.len() {
                window.insert(p.vertex_at(i).clone());
            }
        }
    }
    let window: Vec<WlVertex> = window.into_iter().collect();
    validate_action(g, sym, &window)?;
    let mut failures = Vec::new();
    for bp in pairs {
        let lhs = f.value(g, bp, field)?;
        let moved = BoundaryPair::from_paths_unchecked(
            sym.apply_path(bp.p1(), n),
            sym.apply_path(bp.p2(), n),
        );
        let rhs = f.value(g, &moved, field)?;
        if lhs != rhs {
            failures.push(Failure {
                p1: bp.p1().to_json(),
                p2: bp.p2().to_json(),
                lhs: field.display(&lhs),
                rhs: field.display(&rhs),
            });
        }
    }
    Ok(Report {
        relation: "INVARIANCE".into(),
        params: json!({ "action": sym.to_string() }),
        model: ModelInfo::weight_lattice(n),
        field: field.name(),
        pairs_tested: pairs.len(),
        failures,
    })
}

/// The pullback object along a symmetry: dimensions move forward with the
/// vertices, so the fiber of the result at g(v) is the old fiber at v.
pub fn apply_action(sym: &WlSymmetry, x: &BundleObject<WlVertex>) -> BundleObject<WlVertex> {
    let mut out = BundleObject::new();
    for (v, d) in x.support() {
        out.set(sym.apply(v), d);
    }
    out
}

/// The matrix a functional induces once the simply transitive translation
/// action identifies all fibers with the one at `base`: rows and columns
/// are typed paths out of `base`, and only endpoint-matched pairs
/// contribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberMatrix<V, E> {
    pub dom_paths: Vec<Path<V>>,
    pub cod_paths: Vec<Path<V>>,
    pub entries: Vec<Vec<E>>,
}

pub fn fiber_matrix<G, F>(
    g: &G,
    lc: &LinComb,
    base: &G::V,
    field: &F,
) -> Result<FiberMatrix<G::V, F::Elem>>
where
    G: BuildingGraph,
    F: CoeffField,
{
    if g.order() != 1 {
        return Err(Error::invalid(
            "fiber matrices need the simply transitive translation model",
        ));
    }
    let dom_paths = enumerate_paths(g, base, lc.dom().labels())?;
    let cod_paths = enumerate_paths(g, base, lc.cod().labels())?;
    let mut entries = Vec::with_capacity(cod_paths.len());
    for q in &cod_paths {
        let mut row = Vec::with_capacity(dom_paths.len());
        for p in &dom_paths {
            if p.end() == q.end() {
                let bp = BoundaryPair::from_paths_unchecked(p.clone(), q.clone());
                row.push(eval_lincomb(g, lc, &bp, field)?);
            } else {
                row.push(field.zero());
            }
        }
        entries.push(row);
    }
    Ok(FiberMatrix { dom_paths, cod_paths, entries })
}

/// The dimension the fiber construction assigns to a boundary object: the
/// number of typed paths out of `base`.
pub fn fiber_dimension<G: BuildingGraph>(
    g: &G,
    obj: &WebObject,
    base: &G::V,
) -> Result<usize> {
    Ok(enumerate_paths(g, base, obj.labels())?.len())
}

impl<V: serde::Serialize, E> FiberMatrix<V, E> {
    pub fn to_json<F>(&self, field: &F) -> serde_json::Value
    where
        F: CoeffField<Elem = E>,
    {
        let mut triplets = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if !field.is_zero(e) {
                    triplets.push(json!([r, c, field.display(e)]));
                }
            }
        }
        json!({
            "rows": self.cod_paths.len(),
            "cols": self.dom_paths.len(),
            "entries": triplets,
        })
    }
}
