//! Properties of the functor layer: path functors count typed paths,
//! tensors of functionals obey the block law, translations commute with
//! everything in sight, naturality squares close vertex by vertex, and
//! fiber matrices turn vertical and horizontal composition of webs into
//! matrix products.

use std::collections::BTreeMap;

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use webgpa::field::{CoeffField, PrimeField, Rationals};
use webgpa::functor::{
    apply_action, apply_f, fiber_matrix, mat_mul, tensor_block_check, GpaFunctional,
    BundleObject, PairTable, WlSymmetry,
};
use webgpa::graph::{
    ball, effective_labels, enumerate_paths, enumerate_paths_to, BuildingGraph, Path,
};
use webgpa::relations::{relation_instance, Params, RelationId};
use webgpa::testutil::{random_web, random_web_from};
use webgpa::weight_lattice::{WeightLattice, WlVertex};
use webgpa::web::{LinComb, WebObject};

fn wl(n: usize) -> WeightLattice {
    WeightLattice::new(n).unwrap()
}

/// All boundary types of the given length over strand labels 1..=n,
/// including the full label n that contributes no step.
fn all_types(n: usize, len: usize) -> Vec<WebObject> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(WebObject::new).collect()
}

fn split_at<V: Clone + Eq>(p: &Path<V>, cut: usize) -> (Path<V>, Path<V>) {
    let prefix = Path::from_steps(p.start().clone(), p.steps()[..cut].to_vec());
    let suffix = Path::from_steps(p.vertex_at(cut).clone(), p.steps()[cut..].to_vec());
    (prefix, suffix)
}

/// The translation that carries `v` to the origin.
fn back_to_origin(v: &WlVertex) -> WlSymmetry {
    WlSymmetry::Translation(v.coords().iter().map(|&c| -c).collect())
}

#[test]
fn path_functor_dimensions_count_typed_paths() {
    let g = wl(3);
    let a = WlVertex::origin(3);
    let probe = ball(&g, &a, 3).unwrap();

    let x = BundleObject::point(a.clone());
    for len in 0..=3 {
        for sigma in all_types(3, len) {
            let (dims, basis) = apply_f(&g, &sigma, &x).unwrap();
            let mut total = 0;
            for b in &probe {
                let expected = enumerate_paths_to(&g, b, &a, sigma.labels()).unwrap().len();
                assert_eq!(
                    dims.dim(b),
                    expected,
                    "type {sigma} at {b}: fiber dimension vs path count"
                );
                total += expected;
            }
            // Support cannot escape the probe ball: every path of length
            // <= 3 ending at the origin starts inside it.
            assert_eq!(dims.total_dim(), total, "type {sigma}: support left the ball");
            for (v, slots) in &basis {
                assert_eq!(slots.len(), dims.dim(v));
                for (p, slot) in slots {
                    assert_eq!(p.start(), v);
                    assert_eq!(p.end(), &a);
                    assert_eq!(*slot, 0, "point bundle has a single slot");
                }
            }
        }
    }
}

#[test]
fn path_functor_dimensions_add_up_over_multipoint_bundles() {
    let g = wl(3);
    let a = WlVertex::origin(3);
    let b = a.step(webgpa::weight_lattice::Subset::from_indices(&[0]));
    let mut x = BundleObject::new();
    x.set(a.clone(), 2);
    x.set(b.clone(), 3);

    for sigma in [WebObject::new(vec![1]), WebObject::new(vec![2, 1]), WebObject::new(vec![1, 3, 2])] {
        let (dims, _) = apply_f(&g, &sigma, &x).unwrap();
        for v in ball(&g, &a, 3).unwrap() {
            let to_a = enumerate_paths_to(&g, &v, &a, sigma.labels()).unwrap().len();
            let to_b = enumerate_paths_to(&g, &v, &b, sigma.labels()).unwrap().len();
            assert_eq!(dims.dim(&v), 2 * to_a + 3 * to_b, "type {sigma} at {v}");
        }
    }
}

/// A random functional on a window: entries on a random half of the
/// matched pairs whose shared start lies in the populated region.
fn random_table(
    rng: &mut ChaCha8Rng,
    g: &WeightLattice,
    field: &PrimeField,
    dom: WebObject,
    cod: WebObject,
    window: &[WlVertex],
    starts: &[WlVertex],
) -> PairTable<WlVertex, u64> {
    let mut table = PairTable::new(g.rank(), dom.clone(), cod.clone(), window.iter().cloned());
    for s in starts {
        for p1 in enumerate_paths(g, s, dom.labels()).unwrap() {
            for p2 in enumerate_paths(g, s, cod.labels()).unwrap() {
                if p1.end() == p2.end() && rng.gen_bool(0.5) {
                    let v = field.from_int(&BigInt::from(rng.gen_range(1..5)));
                    table.insert(p1.clone(), p2, v).unwrap();
                }
            }
        }
    }
    table
}

#[test]
fn random_functional_tensors_satisfy_the_block_law() {
    let g = wl(3);
    let field = PrimeField::new(5).unwrap();
    let base = WlVertex::origin(3);
    let window = ball(&g, &base, 6).unwrap();
    let starts = ball(&g, &base, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9001);

    let rand_type = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=2);
        WebObject::new((0..len).map(|_| rng.gen_range(1..=3)).collect())
    };

    for round in 0..100 {
        let eta = {
            let (d, c) = (rand_type(&mut rng), rand_type(&mut rng));
            random_table(&mut rng, &g, &field, d, c, &window, &starts)
        };
        let mu = {
            let (d, c) = (rand_type(&mut rng), rand_type(&mut rng));
            random_table(&mut rng, &g, &field, d, c, &window, &starts)
        };
        let dom12 = GpaFunctional::<WeightLattice, PrimeField>::dom(&eta)
            .then(GpaFunctional::<WeightLattice, PrimeField>::dom(&mu));
        let reach = enumerate_paths(&g, &base, dom12.labels()).unwrap();
        let target = reach[rng.gen_range(0..reach.len())].end().clone();
        assert!(
            tensor_block_check(&g, &eta, &mu, &base, &target, &field).unwrap(),
            "round {round}: block law failed for target {target}"
        );
    }
}

#[test]
fn translations_commute_with_path_functors() {
    let g = wl(3);
    let origin = WlVertex::origin(3);
    let spots = ball(&g, &origin, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1312);

    for _ in 0..30 {
        let mut x = BundleObject::new();
        for _ in 0..rng.gen_range(1..=3) {
            let v = spots[rng.gen_range(0..spots.len())].clone();
            x.set(v, rng.gen_range(1..=2));
        }
        let delta: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
        let sym = WlSymmetry::Translation(delta);
        let len = rng.gen_range(1..=2);
        let sigma = WebObject::new((0..len).map(|_| rng.gen_range(1..=3)).collect());

        let (then_move, _) = apply_f(&g, &sigma, &x).unwrap();
        let (move_then, _) = apply_f(&g, &sigma, &apply_action(&sym, &x)).unwrap();
        assert_eq!(apply_action(&sym, &then_move), move_then, "type {sigma}, action {sym}");
    }
}

/// The matrix of `F_sigma(phi)` at a vertex: block diagonal over the path
/// basis, with the component of `phi` at the path's far endpoint in each
/// block.
fn functor_on_morphism(
    field: &PrimeField,
    rows: &[(Path<WlVertex>, usize)],
    cols: &[(Path<WlVertex>, usize)],
    phi: &BTreeMap<WlVertex, Vec<Vec<u64>>>,
) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|(q, t)| {
            cols.iter()
                .map(|(p, s)| {
                    if p == q {
                        phi[p.end()][*t][*s]
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// The component matrix of the functional-induced natural map at a vertex:
/// slots pair up when the underlying paths share their far endpoint.
fn component_matrix(
    g: &WeightLattice,
    field: &PrimeField,
    f: &LinComb,
    rows: &[(Path<WlVertex>, usize)],
    cols: &[(Path<WlVertex>, usize)],
) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|(q, t)| {
            cols.iter()
                .map(|(p, s)| {
                    if p.end() == q.end() && s == t {
                        let bp = webgpa::eval::BoundaryPair::new(g, p.clone(), q.clone()).unwrap();
                        f.value(g, &bp, field).unwrap()
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense product with the column count passed in, so factors with zero
/// rows still yield a correctly shaped zero matrix.
fn product(field: &PrimeField, a: &[Vec<u64>], b: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![field.zero(); cols]; a.len()];
    for (i, arow) in a.iter().enumerate() {
        for (k, e) in arow.iter().enumerate() {
            if field.is_zero(e) {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                out[i][j] = field.add(&out[i][j], &field.mul(e, bkj));
            }
        }
    }
    out
}

#[test]
fn naturality_squares_commute_vertex_by_vertex() {
    let g = wl(3);
    let field = PrimeField::new(5).unwrap();
    let origin = WlVertex::origin(3);
    let spots = ball(&g, &origin, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(271828);

    let (bigon_l, bigon_r) = relation_instance(3, RelationId::Bigon, &Params::jk(1, 1)).unwrap();
    let (assoc_l, _) = relation_instance(3, RelationId::Assoc, &Params::jkl(1, 1, 1)).unwrap();
    let loose = LinComb::singleton(random_web_from(99, 3, WebObject::new(vec![1, 2]), 2));
    let functionals = [bigon_l, bigon_r, assoc_l, loose];

    let mut nonzero_checks = 0usize;
    for f in &functionals {
        for _ in 0..6 {
            // Shared support at the origin keeps the squares from being
            // vacuously zero when the random supports miss each other.
            let mut x = BundleObject::point(origin.clone());
            let mut y = BundleObject::point(origin.clone());
            for _ in 0..rng.gen_range(1..=2) {
                x.set(spots[rng.gen_range(0..spots.len())].clone(), rng.gen_range(1..=2));
            }
            for _ in 0..rng.gen_range(1..=2) {
                y.set(spots[rng.gen_range(0..spots.len())].clone(), rng.gen_range(1..=2));
            }
            // A random morphism x -> y, one component per vertex. Vertices
            // outside a support get a 0-by-0 block.
            let mut phi: BTreeMap<WlVertex, Vec<Vec<u64>>> = BTreeMap::new();
            for v in &spots {
                let block = (0..y.dim(v))
                    .map(|_| {
                        (0..x.dim(v))
                            .map(|_| field.from_int(&BigInt::from(rng.gen_range(0..5))))
                            .collect()
                    })
                    .collect();
                phi.insert(v.clone(), block);
            }

            let (_, fx) = apply_f(&g, f.dom(), &x).unwrap();
            let (_, fy) = apply_f(&g, f.dom(), &y).unwrap();
            let (_, gx) = apply_f(&g, f.cod(), &x).unwrap();
            let (_, gy) = apply_f(&g, f.cod(), &y).unwrap();
            let empty = Vec::new();
            let mut verts = std::collections::BTreeSet::new();
            verts.extend(fx.keys().cloned());
            verts.extend(fy.keys().cloned());
            verts.extend(gx.keys().cloned());
            verts.extend(gy.keys().cloned());

            for i in &verts {
                let fx_i = fx.get(i).unwrap_or(&empty);
                let fy_i = fy.get(i).unwrap_or(&empty);
                let gx_i = gx.get(i).unwrap_or(&empty);
                let gy_i = gy.get(i).unwrap_or(&empty);

                let f_phi = functor_on_morphism(&field, fy_i, fx_i, &phi);
                let g_phi = functor_on_morphism(&field, gy_i, gx_i, &phi);
                let eta_x = component_matrix(&g, &field, f, gx_i, fx_i);
                let eta_y = component_matrix(&g, &field, f, gy_i, fy_i);

                let lhs = product(&field, &eta_y, &f_phi, fx_i.len());
                let rhs = product(&field, &g_phi, &eta_x, fx_i.len());
                assert_eq!(lhs, rhs, "square at {i} for functional {} -> {}", f.dom(), f.cod());
                nonzero_checks +=
                    lhs.iter().flatten().filter(|e| !field.is_zero(e)).count();
            }
        }
    }
    assert!(nonzero_checks > 50, "squares were almost all zero: {nonzero_checks}");
}

#[test]
fn fiber_matrices_turn_web_composition_into_matrix_products() {
    let g = wl(3);
    let q = Rationals;
    let base = WlVertex::origin(3);

    let mut nonzero = 0usize;
    for seed in 0..25u64 {
        let w1 = random_web(seed, 3, 2);
        let w2 = random_web_from(seed.wrapping_mul(77) + 5, 3, w1.codomain(), 2);
        let w = w1.compose(&w2).unwrap();

        let m1 = fiber_matrix(&g, &LinComb::singleton(w1), &base, &q).unwrap();
        let m2 = fiber_matrix(&g, &LinComb::singleton(w2), &base, &q).unwrap();
        let m = fiber_matrix(&g, &LinComb::singleton(w), &base, &q).unwrap();

        assert_eq!(m.dom_paths, m1.dom_paths);
        assert_eq!(m.cod_paths, m2.cod_paths);
        assert_eq!(m.entries, mat_mul(&q, &m2.entries, &m1.entries), "seed {seed}");
        nonzero += m.entries.iter().flatten().filter(|e| !q.is_zero(e)).count();
    }
    assert!(nonzero > 0, "every composite evaluated to zero");
}

#[test]
fn fiber_matrices_turn_web_tensors_into_entrywise_products() {
    let g = wl(3);
    let q = Rationals;
    let base = WlVertex::origin(3);

    let mut nonzero = 0usize;
    for seed in 100..120u64 {
        let wa = random_web(seed, 3, 2);
        let wb = random_web(seed + 1000, 3, 2);
        let wt = wa.tensor(&wb).unwrap();

        let ma = fiber_matrix(&g, &LinComb::singleton(wa.clone()), &base, &q).unwrap();
        let mb = fiber_matrix(&g, &LinComb::singleton(wb.clone()), &base, &q).unwrap();
        let mt = fiber_matrix(&g, &LinComb::singleton(wt), &base, &q).unwrap();

        let index = |paths: &[Path<WlVertex>]| -> BTreeMap<Path<WlVertex>, usize> {
            paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
        };
        let (a_dom, a_cod) = (index(&ma.dom_paths), index(&ma.cod_paths));
        let (b_dom, b_cod) = (index(&mb.dom_paths), index(&mb.cod_paths));
        let cut_dom = effective_labels(3, wa.dom().labels()).unwrap().len();
        let cut_cod = effective_labels(3, wa.codomain().labels()).unwrap().len();

        for (r, qrow) in mt.cod_paths.iter().enumerate() {
            let (qa, qb) = split_at(qrow, cut_cod);
            for (c, pcol) in mt.dom_paths.iter().enumerate() {
                let (pa, pb) = split_at(pcol, cut_dom);
                // Fibers over the two factors are identified by sliding the
                // trailing segment back to the base point; entries with
                // mismatched seams must vanish on both sides.
                let expected = if pa.end() == qa.end() {
                    let shift = back_to_origin(pa.end());
                    let pb0 = shift.apply_path(&pb, 3);
                    let qb0 = shift.apply_path(&qb, 3);
                    let left = &ma.entries[a_cod[&qa]][a_dom[&pa]];
                    let right = &mb.entries[b_cod[&qb0]][b_dom[&pb0]];
                    q.mul(left, right)
                } else {
                    q.zero()
                };
                assert_eq!(mt.entries[r][c], expected, "seed {seed}, row {r}, col {c}");
                if !q.is_zero(&mt.entries[r][c]) {
                    nonzero += 1;
                }
            }
        }
    }
    assert!(nonzero > 0, "every tensor entry evaluated to zero");
}

#[test]
fn fiber_matrices_refuse_models_without_a_transitive_translation_action() {
    let g = webgpa::bruhat_tits::BruhatTits::new(3, 2, 3).unwrap();
    let base = g.standard_vertex();
    let lc = LinComb::singleton(random_web(7, 3, 1));
    let err = fiber_matrix(&g, &lc, &base, &Rationals).unwrap_err();
    assert!(err.to_string().contains("simply transitive"), "got: {err}");
}
