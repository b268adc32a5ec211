//! Seeded random web generation for round-trip and oracle tests. Kept out
//! of the documented surface; the shapes here chase coverage, not beauty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::web::{Generator, Web, WebObject};

/// A random valid web with the given domain: each layer consumes the
/// current object left to right, picking any generator that fits, with
/// cups sprinkled in so every generator shows up.
pub fn random_web_from(seed: u64, n: usize, dom: WebObject, max_layers: usize) -> Web {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::new();
    let mut cur = dom.labels().to_vec();
    let depth = rng.gen_range(0..=max_layers);
    for _ in 0..depth {
        let mut layer = Vec::new();
        let mut next = Vec::new();
        let mut i = 0;
        while i < cur.len() {
            if rng.gen_bool(0.12) {
                layer.push(Generator::NCup);
                next.push(n);
            }
            let mut cands = vec![Generator::Id(cur[i])];
            if cur[i] == n {
                cands.push(Generator::NCap);
            }
            if cur[i] >= 2 {
                let j = rng.gen_range(1..cur[i]);
                cands.push(Generator::Split(j, cur[i] - j));
            }
            if i + 1 < cur.len() && cur[i] + cur[i + 1] <= n {
                cands.push(Generator::Merge(cur[i], cur[i + 1]));
            }
            let g = cands[rng.gen_range(0..cands.len())];
            layer.push(g);
            next.extend(g.outputs(n));
            i += g.inputs(n).len();
        }
        if layer.is_empty() {
            layer.push(Generator::NCup);
            next.push(n);
        }
        layers.push(layer);
        cur = next;
    }
    Web::new(n, dom, layers).expect("generated layers fit by construction")
}

/// A random valid web with a random small domain.
pub fn random_web(seed: u64, n: usize, max_layers: usize) -> Web {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let len = rng.gen_range(0..=3);
    let dom: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=n)).collect();
    random_web_from(seed, n, WebObject::new(dom), max_layers)
}
