//! Web diagrams as data: labeled boundary objects, the five generators,
//! and sliced diagrams built from layers of generators.
//!
//! A web is stored bottom to top: the domain object sits under the first
//! layer, and each layer is a left-to-right list of generators whose
//! concatenated inputs must match the object below it. Keeping diagrams
//! pre-sliced avoids any planar-isotopy normalization; every relation we
//! check is expressible in sliced form.

use std::fmt;

use num::BigInt;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{CoeffField, FieldSpec, PrimeField, Rationals};

/// A boundary object: a finite sequence of strand labels in [1, n].
/// The empty sequence is the monoidal unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WebObject(Vec<usize>);

impl WebObject {
    pub fn new(labels: Vec<usize>) -> WebObject {
        WebObject(labels)
    }

    pub fn unit() -> WebObject {
        WebObject(Vec::new())
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation, the monoidal product on objects.
    pub fn then(&self, other: &WebObject) -> WebObject {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        WebObject(v)
    }

    fn validate(&self, n: usize) -> Result<()> {
        for &l in &self.0 {
            if l < 1 || l > n {
                return Err(Error::invalid(format!("strand label {l} outside 1..={n}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WebObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// One generating morphism. Labels count strands; `NCap` and `NCup` turn an
/// n-labeled strand into the empty boundary and back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Id(usize),
    Merge(usize, usize),
    Split(usize, usize),
    NCap,
    NCup,
}

impl Generator {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Generator::Id(k) => {
                if k < 1 || k > n {
                    return Err(Error::invalid(format!("id({k}) needs 1 <= k <= {n}")));
                }
            }
            Generator::Merge(j, k) | Generator::Split(j, k) => {
                if j < 1 || k < 1 || j + k > n {
                    return Err(Error::invalid(format!(
                        "generator arguments ({j},{k}) need j,k >= 1 and j+k <= {n}"
                    )));
                }
            }
            Generator::NCap | Generator::NCup => {}
        }
        Ok(())
    }

    pub fn inputs(&self, n: usize) -> Vec<usize> {
        match *self {
            Generator::Id(k) => vec![k],
            Generator::Merge(j, k) => vec![j, k],
            Generator::Split(j, k) => vec![j + k],
            Generator::NCap => vec![n],
            Generator::NCup => vec![],
        }
    }

    pub fn outputs(&self, n: usize) -> Vec<usize> {
        match *self {
            Generator::Id(k) => vec![k],
            Generator::Merge(j, k) => vec![j + k],
            Generator::Split(j, k) => vec![j, k],
            Generator::NCap => vec![],
            Generator::NCup => vec![n],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Id(k) => write!(f, "id({k})"),
            Generator::Merge(j, k) => write!(f, "merge({j},{k})"),
            Generator::Split(j, k) => write!(f, "split({j},{k})"),
            Generator::NCap => write!(f, "ncap"),
            Generator::NCup => write!(f, "ncup"),
        }
    }
}

/// A sliced web diagram over a fixed ambient n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Web {
    n: usize,
    dom: WebObject,
    layers: Vec<Vec<Generator>>,
}

impl Web {
    /// Validates every layer against the object below it; the error names
    /// the first offending layer.
    pub fn new(n: usize, dom: WebObject, layers: Vec<Vec<Generator>>) -> Result<Web> {
        if n < 2 {
            return Err(Error::invalid(format!("webs need n >= 2, got {n}")));
        }
        dom.validate(n)?;
        let mut cur = dom.labels().to_vec();
        for (li, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::Validation { layer: li, msg: "layer has no generators".into() });
            }
            let mut pos = 0;
            let mut next = Vec::new();
            for g in layer {
                g.validate(n).map_err(|e| Error::Validation { layer: li, msg: e.to_string() })?;
                for need in g.inputs(n) {
                    if pos >= cur.len() || cur[pos] != need {
                        return Err(Error::Validation {
                            layer: li,
                            msg: format!(
                                "generator {g} expects a {need}-strand at position {pos} of {:?}",
                                cur
                            ),
                        });
                    }
                    pos += 1;
                }
                next.extend(g.outputs(n));
            }
            if pos != cur.len() {
                return Err(Error::Validation {
                    layer: li,
                    msg: format!("{} strands of {:?} left unconsumed", cur.len() - pos, cur),
                });
            }
            cur = next;
        }
        Ok(Web { n, dom, layers })
    }

    /// The identity web: no layers at all.
    pub fn identity(n: usize, obj: WebObject) -> Result<Web> {
        Web::new(n, obj, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dom(&self) -> &WebObject {
        &self.dom
    }

    pub fn layers(&self) -> &[Vec<Generator>] {
        &self.layers
    }

    pub fn codomain(&self) -> WebObject {
        let mut cur = self.dom.labels().to_vec();
        for layer in &self.layers {
            let mut next = Vec::new();
            for g in layer {
                next.extend(g.outputs(self.n));
            }
            cur = next;
        }
        WebObject(cur)
    }

    /// Vertical composition, this diagram first, then `other` on top.
    pub fn compose(&self, other: &Web) -> Result<Web> {
        if self.n != other.n {
            return Err(Error::invalid("composition needs a common ambient n"));
        }
        if self.codomain() != other.dom {
            return Err(Error::invalid(format!(
                "composition mismatch: codomain {} vs domain {}",
                self.codomain(),
                other.dom
            )));
        }
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Web::new(self.n, self.dom.clone(), layers)
    }

    /// Horizontal juxtaposition. The shorter diagram is padded on top with
    /// identity layers so both sides have the same depth.
    pub fn tensor(&self, other: &Web) -> Result<Web> {
        if self.n != other.n {
            return Err(Error::invalid("tensor needs a common ambient n"));
        }
        let depth = self.layers.len().max(other.layers.len());
        let left = padded_layers(self, depth);
        let right = padded_layers(other, depth);
        let layers = left
            .into_iter()
            .zip(right)
            .map(|(mut a, b)| {
                a.extend(b);
                a
            })
            .filter(|l| !l.is_empty())
            .collect();
        Web::new(self.n, self.dom.then(&other.dom), layers)
    }
}

fn padded_layers(w: &Web, depth: usize) -> Vec<Vec<Generator>> {
    let mut layers = w.layers.clone();
    let id_layer: Vec<Generator> =
        w.codomain().labels().iter().map(|&k| Generator::Id(k)).collect();
    while layers.len() < depth {
        layers.push(id_layer.clone());
    }
    layers
}

impl fmt::Display for Web {
    /// The canonical textual form; `parser::parse` round-trips it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "web n={} dom={} {{", self.n, self.dom)?;
        for layer in &self.layers {
            write!(f, " [")?;
            for (i, g) in layer.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, "]")?;
        }
        write!(f, " }}")
    }
}

/// A formal linear combination of webs with a common boundary. The
/// coefficients are exact integers; evaluation reduces them into whichever
/// field is active.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb {
    n: usize,
    dom: WebObject,
    cod: WebObject,
    terms: Vec<(BigInt, Web)>,
}

impl LinComb {
    pub fn new(n: usize, dom: WebObject, cod: WebObject, terms: Vec<(BigInt, Web)>) -> Result<LinComb> {
        for (i, (_, w)) in terms.iter().enumerate() {
            if w.n() != n || *w.dom() != dom || w.codomain() != cod {
                return Err(Error::invalid(format!(
                    "term {i} has boundary {} -> {}, expected {} -> {}",
                    w.dom(),
                    w.codomain(),
                    dom,
                    cod
                )));
            }
        }
        Ok(LinComb { n, dom, cod, terms })
    }

    pub fn singleton(web: Web) -> LinComb {
        let (n, dom, cod) = (web.n(), web.dom().clone(), web.codomain());
        LinComb { n, dom, cod, terms: vec![(BigInt::from(1), web)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dom(&self) -> &WebObject {
        &self.dom
    }

    pub fn cod(&self) -> &WebObject {
        &self.cod
    }

    pub fn terms(&self) -> &[(BigInt, Web)] {
        &self.terms
    }

    /// Serialized with coefficients rendered in the given field.
    pub fn to_json(&self, field: &FieldSpec) -> Result<serde_json::Value> {
        let coeff_strings: Result<Vec<String>> = self
            .terms
            .iter()
            .map(|(c, _)| match field {
                FieldSpec::Rational => {
                    let f = Rationals;
                    Ok(f.display(&f.from_int(c)))
                }
                FieldSpec::Prime(p) => {
                    let f = PrimeField::new(*p)?;
                    Ok(f.display(&f.from_int(c)))
                }
            })
            .collect();
        let terms: Vec<serde_json::Value> = coeff_strings?
            .into_iter()
            .zip(&self.terms)
            .map(|(c, (_, w))| json!({"coeff": c, "web": w.to_string()}))
            .collect();
        Ok(json!({"field": field.to_string(), "terms": terms}))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn merge_web() -> Web {
        Web::new(3, WebObject::new(vec![1, 1]), vec![vec![Generator::Merge(1, 1)]]).unwrap()
    }

    #[test]
    fn codomains_follow_generator_arities() {
        assert_eq!(merge_web().codomain(), WebObject::new(vec![2]));
        let cap = Web::new(3, WebObject::new(vec![3]), vec![vec![Generator::NCap]]).unwrap();
        assert_eq!(cap.codomain(), WebObject::unit());
        let chain = Web::new(
            3,
            WebObject::new(vec![1, 2]),
            vec![vec![Generator::Merge(1, 2)], vec![Generator::NCap]],
        )
        .unwrap();
        assert_eq!(chain.codomain(), WebObject::unit());
    }

    #[test]
    fn compose_stacks_and_checks_boundaries() {
        let split = Web::new(3, WebObject::new(vec![2]), vec![vec![Generator::Split(1, 1)]]).unwrap();
        let bigon = merge_web().compose(&split).unwrap();
        assert_eq!(*bigon.dom(), WebObject::new(vec![1, 1]));
        assert_eq!(bigon.codomain(), WebObject::new(vec![1, 1]));
        assert_eq!(bigon.layers().len(), 2);
        assert!(merge_web().compose(&merge_web()).is_err());
    }

    #[test]
    fn tensor_of_identities_is_the_identity() {
        let a = Web::identity(3, WebObject::new(vec![1])).unwrap();
        let b = Web::identity(3, WebObject::new(vec![2])).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t, Web::identity(3, WebObject::new(vec![1, 2])).unwrap());
    }

    #[test]
    fn tensor_pads_the_shallower_side_with_identities() {
        let deep = Web::new(
            3,
            WebObject::new(vec![1, 1]),
            vec![vec![Generator::Merge(1, 1)], vec![Generator::Split(1, 1)]],
        )
        .unwrap();
        let shallow = Web::new(3, WebObject::new(vec![1]), vec![vec![Generator::Id(1)]]).unwrap();
        let t = deep.tensor(&shallow).unwrap();
        assert_eq!(*t.dom(), WebObject::new(vec![1, 1, 1]));
        assert_eq!(t.codomain(), WebObject::new(vec![1, 1, 1]));
        assert_eq!(t.layers()[1], vec![Generator::Split(1, 1), Generator::Id(1)]);
    }

    #[test]
    fn validation_errors_name_the_layer() {
        let bad = Web::new(
            3,
            WebObject::new(vec![1, 2]),
            vec![vec![Generator::Merge(1, 2)], vec![Generator::Merge(1, 1)]],
        );
        match bad {
            Err(Error::Validation { layer, .. }) => assert_eq!(layer, 1),
            other => panic!("expected a layer-1 validation error, got {other:?}"),
        }
        assert!(Web::new(3, WebObject::new(vec![1]), vec![vec![Generator::Merge(2, 2)]]).is_err());
    }

    #[test]
    fn full_label_is_legal_but_oversized_labels_are_not() {
        assert!(Web::identity(3, WebObject::new(vec![3])).is_ok());
        assert!(Web::identity(3, WebObject::new(vec![4])).is_err());
    }

    #[test]
    fn lincomb_enforces_common_boundaries() {
        let id2 = Web::identity(3, WebObject::new(vec![2])).unwrap();
        let ok = LinComb::new(
            3,
            WebObject::new(vec![2]),
            WebObject::new(vec![2]),
            vec![(BigInt::from(2), id2.clone())],
        );
        assert!(ok.is_ok());
        let bad = LinComb::new(
            3,
            WebObject::new(vec![2]),
            WebObject::new(vec![1, 1]),
            vec![(BigInt::from(2), id2)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn lincomb_json_renders_coefficients_in_the_field() {
        let id2 = Web::identity(3, WebObject::new(vec![2])).unwrap();
        let lc = LinComb::new(
            3,
            WebObject::new(vec![2]),
            WebObject::new(vec![2]),
            vec![(BigInt::from(7), id2)],
        )
        .unwrap();
        let j = lc.to_json(&FieldSpec::Prime(5)).unwrap();
        assert_eq!(j["field"], "F5");
        assert_eq!(j["terms"][0]["coeff"], "2");
        assert_eq!(j["terms"][0]["web"], "web n=3 dom=[2] { }");
    }
}
