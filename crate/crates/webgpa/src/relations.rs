//! The defining relations of the web category, instantiated as pairs of
//! linear combinations with a common boundary.
//!
//! Every relation is built bottom to top out of sliced layers. The two
//! square-switch families are parametrized by the two strand labels and the
//! two rung sizes; their right-hand sums run over every integer t for which
//! all strand labels of the candidate web stay inside [0, n], labels of 0
//! meaning a deleted strand. Candidate terms that fall outside that window
//! simply do not exist as morphisms and are dropped, while terms whose
//! binomial coefficient happens to vanish are kept verbatim.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeffs::binomial;
use crate::error::{Error, Result};
use crate::web::{Generator, LinComb, Web, WebObject};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    Assoc,
    Coassoc,
    Bigon,
    Ss1,
    Ss2,
    Ss1Special,
    Ss2Special,
    LollipopA,
    LollipopB,
    SlnL,
    SlnR,
}

impl RelationId {
    pub fn all() -> &'static [RelationId] {
        use RelationId::*;
        &[Assoc, Coassoc, Bigon, Ss1, Ss2, Ss1Special, Ss2Special, LollipopA, LollipopB, SlnL, SlnR]
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationId::Assoc => "ASSOC",
            RelationId::Coassoc => "COASSOC",
            RelationId::Bigon => "BIGON",
            RelationId::Ss1 => "SS1",
            RelationId::Ss2 => "SS2",
            RelationId::Ss1Special => "SS1-SPECIAL",
            RelationId::Ss2Special => "SS2-SPECIAL",
            RelationId::LollipopA => "LOLLIPOP-A",
            RelationId::LollipopB => "LOLLIPOP-B",
            RelationId::SlnL => "SLN-L",
            RelationId::SlnR => "SLN-R",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<RelationId> {
        RelationId::all()
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown relation '{s}'")))
    }
}

/// Named parameters; relations read the subset they need.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl Params {
    pub fn none() -> Params {
        Params::default()
    }

    pub fn jk(j: usize, k: usize) -> Params {
        Params { j: Some(j), k: Some(k), ..Params::default() }
    }

    pub fn jkl(j: usize, k: usize, l: usize) -> Params {
        Params { j: Some(j), k: Some(k), l: Some(l), ..Params::default() }
    }

    pub fn jklm(j: usize, k: usize, l: usize, m: usize) -> Params {
        Params { j: Some(j), k: Some(k), l: Some(l), m: Some(m) }
    }

    pub fn only_m(m: usize) -> Params {
        Params { m: Some(m), ..Params::default() }
    }

    fn need(&self, field: Option<usize>, name: &str) -> Result<usize> {
        field.ok_or_else(|| Error::invalid(format!("missing parameter '{name}'")))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, v) in [("j", self.j), ("k", self.k), ("l", self.l), ("m", self.m)] {
            if let Some(v) = v {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{name}={v}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// One relation with concrete parameters, the unit of reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RelationInstance {
    pub id: RelationId,
    pub params: Params,
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params == Params::none() {
            write!(f, "{}", self.id)
        } else {
            write!(f, "{}({})", self.id, self.params)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    LeftToRight,
    RightToLeft,
}

/// Two-strand ladder with the given rungs, or None when some intermediate
/// label leaves [0, n]. Strand labels of 0 are deleted throughout.
fn ladder(n: usize, start: (usize, usize), rungs: &[(usize, Dir)]) -> Option<Web> {
    let ni = n as i64;
    let (mut left, mut right) = (start.0 as i64, start.1 as i64);
    if left > ni || right > ni {
        return None;
    }
    let mut layers: Vec<Vec<Generator>> = Vec::new();
    for &(r, dir) in rungs {
        if r == 0 {
            continue;
        }
        let r = r as i64;
        match dir {
            Dir::LeftToRight => {
                if left < r || right + r > ni {
                    return None;
                }
                let rest = left - r;
                if rest > 0 && right > 0 {
                    layers.push(vec![
                        Generator::Split(rest as usize, r as usize),
                        Generator::Id(right as usize),
                    ]);
                    layers.push(vec![
                        Generator::Id(rest as usize),
                        Generator::Merge(r as usize, right as usize),
                    ]);
                } else if rest > 0 {
                    layers.push(vec![Generator::Split(rest as usize, r as usize)]);
                } else if right > 0 {
                    layers.push(vec![Generator::Merge(left as usize, right as usize)]);
                }
                left = rest;
                right += r;
            }
            Dir::RightToLeft => {
                if right < r || left + r > ni {
                    return None;
                }
                let rest = right - r;
                if rest > 0 && left > 0 {
                    layers.push(vec![
                        Generator::Id(left as usize),
                        Generator::Split(r as usize, rest as usize),
                    ]);
                    layers.push(vec![
                        Generator::Merge(left as usize, r as usize),
                        Generator::Id(rest as usize),
                    ]);
                } else if rest > 0 {
                    layers.push(vec![Generator::Split(r as usize, rest as usize)]);
                } else if left > 0 {
                    layers.push(vec![Generator::Merge(left as usize, right as usize)]);
                }
                left += r;
                right = rest;
            }
        }
    }
    let dom: Vec<usize> = [start.0, start.1].into_iter().filter(|&x| x > 0).collect();
    Some(Web::new(n, WebObject::new(dom), layers).expect("ladder layers are consistent"))
}

fn single(web: Web) -> LinComb {
    LinComb::singleton(web)
}

fn web(n: usize, dom: Vec<usize>, layers: Vec<Vec<Generator>>) -> Result<Web> {
    Web::new(n, WebObject::new(dom), layers)
}

fn square_switch(
    n: usize,
    left: usize,
    right: usize,
    j: usize,
    k: usize,
    first: Dir,
) -> Result<(LinComb, LinComb)> {
    let second = match first {
        Dir::LeftToRight => Dir::RightToLeft,
        Dir::RightToLeft => Dir::LeftToRight,
    };
    if j == 0 || k == 0 {
        return Err(Error::invalid("square switch needs rung sizes j, k >= 1"));
    }
    let lhs = ladder(n, (left, right), &[(k, first), (j, second)])
        .ok_or_else(|| Error::invalid("square switch: some strand label leaves [0, n]"))?;
    // The upper binomial index from the two strand labels and rung sizes;
    // it can be negative, in which case the polynomial continuation of the
    // binomial coefficient is in force. Mirroring the square left-right
    // swaps the strand labels but keeps each rung size with its rung, so
    // only the strand difference flips sign between the two variants.
    let upper = match first {
        Dir::LeftToRight => left as i64 - right as i64 + j as i64 - k as i64,
        Dir::RightToLeft => right as i64 - left as i64 + j as i64 - k as i64,
    };
    let mut terms = Vec::new();
    for t in 0..=j.min(k) {
        if let Some(w) = ladder(n, (left, right), &[(j - t, second), (k - t, first)]) {
            terms.push((binomial(upper, t as i64), w));
        }
    }
    let rhs = LinComb::new(n, lhs.dom().clone(), lhs.codomain(), terms)?;
    Ok((single(lhs), rhs))
}

/// Both sides of a relation, with integer coefficients exactly as written.
pub fn relation_instance(n: usize, id: RelationId, params: &Params) -> Result<(LinComb, LinComb)> {
    if n < 2 {
        return Err(Error::invalid(format!("relations need n >= 2, got {n}")));
    }
    match id {
        RelationId::Assoc => {
            let (j, k, l) = (
                params.need(params.j, "j")?,
                params.need(params.k, "k")?,
                params.need(params.l, "l")?,
            );
            if j < 1 || k < 1 || l < 1 || j + k + l > n {
                return Err(Error::invalid("associativity needs j,k,l >= 1 and j+k+l <= n"));
            }
            let lhs = web(n, vec![j, k, l], vec![
                vec![Generator::Merge(j, k), Generator::Id(l)],
                vec![Generator::Merge(j + k, l)],
            ])?;
            let rhs = web(n, vec![j, k, l], vec![
                vec![Generator::Id(j), Generator::Merge(k, l)],
                vec![Generator::Merge(j, k + l)],
            ])?;
            Ok((single(lhs), single(rhs)))
        }
        RelationId::Coassoc => {
            let (j, k, l) = (
                params.need(params.j, "j")?,
                params.need(params.k, "k")?,
                params.need(params.l, "l")?,
            );
            if j < 1 || k < 1 || l < 1 || j + k + l > n {
                return Err(Error::invalid("coassociativity needs j,k,l >= 1 and j+k+l <= n"));
            }
            let lhs = web(n, vec![j + k + l], vec![
                vec![Generator::Split(j + k, l)],
                vec![Generator::Split(j, k), Generator::Id(l)],
            ])?;
            let rhs = web(n, vec![j + k + l], vec![
                vec![Generator::Split(j, k + l)],
                vec![Generator::Id(j), Generator::Split(k, l)],
            ])?;
            Ok((single(lhs), single(rhs)))
        }
        RelationId::Bigon => {
            let (j, k) = (params.need(params.j, "j")?, params.need(params.k, "k")?);
            if j < 1 || k < 1 || j + k > n {
                return Err(Error::invalid("bigon needs j,k >= 1 and j+k <= n"));
            }
            let lhs = web(n, vec![j + k], vec![
                vec![Generator::Split(j, k)],
                vec![Generator::Merge(j, k)],
            ])?;
            let id = Web::identity(n, WebObject::new(vec![j + k]))?;
            let rhs = LinComb::new(
                n,
                id.dom().clone(),
                id.codomain(),
                vec![(binomial((j + k) as i64, j as i64), id)],
            )?;
            Ok((single(lhs), rhs))
        }
        RelationId::Ss1 => {
            let (j, k, l, m) = (
                params.need(params.j, "j")?,
                params.need(params.k, "k")?,
                params.need(params.l, "l")?,
                params.need(params.m, "m")?,
            );
            square_switch(n, m, l, j, k, Dir::LeftToRight)
        }
        RelationId::Ss2 => {
            let (j, k, l, m) = (
                params.need(params.j, "j")?,
                params.need(params.k, "k")?,
                params.need(params.l, "l")?,
                params.need(params.m, "m")?,
            );
            square_switch(n, m, l, j, k, Dir::RightToLeft)
        }
        RelationId::Ss1Special => {
            let m = params.need(params.m, "m")?;
            if m < 1 || m + 1 > n {
                return Err(Error::invalid("needs 1 <= m <= n-1"));
            }
            relation_instance(n, RelationId::Ss1, &Params::jklm(1, 1, 1, m))
        }
        RelationId::Ss2Special => {
            let m = params.need(params.m, "m")?;
            if m < 1 || m + 1 > n {
                return Err(Error::invalid("needs 1 <= m <= n-1"));
            }
            relation_instance(n, RelationId::Ss2, &Params::jklm(1, 1, m, 1))
        }
        RelationId::LollipopA => {
            let lhs = web(n, vec![n], vec![vec![Generator::NCap], vec![Generator::NCup]])?;
            let rhs = Web::identity(n, WebObject::new(vec![n]))?;
            Ok((single(lhs), single(rhs)))
        }
        RelationId::LollipopB => {
            let lhs = web(n, vec![], vec![vec![Generator::NCup], vec![Generator::NCap]])?;
            let rhs = Web::identity(n, WebObject::unit())?;
            Ok((single(lhs), single(rhs)))
        }
        RelationId::SlnL => {
            let m = params.need(params.m, "m")?;
            if m < 1 || m >= n {
                return Err(Error::invalid("needs 1 <= m <= n-1"));
            }
            let lhs = web(n, vec![m], vec![
                vec![Generator::Id(m), Generator::NCup],
                vec![Generator::Id(m), Generator::Split(n - m, m)],
                vec![Generator::Merge(m, n - m), Generator::Id(m)],
                vec![Generator::NCap, Generator::Id(m)],
            ])?;
            let rhs = Web::identity(n, WebObject::new(vec![m]))?;
            Ok((single(lhs), single(rhs)))
        }
        RelationId::SlnR => {
            let m = params.need(params.m, "m")?;
            if m < 1 || m >= n {
                return Err(Error::invalid("needs 1 <= m <= n-1"));
            }
            let lhs = web(n, vec![m], vec![
                vec![Generator::NCup, Generator::Id(m)],
                vec![Generator::Split(m, n - m), Generator::Id(m)],
                vec![Generator::Id(m), Generator::Merge(n - m, m)],
                vec![Generator::Id(m), Generator::NCap],
            ])?;
            let rhs = Web::identity(n, WebObject::new(vec![m]))?;
            Ok((single(lhs), single(rhs)))
        }
    }
}

/// Every valid small-parameter instance of every family, the default
/// verification suite for a given n.
pub fn default_instances(n: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    let mut push_if_valid = |id: RelationId, params: Params| {
        if relation_instance(n, id, &params).is_ok() {
            out.push(RelationInstance { id, params });
        }
    };
    for j in 1..=n {
        for k in 1..=n {
            for l in 1..=n {
                if j + k + l <= n {
                    push_if_valid(RelationId::Assoc, Params::jkl(j, k, l));
                    push_if_valid(RelationId::Coassoc, Params::jkl(j, k, l));
                }
            }
            if j + k <= n {
                push_if_valid(RelationId::Bigon, Params::jk(j, k));
            }
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            for m in 0..=n {
                for l in 0..=n {
                    push_if_valid(RelationId::Ss1, Params::jklm(j, k, l, m));
                    push_if_valid(RelationId::Ss2, Params::jklm(j, k, l, m));
                }
            }
        }
    }
    for m in 1..n {
        push_if_valid(RelationId::Ss1Special, Params::only_m(m));
        push_if_valid(RelationId::Ss2Special, Params::only_m(m));
    }
    push_if_valid(RelationId::LollipopA, Params::none());
    push_if_valid(RelationId::LollipopB, Params::none());
    for m in 1..n {
        push_if_valid(RelationId::SlnL, Params::only_m(m));
        push_if_valid(RelationId::SlnR, Params::only_m(m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use num::BigInt;

    #[test]
    fn every_family_is_constructible_for_small_n() {
        for n in [3, 4] {
            let suite = default_instances(n);
            for id in RelationId::all() {
                assert!(
                    suite.iter().any(|inst| inst.id == *id),
                    "no instance of {id} for n={n}"
                );
            }
        }
    }

    #[test]
    fn sides_share_boundaries() {
        for n in [2, 3, 4] {
            for inst in default_instances(n) {
                let (lhs, rhs) = relation_instance(n, inst.id, &inst.params).unwrap();
                assert_eq!(lhs.dom(), rhs.dom(), "{inst} domains for n={n}");
                assert_eq!(lhs.cod(), rhs.cod(), "{inst} codomains for n={n}");
            }
        }
    }

    #[test]
    fn bigon_coefficient_is_the_plain_binomial() {
        let (lhs, rhs) = relation_instance(3, RelationId::Bigon, &Params::jk(1, 1)).unwrap();
        assert_eq!(lhs.terms().len(), 1);
        assert_eq!(rhs.terms().len(), 1);
        assert_eq!(rhs.terms()[0].0, BigInt::from(2));
        assert!(rhs.terms()[0].1.layers().is_empty());
        let (_, rhs) = relation_instance(4, RelationId::Bigon, &Params::jk(2, 2)).unwrap();
        assert_eq!(rhs.terms()[0].0, BigInt::from(6));
    }

    #[test]
    fn ss1_special_is_one_square_plus_m_minus_1_identities() {
        let (lhs, rhs) =
            relation_instance(3, RelationId::Ss1Special, &Params::only_m(2)).unwrap();
        let expected_lhs = parse(
            "web n=3 dom=[2,1] { [split(1,1), id(1)] [id(1), merge(1,1)] [id(1), split(1,1)] [merge(1,1), id(1)] }",
        )
        .unwrap();
        assert_eq!(lhs.terms().len(), 1);
        assert_eq!(lhs.terms()[0].1, expected_lhs);
        assert_eq!(rhs.terms().len(), 2);
        let square = &rhs.terms()[0];
        let ident = &rhs.terms()[1];
        assert_eq!(square.0, BigInt::from(1));
        assert_eq!(
            square.1.to_string(),
            "web n=3 dom=[2,1] { [merge(2,1)] [split(2,1)] }"
        );
        assert_eq!(ident.0, BigInt::from(2 - 1));
        assert!(ident.1.layers().is_empty());
    }

    #[test]
    fn ss2_special_mirrors_with_the_thick_strand_on_the_right() {
        let (_, rhs) = relation_instance(3, RelationId::Ss2Special, &Params::only_m(2)).unwrap();
        assert_eq!(rhs.terms().len(), 2);
        assert_eq!(
            rhs.terms()[0].1.to_string(),
            "web n=3 dom=[1,2] { [merge(1,2)] [split(1,2)] }"
        );
        assert_eq!(rhs.terms()[1].0, BigInt::from(1));
    }

    #[test]
    fn negative_upper_binomials_appear_verbatim() {
        // Left strand 1, right strand 2, both rungs 1: the upper index
        // m - l + j - k is -1, so the identity term carries -1.
        let (lhs, rhs) =
            relation_instance(3, RelationId::Ss1, &Params::jklm(1, 1, 2, 1)).unwrap();
        assert_eq!(
            lhs.terms()[0].1.to_string(),
            "web n=3 dom=[1,2] { [merge(1,2)] [split(1,2)] }"
        );
        assert_eq!(rhs.terms().len(), 2);
        assert_eq!(rhs.terms()[0].0, BigInt::from(1));
        assert_eq!(rhs.terms()[1].0, BigInt::from(-1));
        assert!(rhs.terms()[1].1.layers().is_empty());
    }

    #[test]
    fn dropped_terms_shrink_the_sum() {
        // Left strand 2, right strand 0: the t = 0 web needs a rung out of
        // an empty right strand, so only the identity term survives and the
        // relation degenerates to the bigon.
        let (lhs, rhs) =
            relation_instance(3, RelationId::Ss1, &Params::jklm(1, 1, 0, 2)).unwrap();
        assert_eq!(
            lhs.terms()[0].1.to_string(),
            "web n=3 dom=[2] { [split(1,1)] [merge(1,1)] }"
        );
        assert_eq!(rhs.terms().len(), 1);
        assert_eq!(rhs.terms()[0].0, BigInt::from(2));
        assert!(rhs.terms()[0].1.layers().is_empty());
    }

    #[test]
    fn full_strand_relations_use_caps_and_cups() {
        let (lhs, rhs) = relation_instance(3, RelationId::LollipopA, &Params::none()).unwrap();
        assert_eq!(lhs.terms()[0].1.to_string(), "web n=3 dom=[3] { [ncap] [ncup] }");
        assert!(rhs.terms()[0].1.layers().is_empty());
        let (lhs, _) = relation_instance(3, RelationId::LollipopB, &Params::none()).unwrap();
        assert_eq!(lhs.terms()[0].1.to_string(), "web n=3 dom=[] { [ncup] [ncap] }");
        let (lhs, rhs) = relation_instance(3, RelationId::SlnL, &Params::only_m(2)).unwrap();
        assert_eq!(lhs.terms()[0].1.dom(), rhs.terms()[0].1.dom());
        assert_eq!(lhs.terms()[0].1.layers().len(), 4);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(relation_instance(3, RelationId::Assoc, &Params::jkl(1, 1, 2)).is_err());
        assert!(relation_instance(3, RelationId::Bigon, &Params::jk(0, 2)).is_err());
        assert!(relation_instance(3, RelationId::Bigon, &Params::jk(2, 2)).is_err());
        assert!(relation_instance(3, RelationId::Ss1, &Params::jk(1, 1)).is_err());
        assert!(relation_instance(3, RelationId::SlnL, &Params::only_m(3)).is_err());
        // A ladder whose first rung cannot be taken.
        assert!(relation_instance(3, RelationId::Ss1, &Params::jklm(1, 3, 1, 2)).is_err());
    }

    #[test]
    fn ss1_special_matches_the_general_family() {
        for n in [3, 4, 5] {
            for m in 1..n {
                let special =
                    relation_instance(n, RelationId::Ss1Special, &Params::only_m(m)).unwrap();
                let general =
                    relation_instance(n, RelationId::Ss1, &Params::jklm(1, 1, 1, m)).unwrap();
                assert_eq!(special, general);
            }
        }
    }
}
