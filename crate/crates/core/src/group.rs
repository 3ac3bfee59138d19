//! The projectivity group preserving the twisted cubic: the image of
//! PGL(2,q) inside PGL(4,q).
//!
//! Every invertible fractional-linear substitution `t -> (a t + b)/(c t + d)`
//! of the curve parameter extends to a unique projectivity of PG(3,q) fixing
//! the curve setwise. With points written as row vectors acted on by
//! `x -> x M`, the extension of `(a, b, c, d)` is
//!
//! ```text
//!     | a^3    a^2 c         a c^2         c^3    |
//!     | 3a^2 b a^2 d + 2abc  b c^2 + 2acd  3c^2 d |
//!     | 3a b^2 b^2 c + 2abd  a d^2 + 2bcd  3c d^2 |
//!     | b^3    b^2 d         b d^2         d^3    |
//! ```
//!
//! which satisfies `P(t) M = P((a t + b)/(c t + d))` in every characteristic
//! (the familiar simpler shapes for even q and for characteristic 3 are the
//! specializations of this matrix). The group has order q^3 - q.

use crate::cubic::CubicParam;
use crate::gfq::{Elem, FieldCtx};
use crate::pg3::{line_through, PlueckerLine, Point};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    /// The 2x2 parameter matrix has determinant zero.
    #[error("the substitution parameters are singular (ad = bc)")]
    Singular,
    /// `identify_group` was given a set that is not closed under
    /// composition.
    #[error("the element list is not closed under composition")]
    NotClosed,
}

/// A fractional-linear substitution in canonical projective form: the first
/// nonzero coefficient of `(a, b, c, d)` is 1, so equal values mean equal
/// group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Rep {
    a: Elem,
    b: Elem,
    c: Elem,
    d: Elem,
}

impl GL2Rep {
    /// Canonicalizes `(a, b, c, d)`; errors when `ad = bc`.
    pub fn new(f: &FieldCtx, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<GL2Rep, GroupError> {
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        if det.code() == 0 {
            return Err(GroupError::Singular);
        }
        let lead = [a, b, c, d]
            .into_iter()
            .find(|e| e.code() != 0)
            .expect("a nonsingular matrix is nonzero");
        let s = f.inv(lead).expect("leading coefficient is nonzero");
        Ok(GL2Rep {
            a: f.mul(a, s),
            b: f.mul(b, s),
            c: f.mul(c, s),
            d: f.mul(d, s),
        })
    }

    /// The canonical coefficients `[a, b, c, d]`.
    pub fn coeffs(&self) -> [Elem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Applies the substitution to a curve parameter.
    pub fn apply(&self, f: &FieldCtx, t: CubicParam) -> CubicParam {
        match t {
            CubicParam::Infinity => {
                if self.c.code() == 0 {
                    CubicParam::Infinity
                } else {
                    CubicParam::Finite(f.div(self.a, self.c).expect("c is nonzero"))
                }
            }
            CubicParam::Finite(t) => {
                let den = f.add(f.mul(self.c, t), self.d);
                if den.code() == 0 {
                    CubicParam::Infinity
                } else {
                    let num = f.add(f.mul(self.a, t), self.b);
                    CubicParam::Finite(f.div(num, den).expect("denominator is nonzero"))
                }
            }
        }
    }
}

/// Product of two substitutions as 2x2 matrices (column-vector convention,
/// so `mul2(s, r)` applies `r` first, then `s`).
fn mul2(f: &FieldCtx, s: &GL2Rep, r: &GL2Rep) -> GL2Rep {
    GL2Rep::new(
        f,
        f.add(f.mul(s.a, r.a), f.mul(s.b, r.c)),
        f.add(f.mul(s.a, r.b), f.mul(s.b, r.d)),
        f.add(f.mul(s.c, r.a), f.mul(s.d, r.c)),
        f.add(f.mul(s.c, r.b), f.mul(s.d, r.d)),
    )
    .expect("products of nonsingular matrices are nonsingular")
}

/// A projectivity of PG(3,q) preserving the curve, stored with both its
/// parameter source and its 4x4 matrix (both in canonical scaling, so
/// equality of sources is equality of group elements).
#[derive(Debug, Clone, Copy)]
pub struct Projectivity {
    source: GL2Rep,
    mat: [[Elem; 4]; 4],
}

impl PartialEq for Projectivity {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for Projectivity {}

impl std::hash::Hash for Projectivity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.source.hash(state);
    }
}

impl Projectivity {
    pub fn source(&self) -> &GL2Rep {
        &self.source
    }

    /// The 4x4 matrix, scaled so its first nonzero entry (row-major) is 1.
    pub fn matrix(&self) -> &[[Elem; 4]; 4] {
        &self.mat
    }
}

/// Extends a substitution to the projectivity of PG(3,q) described in the
/// module documentation.
pub fn lift(f: &FieldCtx, rep: &GL2Rep) -> Projectivity {
    let [a, b, c, d] = rep.coeffs();
    let two = f.from_int(2);
    let three = f.from_int(3);
    let sq = |x: Elem| f.square(x);
    let cu = |x: Elem| f.mul(f.square(x), x);
    let m = |x: Elem, y: Elem| f.mul(x, y);

    let mut mat = [
        [cu(a), m(sq(a), c), m(a, sq(c)), cu(c)],
        [
            m(three, m(sq(a), b)),
            f.add(m(sq(a), d), m(two, m(a, m(b, c)))),
            f.add(m(b, sq(c)), m(two, m(a, m(c, d)))),
            m(three, m(sq(c), d)),
        ],
        [
            m(three, m(a, sq(b))),
            f.add(m(sq(b), c), m(two, m(a, m(b, d)))),
            f.add(m(a, sq(d)), m(two, m(b, m(c, d)))),
            m(three, m(c, sq(d))),
        ],
        [cu(b), m(sq(b), d), m(b, sq(d)), cu(d)],
    ];

    let lead = mat
        .iter()
        .flatten()
        .copied()
        .find(|e| e.code() != 0)
        .expect("a lifted projectivity is nonzero");
    if lead != f.one() {
        let s = f.inv(lead).expect("nonzero leading entry");
        for row in &mut mat {
            for e in row {
                *e = f.mul(*e, s);
            }
        }
    }

    Projectivity { source: *rep, mat }
}

/// The identity projectivity.
pub fn identity(f: &FieldCtx) -> Projectivity {
    lift(
        f,
        &GL2Rep::new(f, f.one(), f.zero(), f.zero(), f.one()).expect("identity is nonsingular"),
    )
}

/// Enumerates the whole group, one canonical representative per element:
/// first `a = 1` with `d != bc`, then `a = 0, b = 1` with `c != 0`, inner
/// coefficients in code order. The length is q^3 - q.
pub fn enumerate_gq(f: &FieldCtx) -> Vec<GL2Rep> {
    let q = f.q();
    let mut out = Vec::with_capacity(((q * q - 1) * q) as usize);
    for bc in 0..q {
        for cc in 0..q {
            for dc in 0..q {
                let b = f.elem(bc).expect("below q");
                let c = f.elem(cc).expect("below q");
                let d = f.elem(dc).expect("below q");
                if d != f.mul(b, c) {
                    out.push(GL2Rep { a: f.one(), b, c, d });
                }
            }
        }
    }
    for cc in 1..q {
        for dc in 0..q {
            let c = f.elem(cc).expect("below q");
            let d = f.elem(dc).expect("below q");
            out.push(GL2Rep {
                a: f.zero(),
                b: f.one(),
                c,
                d,
            });
        }
    }
    out
}

/// A generating set: `t -> t + 1`, `t -> e t` for a primitive element `e`,
/// and `t -> 1/t`.
pub fn generators_gq(f: &FieldCtx) -> Vec<Projectivity> {
    let g1 = GL2Rep::new(f, f.one(), f.one(), f.zero(), f.one()).expect("unipotent");
    let g2 = GL2Rep::new(f, f.primitive_element(), f.zero(), f.zero(), f.one())
        .expect("diagonal with nonzero entries");
    let g3 = GL2Rep::new(f, f.zero(), f.one(), f.one(), f.zero()).expect("antidiagonal");
    vec![lift(f, &g1), lift(f, &g2), lift(f, &g3)]
}

/// Applies `g` to a point (row vector times matrix).
pub fn act_point(f: &FieldCtx, g: &Projectivity, p: &Point) -> Point {
    let x = p.coords();
    let mut y = [f.zero(); 4];
    for j in 0..4 {
        let mut s = f.zero();
        for i in 0..4 {
            s = f.add(s, f.mul(x[i], g.mat[i][j]));
        }
        y[j] = s;
    }
    Point::new(f, y)
}

/// Applies `g` to a line via two spanning points.
pub fn act_line(f: &FieldCtx, g: &Projectivity, l: &PlueckerLine) -> PlueckerLine {
    let (a, b) = l.spanning_points(f);
    let ia = act_point(f, g, &a);
    let ib = act_point(f, g, &b);
    line_through(f, &ia, &ib).expect("projectivities preserve distinctness")
}

/// The composite "apply `g`, then `h`".
pub fn compose(f: &FieldCtx, g: &Projectivity, h: &Projectivity) -> Projectivity {
    lift(f, &mul2(f, &h.source, &g.source))
}

/// The inverse projectivity.
pub fn inverse(f: &FieldCtx, g: &Projectivity) -> Projectivity {
    let [a, b, c, d] = g.source.coeffs();
    let rep = GL2Rep::new(f, d, f.neg(b), f.neg(c), a).expect("inverses of nonsingular matrices");
    lift(f, &rep)
}

/// The order of `g` in the group.
pub fn element_order(f: &FieldCtx, g: &Projectivity) -> u32 {
    let id = GL2Rep::new(f, f.one(), f.zero(), f.zero(), f.one()).expect("identity");
    let mut pow = g.source;
    let mut n = 1u32;
    while pow != id {
        pow = mul2(f, &g.source, &pow);
        n += 1;
        assert!(n <= f.q() + 1, "element orders divide q^3 - q and are at most q + 1");
    }
    n
}

/// Abstract structure of a small subgroup, as far as the census of element
/// orders pins it down. The groups that arise as line stabilizers in this
/// crate are all determined by their order census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupId {
    Trivial,
    C2,
    C3,
    C4,
    C2xC2,
    A4,
    /// Anything else, reported by its census `order -> multiplicity`.
    OrderCensus(BTreeMap<u32, u32>),
}

impl GroupId {
    /// Stable machine-readable label (used by report output).
    pub fn label(&self) -> String {
        match self {
            GroupId::Trivial => "trivial".to_owned(),
            GroupId::C2 => "C2".to_owned(),
            GroupId::C3 => "C3".to_owned(),
            GroupId::C4 => "C4".to_owned(),
            GroupId::C2xC2 => "C2xC2".to_owned(),
            GroupId::A4 => "A4".to_owned(),
            GroupId::OrderCensus(census) => {
                let parts: Vec<String> =
                    census.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                format!("census[{}]", parts.join(","))
            }
        }
    }

    /// The group order (sum of the census).
    pub fn order(&self) -> u32 {
        match self {
            GroupId::Trivial => 1,
            GroupId::C2 => 2,
            GroupId::C3 => 3,
            GroupId::C4 | GroupId::C2xC2 => 4,
            GroupId::A4 => 12,
            GroupId::OrderCensus(census) => census.values().sum(),
        }
    }
}

impl std::fmt::Display for GroupId {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.write_str(&self.label())
    }
}

/// Identifies the abstract structure of a nonempty element list after
/// checking it is closed under composition (a finite set closed under the
/// product is a subgroup). Duplicates are ignored.
pub fn identify_group(f: &FieldCtx, elems: &[Projectivity]) -> Result<GroupId, GroupError> {
    assert!(!elems.is_empty(), "a group has at least the identity");
    let set: std::collections::HashSet<GL2Rep> = elems.iter().map(|g| g.source).collect();
    for x in &set {
        for y in &set {
            if !set.contains(&mul2(f, y, x)) {
                return Err(GroupError::NotClosed);
            }
        }
    }

    let mut census: BTreeMap<u32, u32> = BTreeMap::new();
    for rep in &set {
        let g = lift(f, rep);
        *census.entry(element_order(f, &g)).or_insert(0) += 1;
    }
    let n: u32 = census.values().sum();

    let id = match n {
        1 => GroupId::Trivial,
        2 => GroupId::C2,
        3 => GroupId::C3,
        4 => {
            if census.get(&2) == Some(&3) {
                GroupId::C2xC2
            } else {
                GroupId::C4
            }
        }
        12 if census.get(&2) == Some(&3) && census.get(&3) == Some(&8) => GroupId::A4,
        _ => GroupId::OrderCensus(census),
    };
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::{CubicCtx, CubicParam};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn field(q: u32) -> FieldCtx {
        FieldCtx::new(q).expect("valid order")
    }

    fn rep(f: &FieldCtx, a: i64, b: i64, c: i64, d: i64) -> GL2Rep {
        GL2Rep::new(f, f.from_int(a), f.from_int(b), f.from_int(c), f.from_int(d))
            .expect("nonsingular test matrix")
    }

    fn random_rep(f: &FieldCtx, rng: &mut StdRng) -> GL2Rep {
        loop {
            let q = f.q();
            let pick = |rng: &mut StdRng| f.elem(rng.gen_range(0..q)).expect("in range");
            let (a, b, c, d) = (pick(rng), pick(rng), pick(rng), pick(rng));
            if let Ok(r) = GL2Rep::new(f, a, b, c, d) {
                return r;
            }
        }
    }

    #[test]
    fn enumeration_has_order_q_cubed_minus_q() {
        for q in [5u32, 7, 8, 9] {
            let f = field(q);
            let all = enumerate_gq(&f);
            let expected = (q as usize).pow(3) - q as usize;
            assert_eq!(all.len(), expected);
            let set: std::collections::HashSet<GL2Rep> = all.iter().copied().collect();
            assert_eq!(set.len(), expected, "representatives are distinct");
        }
    }

    #[test]
    fn singular_parameters_are_rejected() {
        let f = field(5);
        assert_eq!(
            GL2Rep::new(&f, f.one(), f.from_int(2), f.from_int(2), f.from_int(4)).unwrap_err(),
            GroupError::Singular
        );
    }

    #[test]
    fn lift_realizes_the_substitution_on_every_curve_point() {
        for q in [5u32, 7, 8, 9] {
            let c = CubicCtx::new(q).unwrap();
            let f = c.field();
            for r in enumerate_gq(f) {
                let g = lift(f, &r);
                for t in c.parameters() {
                    let moved = act_point(f, &g, &c.cubic_point(t));
                    assert_eq!(
                        moved,
                        c.cubic_point(r.apply(f, t)),
                        "q={q}, rep={:?}",
                        r.coeffs()
                    );
                }
            }
        }
    }

    #[test]
    fn lift_specializes_to_the_even_characteristic_form() {
        let f = field(8);
        for r in enumerate_gq(&f) {
            let [a, b, c, d] = r.coeffs();
            let m = |x: Elem, y: Elem| f.mul(x, y);
            let sq = |x: Elem| f.square(x);
            let cu = |x: Elem| f.mul(f.square(x), x);
            let expected = [
                [cu(a), m(sq(a), c), m(a, sq(c)), cu(c)],
                [m(sq(a), b), m(sq(a), d), m(b, sq(c)), m(sq(c), d)],
                [m(a, sq(b)), m(sq(b), c), m(a, sq(d)), m(c, sq(d))],
                [cu(b), m(sq(b), d), m(b, sq(d)), cu(d)],
            ];
            assert_eq!(canonical_mat(&f, expected), *lift(&f, &r).matrix());
        }
    }

    #[test]
    fn lift_specializes_to_the_characteristic_3_form() {
        let f = field(9);
        for r in enumerate_gq(&f) {
            let [a, b, c, d] = r.coeffs();
            let z = f.zero();
            let m = |x: Elem, y: Elem| f.mul(x, y);
            let sq = |x: Elem| f.square(x);
            let cu = |x: Elem| f.mul(f.square(x), x);
            let expected = [
                [cu(a), m(sq(a), c), m(a, sq(c)), cu(c)],
                [
                    z,
                    f.sub(m(sq(a), d), m(a, m(b, c))),
                    f.sub(m(b, sq(c)), m(a, m(c, d))),
                    z,
                ],
                [
                    z,
                    f.sub(m(sq(b), c), m(a, m(b, d))),
                    f.sub(m(a, sq(d)), m(b, m(c, d))),
                    z,
                ],
                [cu(b), m(sq(b), d), m(b, sq(d)), cu(d)],
            ];
            assert_eq!(canonical_mat(&f, expected), *lift(&f, &r).matrix());
        }
    }

    fn canonical_mat(f: &FieldCtx, mut mat: [[Elem; 4]; 4]) -> [[Elem; 4]; 4] {
        let lead = mat
            .iter()
            .flatten()
            .copied()
            .find(|e| e.code() != 0)
            .expect("nonzero matrix");
        if lead != f.one() {
            let s = f.inv(lead).unwrap();
            for row in &mut mat {
                for e in row {
                    *e = f.mul(*e, s);
                }
            }
        }
        mat
    }

    #[test]
    fn composition_is_a_homomorphism() {
        for q in [5u32, 7, 8, 9] {
            let c = CubicCtx::new(q).unwrap();
            let f = c.field();
            let mut rng = StdRng::seed_from_u64(0x5eed + u64::from(q));
            for _ in 0..200 {
                let rg = random_rep(f, &mut rng);
                let rh = random_rep(f, &mut rng);
                let g = lift(f, &rg);
                let h = lift(f, &rh);
                let gh = compose(f, &g, &h);
                // The composite substitution applied to parameters...
                for t in c.parameters() {
                    assert_eq!(
                        gh.source().apply(f, t),
                        rh.apply(f, rg.apply(f, t)),
                        "q={q}"
                    );
                }
                // ...and the composite matrix on a non-curve point.
                let p = Point::new(f, [f.one(), f.zero(), f.zero(), f.one()]);
                assert_eq!(act_point(f, &gh, &p), act_point(f, &h, &act_point(f, &g, &p)));
            }
        }
    }

    #[test]
    fn inverses_compose_to_the_identity() {
        let f = field(9);
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let g = lift(&f, &random_rep(&f, &mut rng));
            assert_eq!(compose(&f, &g, &inverse(&f, &g)), identity(&f));
            assert_eq!(compose(&f, &inverse(&f, &g), &g), identity(&f));
        }
    }

    #[test]
    fn element_orders_are_correct_for_known_elements() {
        let f = field(5);
        assert_eq!(element_order(&f, &identity(&f)), 1);
        // t -> t + 1 has the characteristic as order.
        assert_eq!(element_order(&f, &lift(&f, &rep(&f, 1, 1, 0, 1))), 5);
        // t -> 1/t is an involution.
        assert_eq!(element_order(&f, &lift(&f, &rep(&f, 0, 1, 1, 0))), 2);
        // t -> 2t has multiplicative order of 2, which is 4 mod 5.
        assert_eq!(element_order(&f, &lift(&f, &rep(&f, 2, 0, 0, 1))), 4);
        let f8 = field(8);
        assert_eq!(element_order(&f8, &lift(&f8, &rep(&f8, 1, 1, 0, 1))), 2);
    }

    #[test]
    fn the_identity_fixes_every_line() {
        let f = field(5);
        let id = identity(&f);
        for l in crate::pg3::all_lines(&f) {
            assert_eq!(act_line(&f, &id, &l), l);
        }
    }

    #[test]
    fn generators_generate_the_whole_group() {
        for q in [5u32, 7] {
            let f = field(q);
            let gens = generators_gq(&f);
            let mut seen: std::collections::HashSet<GL2Rep> =
                std::collections::HashSet::new();
            seen.insert(identity(&f).source);
            let mut frontier: Vec<Projectivity> = vec![identity(&f)];
            while let Some(g) = frontier.pop() {
                for gen in &gens {
                    let next = compose(&f, &g, gen);
                    if seen.insert(next.source) {
                        frontier.push(next);
                    }
                }
            }
            assert_eq!(seen.len(), (q as usize).pow(3) - q as usize);
        }
    }

    #[test]
    fn the_group_acts_triply_transitively_on_the_curve() {
        let q = 5u32;
        let c = CubicCtx::new(q).unwrap();
        let f = c.field();
        let params: Vec<CubicParam> = c.parameters().collect();
        let all = enumerate_gq(f);
        let base = (
            CubicParam::Finite(f.zero()),
            CubicParam::Finite(f.one()),
            CubicParam::Infinity,
        );
        for &x in &params {
            for &y in &params {
                for &z in &params {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    let hits = all
                        .iter()
                        .filter(|r| {
                            r.apply(f, base.0) == x
                                && r.apply(f, base.1) == y
                                && r.apply(f, base.2) == z
                        })
                        .count();
                    assert_eq!(hits, 1, "exactly one element per ordered triple");
                }
            }
        }
    }

    #[test]
    fn stabilizer_of_the_distinguished_plane_point_is_the_diagonal_family() {
        // The point (0,0,1,0) is fixed exactly by t -> t/d away from
        // characteristic 3.
        for q in [5u32, 7, 8] {
            let f = field(q);
            let target = Point::new(&f, [f.zero(), f.zero(), f.one(), f.zero()]);
            let mut fixers: Vec<GL2Rep> = Vec::new();
            for r in enumerate_gq(&f) {
                if act_point(&f, &lift(&f, &r), &target) == target {
                    fixers.push(r);
                }
            }
            let mut expected: Vec<GL2Rep> = Vec::new();
            for dc in 1..q {
                let d = f.elem(dc).unwrap();
                expected.push(GL2Rep::new(&f, f.one(), f.zero(), f.zero(), d).unwrap());
            }
            fixers.sort();
            expected.sort();
            assert_eq!(fixers, expected, "q={q}");
        }
    }

    #[test]
    fn known_involution_fixes_the_marked_external_line() {
        // Over F_5 the substitution (2,1,3,3) is an involution fixing the
        // line through (1,0,0,1) and (0,0,1,0).
        let f = field(5);
        let g = lift(&f, &rep(&f, 2, 1, 3, 3));
        assert_eq!(element_order(&f, &g), 2);
        let a = Point::new(&f, [f.one(), f.zero(), f.zero(), f.one()]);
        let b = Point::new(&f, [f.zero(), f.zero(), f.one(), f.zero()]);
        let l = line_through(&f, &a, &b).unwrap();
        assert_eq!(act_line(&f, &g, &l), l);
    }

    #[test]
    fn identify_group_recognizes_small_structures() {
        let f = field(5);
        assert_eq!(identify_group(&f, &[identity(&f)]).unwrap(), GroupId::Trivial);

        let invol = lift(&f, &rep(&f, 0, 1, 1, 0));
        assert_eq!(
            identify_group(&f, &[identity(&f), invol]).unwrap(),
            GroupId::C2
        );

        // {t, -t, 1/t, -1/t} is a Klein four-group.
        let v4 = vec![
            identity(&f),
            lift(&f, &rep(&f, -1, 0, 0, 1)),
            lift(&f, &rep(&f, 0, 1, 1, 0)),
            lift(&f, &rep(&f, 0, -1, 1, 0)),
        ];
        assert_eq!(identify_group(&f, &v4).unwrap(), GroupId::C2xC2);

        // t -> 2t generates a cyclic group of order 4 over F_5.
        let c4 = vec![
            identity(&f),
            lift(&f, &rep(&f, 2, 0, 0, 1)),
            lift(&f, &rep(&f, 4, 0, 0, 1)),
            lift(&f, &rep(&f, 3, 0, 0, 1)),
        ];
        assert_eq!(identify_group(&f, &c4).unwrap(), GroupId::C4);

        // Diagonal cube roots of unity over F_7 form C3.
        let f7 = field(7);
        let c3 = vec![
            identity(&f7),
            lift(&f7, &rep(&f7, 1, 0, 0, 2)),
            lift(&f7, &rep(&f7, 1, 0, 0, 4)),
        ];
        assert_eq!(identify_group(&f7, &c3).unwrap(), GroupId::C3);
    }

    #[test]
    fn identify_group_rejects_unclosed_sets() {
        let f = field(5);
        let shift = lift(&f, &rep(&f, 1, 1, 0, 1));
        assert_eq!(
            identify_group(&f, &[identity(&f), shift]).unwrap_err(),
            GroupError::NotClosed
        );
    }

    #[test]
    fn the_whole_group_is_closed_and_identified_by_census() {
        let f = field(5);
        let elems: Vec<Projectivity> = enumerate_gq(&f).iter().map(|r| lift(&f, r)).collect();
        match identify_group(&f, &elems).unwrap() {
            GroupId::OrderCensus(census) => {
                assert_eq!(census.values().sum::<u32>(), 120);
                assert_eq!(census.get(&1), Some(&1));
            }
            other => panic!("PGL(2,5) is none of the small cases, got {other}"),
        }
    }
}
