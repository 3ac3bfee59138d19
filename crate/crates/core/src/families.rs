//! The two marked families of external lines and their predicted orbit
//! data.
//!
//! The marked line `Lambda` joins `(1,0,0,1)` and `(0,0,1,0)`; away from
//! characteristic 3 it misses the curve, every osculating plane, and both
//! the chord and axis families. The family line `l_mu` joins `(0,mu,0,1)`
//! and `(1,0,1,0)` for `mu` outside `{0,1}`; its points are `(gamma, mu,
//! gamma, 1)` together with `(1,0,1,0)`.
//!
//! For both families this module predicts — from residues and power classes
//! alone, never from the search engine — the stabilizer order, its abstract
//! structure, the orbit length, and the explicit stabilizing substitutions.
//! The orbit engine then measures the same quantities independently, which
//! is how the crate's verification battery cross-checks them.

use crate::cubic::CubicCtx;
use crate::gfq::{Elem, FieldCtx};
use crate::group::{lift, GroupId, Projectivity};
use crate::orbits::{self, OrbitsError};
use crate::pg3::{line_through, LineKey, PlueckerLine, Point};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum FamiliesError {
    /// The marked line's orbit theory needs an axis family, which
    /// characteristic 3 does not have.
    #[error("the marked-line analysis does not apply in characteristic 3")]
    Char3NotApplicable,
    /// A characteristic-3 operation was called over another field.
    #[error("this operation only applies in characteristic 3")]
    NotChar3,
    /// `mu` must avoid 0 and 1 (those lines meet the curve).
    #[error("mu code {0} is excluded: the family needs mu outside {{0, 1}}")]
    BadMu(u32),
    /// The requested `mu` line is not in the generic external class.
    #[error("mu code {0} is not in the generic external class over this field")]
    NotExternalGeneric(u32),
    #[error(transparent)]
    Orbits(#[from] OrbitsError),
}

/// Which stabilizer shape the marked line `Lambda` has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaCase {
    /// q = 1 mod 3, and either q is even or -1/2 is not a cube: the
    /// stabilizer is the three diagonal cube-root substitutions.
    CubeRootsOnly,
    /// q = 1 mod 3, q odd, -1/2 a cube: the stabilizer grows to A4.
    FullA4,
    /// q = 2 mod 3, q even: only the identity fixes the line.
    TrivialEven,
    /// q = 2 mod 3, q odd: one extra involution joins the identity.
    InvolutionOnly,
}

impl LambdaCase {
    pub fn label(self) -> &'static str {
        match self {
            LambdaCase::CubeRootsOnly => "cube_roots_only",
            LambdaCase::FullA4 => "full_a4",
            LambdaCase::TrivialEven => "trivial_even",
            LambdaCase::InvolutionOnly => "involution_only",
        }
    }
}

/// Predicted orbit data for the marked line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSpec {
    pub q: u32,
    pub case: LambdaCase,
    pub stab_order: u64,
    pub stab_id: GroupId,
    pub orbit_len: u64,
}

/// Which stabilizer shape a family line `l_mu` has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuCase {
    /// Even q: identity plus one antidiagonal involution.
    EvenInvolution,
    /// Characteristic 3, `mu` a non-square: the two diagonal elements.
    Char3NonSquare,
    /// Characteristic 3, `mu` a square: diagonals plus two antidiagonals.
    Char3Square,
    /// Odd q away from characteristic 3, `mu` a non-square.
    OddNonSquare,
    /// Odd q away from characteristic 3, `mu` a square (generic case).
    OddSquare,
    /// Odd q = 1 mod 12 with `mu = -1/3` a fourth power: A4.
    OddFourthRootA4,
}

impl MuCase {
    pub fn label(self) -> &'static str {
        match self {
            MuCase::EvenInvolution => "even_involution",
            MuCase::Char3NonSquare => "char3_nonsquare",
            MuCase::Char3Square => "char3_square",
            MuCase::OddNonSquare => "odd_nonsquare",
            MuCase::OddSquare => "odd_square",
            MuCase::OddFourthRootA4 => "odd_fourth_root_a4",
        }
    }
}

/// Predicted orbit data for a family line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuSpec {
    pub q: u32,
    pub mu: Elem,
    pub case: MuCase,
    pub stab_order: u64,
    pub stab_id: GroupId,
    pub orbit_len: u64,
}

/// Orbit fusion data for the whole `l_mu` family in characteristic 3,
/// measured by the orbit engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char3Census {
    pub q: u32,
    /// Parameters grouped by orbit, each group sorted by code, groups
    /// sorted by leading code, paired with the orbit length.
    pub groups: Vec<(Vec<Elem>, u64)>,
    /// Number of distinct orbits among the family lines.
    pub orbit_count: u64,
    /// Total number of lines in the union of those orbits.
    pub covered_lines: u64,
    /// Groups that share an orbit in (unordered) pairs.
    pub pairs: Vec<(Elem, Elem)>,
    /// Number of orbits carrying three family lines.
    pub triple_count: u64,
}

fn group_order(q: u32) -> u64 {
    u64::from(q).pow(3) - u64::from(q)
}

/// The marked external line through `(1,0,0,1)` and `(0,0,1,0)`.
pub fn lambda_line(cubic: &CubicCtx) -> PlueckerLine {
    let f = cubic.field();
    let a = Point::new(f, [f.one(), f.zero(), f.zero(), f.one()]);
    let b = Point::new(f, [f.zero(), f.zero(), f.one(), f.zero()]);
    line_through(f, &a, &b).expect("the marked points are distinct")
}

/// Predicted stabilizer/orbit data for the marked line (residues only, no
/// search). Errors in characteristic 3, where the line is not in the
/// generic class.
pub fn lambda_expected(f: &FieldCtx) -> Result<LambdaSpec, FamiliesError> {
    let q = f.q();
    let facts = f.residue_facts();
    if facts.xi == 0 {
        return Err(FamiliesError::Char3NotApplicable);
    }
    let n = group_order(q);
    let spec = if facts.xi == 1 {
        let a4 = q % 2 == 1 && {
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            f.is_nth_power(f.neg(half), 3)
        };
        if a4 {
            LambdaSpec {
                q,
                case: LambdaCase::FullA4,
                stab_order: 12,
                stab_id: GroupId::A4,
                orbit_len: n / 12,
            }
        } else {
            LambdaSpec {
                q,
                case: LambdaCase::CubeRootsOnly,
                stab_order: 3,
                stab_id: GroupId::C3,
                orbit_len: n / 3,
            }
        }
    } else if q % 2 == 0 {
        LambdaSpec {
            q,
            case: LambdaCase::TrivialEven,
            stab_order: 1,
            stab_id: GroupId::Trivial,
            orbit_len: n,
        }
    } else {
        LambdaSpec {
            q,
            case: LambdaCase::InvolutionOnly,
            stab_order: 2,
            stab_id: GroupId::C2,
            orbit_len: n / 2,
        }
    };
    Ok(spec)
}

/// The predicted stabilizer of the marked line, as explicit substitutions:
/// the diagonal family `t -> t/d` over cube roots `d` of 1, plus — for odd
/// q — the substitutions `(a, 1, -d/a^2, d)` over cube roots `a` of `1/2`
/// and `d` of `-1/2`.
pub fn lambda_stabilizer_matrices(f: &FieldCtx) -> Result<Vec<Projectivity>, FamiliesError> {
    if f.p() == 3 {
        return Err(FamiliesError::Char3NotApplicable);
    }
    let mut out = Vec::new();
    for d in f.cube_roots(f.one()) {
        let rep = crate::group::GL2Rep::new(f, f.one(), f.zero(), f.zero(), d)
            .expect("diagonal with nonzero entries");
        out.push(lift(f, &rep));
    }
    if f.q() % 2 == 1 {
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        for a in f.cube_roots(half) {
            for d in f.cube_roots(f.neg(half)) {
                let c = f
                    .div(f.neg(d), f.square(a))
                    .expect("cube roots of 1/2 are nonzero");
                let rep = crate::group::GL2Rep::new(f, a, f.one(), c, d)
                    .expect("the marked-line stabilizer substitutions are nonsingular");
                out.push(lift(f, &rep));
            }
        }
    }
    Ok(out)
}

/// The family line through `(0, mu, 0, 1)` and `(1, 0, 1, 0)`.
pub fn mu_line(cubic: &CubicCtx, mu: Elem) -> Result<PlueckerLine, FamiliesError> {
    let f = cubic.field();
    if mu == f.zero() || mu == f.one() {
        return Err(FamiliesError::BadMu(mu.code()));
    }
    let a = Point::new(f, [f.zero(), mu, f.zero(), f.one()]);
    let b = Point::new(f, [f.one(), f.zero(), f.one(), f.zero()]);
    Ok(line_through(f, &a, &b).expect("the family points are distinct"))
}

/// Whether `l_mu` lands in the generic external class: always for even q
/// and characteristic 3; for other odd q exactly when `mu != 1/9`.
pub fn mu_is_external_generic(f: &FieldCtx, mu: Elem) -> Result<bool, FamiliesError> {
    if mu == f.zero() || mu == f.one() {
        return Err(FamiliesError::BadMu(mu.code()));
    }
    if f.q() % 2 == 0 || f.p() == 3 {
        return Ok(true);
    }
    let ninth = f.inv(f.from_int(9)).expect("9 is invertible away from characteristic 3");
    Ok(mu != ninth)
}

/// Predicted stabilizer/orbit data for `l_mu` (residues and power classes
/// only, no search).
pub fn mu_expected(f: &FieldCtx, mu: Elem) -> Result<MuSpec, FamiliesError> {
    if !mu_is_external_generic(f, mu)? {
        return Err(FamiliesError::NotExternalGeneric(mu.code()));
    }
    let q = f.q();
    let n = group_order(q);
    let case = if q % 2 == 0 {
        MuCase::EvenInvolution
    } else if f.p() == 3 {
        if f.is_square(mu) {
            MuCase::Char3Square
        } else {
            MuCase::Char3NonSquare
        }
    } else {
        let third = f.inv(f.from_int(3)).expect("away from characteristic 3");
        let special = mu == f.neg(third) && q % 12 == 1 && f.is_nth_power(mu, 4);
        if special {
            MuCase::OddFourthRootA4
        } else if f.is_square(mu) {
            MuCase::OddSquare
        } else {
            MuCase::OddNonSquare
        }
    };
    let (stab_order, stab_id) = match case {
        MuCase::EvenInvolution | MuCase::Char3NonSquare | MuCase::OddNonSquare => {
            (2, GroupId::C2)
        }
        MuCase::Char3Square | MuCase::OddSquare => (4, GroupId::C2xC2),
        MuCase::OddFourthRootA4 => (12, GroupId::A4),
    };
    Ok(MuSpec {
        q,
        mu,
        case,
        stab_order,
        stab_id,
        orbit_len: n / stab_order,
    })
}

/// The predicted stabilizer of `l_mu`, as explicit substitutions:
///
/// * odd q (any characteristic): the diagonals `t -> t` and `t -> -t`;
/// * `mu` a square (or q even, where the root is unique): the
///   antidiagonals `(0, r, 1, 0)` over square roots `r` of `mu`;
/// * the A4 case: additionally `(-b/d, b, 1, d)` over square roots `b` of
///   `1/3` and fourth roots `d` of `-1/3`.
pub fn mu_stabilizer_matrices(f: &FieldCtx, mu: Elem) -> Result<Vec<Projectivity>, FamiliesError> {
    let spec = mu_expected(f, mu)?;
    let mut out = Vec::new();
    out.push(crate::group::identity(f));
    if f.q() % 2 == 1 {
        let rep = crate::group::GL2Rep::new(f, f.one(), f.zero(), f.zero(), f.neg(f.one()))
            .expect("diagonal");
        out.push(lift(f, &rep));
    }
    for r in f.square_roots(mu) {
        let rep =
            crate::group::GL2Rep::new(f, f.zero(), r, f.one(), f.zero()).expect("antidiagonal");
        out.push(lift(f, &rep));
    }
    if spec.case == MuCase::OddFourthRootA4 {
        let third = f.inv(f.from_int(3)).expect("odd, away from characteristic 3");
        for b in f.square_roots(third) {
            for d in f.fourth_roots(f.neg(third)) {
                let a = f.neg(f.div(b, d).expect("fourth roots are nonzero"));
                let rep = crate::group::GL2Rep::new(f, a, b, f.one(), d)
                    .expect("the special stabilizer substitutions are nonsingular");
                out.push(lift(f, &rep));
            }
        }
    }
    assert_eq!(
        out.len() as u64,
        spec.stab_order,
        "template count must match the predicted order"
    );
    Ok(out)
}

/// Predicted fused parameter pairs in characteristic 3: `mu = d^4` pairs
/// with `mu' = (d^2 - 1)^2` whenever `1 - d^2` is a nonzero square and
/// `d^4 != 1`. Pairs are unordered, deduplicated, and sorted.
pub fn char3_equivalent_pairs(f: &FieldCtx) -> Result<Vec<(Elem, Elem)>, FamiliesError> {
    if f.p() != 3 {
        return Err(FamiliesError::NotChar3);
    }
    let mut set: std::collections::BTreeSet<(Elem, Elem)> = std::collections::BTreeSet::new();
    for dc in 1..f.q() {
        let d = f.elem(dc).expect("below q");
        let d2 = f.square(d);
        let d4 = f.square(d2);
        if d4 == f.one() {
            continue;
        }
        if !f.is_square(f.sub(f.one(), d2)) {
            continue;
        }
        let mu = d4;
        let mu_other = f.square(f.sub(d2, f.one()));
        if mu == mu_other {
            continue;
        }
        let pair = if mu.code() < mu_other.code() {
            (mu, mu_other)
        } else {
            (mu_other, mu)
        };
        set.insert(pair);
    }
    Ok(set.into_iter().collect())
}

/// Measures, via the orbit engine, how the `l_mu` lines fall into orbits in
/// characteristic 3.
pub fn char3_family_census(cubic: &CubicCtx, max_q: u32) -> Result<Char3Census, FamiliesError> {
    let f = cubic.field();
    if f.p() != 3 {
        return Err(FamiliesError::NotChar3);
    }
    let q = f.q();

    // Family keys, by parameter code.
    let mut key_of: BTreeMap<Elem, LineKey> = BTreeMap::new();
    let mut owner_of: std::collections::HashMap<LineKey, Elem> =
        std::collections::HashMap::new();
    for code in 2..q {
        let mu = f.elem(code).expect("below q");
        if mu == f.one() {
            continue;
        }
        let l = mu_line(cubic, mu)?;
        let k = l.key(f);
        key_of.insert(mu, k);
        owner_of.insert(k, mu);
    }
    // mu = one may have code > 1 in extension fields; ensure exclusion held.
    assert_eq!(key_of.len() as u32, q - 2, "q - 2 family lines");

    let mut grouped: std::collections::HashSet<Elem> = std::collections::HashSet::new();
    let mut groups: Vec<(Vec<Elem>, u64)> = Vec::new();
    for (&mu, &key) in &key_of {
        if grouped.contains(&mu) {
            continue;
        }
        let l = PlueckerLine::from_key(f, key).expect("family keys are canonical");
        let orbit = orbits::orbit_of_line(cubic, &l, true, max_q)?;
        let members = orbit.members.expect("members retained");
        let mut group: Vec<Elem> = members
            .iter()
            .filter_map(|k| owner_of.get(k).copied())
            .collect();
        group.sort_by_key(|m| m.code());
        for m in &group {
            grouped.insert(*m);
        }
        groups.push((group, orbit.size));
    }
    groups.sort_by_key(|(g, _)| g[0].code());

    let orbit_count = groups.len() as u64;
    let covered_lines = groups.iter().map(|(_, s)| s).sum();
    let mut pairs = Vec::new();
    let mut triple_count = 0u64;
    for (g, _) in &groups {
        match g.len() {
            1 => {}
            2 => pairs.push((g[0], g[1])),
            3 => triple_count += 1,
            n => panic!("an orbit carries at most three family lines, found {n}"),
        }
    }
    Ok(Char3Census {
        q,
        groups,
        orbit_count,
        covered_lines,
        pairs,
        triple_count,
    })
}

/// The parameter `mu` whose family line shares the marked line's orbit, if
/// any: `-1/3`, exactly for odd q away from characteristic 3 with either
/// `q = -1 mod 12` (where `-1/3` is a non-square) or `q = 1 mod 12` with
/// `1/2` a cube and `-1/3` a fourth power.
pub fn lambda_mu_coincidence(f: &FieldCtx) -> Option<Elem> {
    let q = f.q();
    if q % 2 == 0 || f.p() == 3 {
        return None;
    }
    let third = f.inv(f.from_int(3)).expect("away from characteristic 3");
    let mu = f.neg(third);
    match q % 12 {
        11 => {
            assert!(!f.is_square(mu), "-1/3 is a non-square when q = -1 mod 12");
            Some(mu)
        }
        1 => {
            assert!(f.is_square(mu), "-1/3 is a square when q = 1 mod 12");
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            (f.is_nth_power(half, 3) && f.is_nth_power(mu, 4)).then_some(mu)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::LineClassKind;
    use crate::group::identify_group;
    use crate::orbits::{orbit_of_line, stabilizer_of_line, DEFAULT_ORBIT_MAX_Q};

    fn cubic(q: u32) -> CubicCtx {
        CubicCtx::new(q).expect("valid order")
    }

    #[test]
    fn marked_line_is_generic_external_away_from_characteristic_3() {
        for q in [5u32, 7, 8, 9, 11, 13, 16] {
            let c = cubic(q);
            let kind = c.classify_line(&lambda_line(&c)).kind;
            if q % 3 == 0 {
                assert_eq!(kind, LineClassKind::ExternalInOscPlane, "q={q}");
            } else {
                assert_eq!(kind, LineClassKind::ExternalGeneric, "q={q}");
            }
        }
    }

    #[test]
    fn marked_line_predictions() {
        let cases = [
            (5u32, LambdaCase::InvolutionOnly, 2u64, 60u64),
            (7, LambdaCase::CubeRootsOnly, 3, 112),
            (8, LambdaCase::TrivialEven, 1, 504),
            (11, LambdaCase::InvolutionOnly, 2, 660),
            (13, LambdaCase::CubeRootsOnly, 3, 728),
            (16, LambdaCase::CubeRootsOnly, 3, 1360),
            (25, LambdaCase::FullA4, 12, 1300),
        ];
        for (q, case, stab, orbit) in cases {
            let f = FieldCtx::new(q).unwrap();
            let spec = lambda_expected(&f).unwrap();
            assert_eq!(spec.case, case, "q={q}");
            assert_eq!(spec.stab_order, stab, "q={q}");
            assert_eq!(spec.orbit_len, orbit, "q={q}");
        }
        let f9 = FieldCtx::new(9).unwrap();
        assert_eq!(
            lambda_expected(&f9).unwrap_err(),
            FamiliesError::Char3NotApplicable
        );
    }

    #[test]
    fn marked_line_engine_agrees_with_prediction() {
        for q in [5u32, 7, 8, 11] {
            let c = cubic(q);
            let f = c.field();
            let l = lambda_line(&c);
            let spec = lambda_expected(f).unwrap();
            let stab = stabilizer_of_line(&c, &l, DEFAULT_ORBIT_MAX_Q).unwrap();
            assert_eq!(stab.len() as u64, spec.stab_order, "q={q}");
            assert_eq!(identify_group(f, &stab).unwrap(), spec.stab_id, "q={q}");
            let orbit = orbit_of_line(&c, &l, false, DEFAULT_ORBIT_MAX_Q).unwrap();
            assert_eq!(orbit.size, spec.orbit_len, "q={q}");

            // Template elements coincide with the measured stabilizer.
            let mut measured: Vec<_> = stab.iter().map(|g| *g.source()).collect();
            let mut template: Vec<_> = lambda_stabilizer_matrices(f)
                .unwrap()
                .iter()
                .map(|g| *g.source())
                .collect();
            measured.sort();
            template.sort();
            assert_eq!(measured, template, "q={q}");
        }
    }

    #[test]
    fn family_line_coordinates_and_exclusions() {
        let c = cubic(7);
        let f = c.field();
        let mu = f.from_int(2);
        let l = mu_line(&c, mu).unwrap();
        // Its points are (gamma, mu, gamma, 1) and (1,0,1,0).
        for code in 0..7u32 {
            let g = f.elem(code).unwrap();
            let p = Point::new(f, [g, mu, g, f.one()]);
            assert!(l.contains_point(f, &p));
        }
        assert!(l.contains_point(f, &Point::new(f, [f.one(), f.zero(), f.one(), f.zero()])));

        assert_eq!(
            mu_line(&c, f.zero()).unwrap_err(),
            FamiliesError::BadMu(0)
        );
        assert_eq!(mu_line(&c, f.one()).unwrap_err(), FamiliesError::BadMu(1));
    }

    #[test]
    fn generic_predicate_matches_classification() {
        for q in [5u32, 7, 8, 9, 11] {
            let c = cubic(q);
            let f = c.field();
            for code in 0..q {
                let mu = f.elem(code).unwrap();
                if mu == f.zero() || mu == f.one() {
                    continue;
                }
                let predicted = mu_is_external_generic(f, mu).unwrap();
                let classified = c.classify_line(&mu_line(&c, mu).unwrap()).kind
                    == LineClassKind::ExternalGeneric;
                assert_eq!(predicted, classified, "q={q}, mu code {code}");
            }
        }
    }

    #[test]
    fn family_predictions_and_engine_agree_on_small_orders() {
        for q in [7u32, 8, 9] {
            let c = cubic(q);
            let f = c.field();
            for code in 0..q {
                let mu = f.elem(code).unwrap();
                if mu == f.zero() || mu == f.one() {
                    continue;
                }
                if !mu_is_external_generic(f, mu).unwrap() {
                    assert_eq!(
                        mu_expected(f, mu).unwrap_err(),
                        FamiliesError::NotExternalGeneric(mu.code())
                    );
                    continue;
                }
                let spec = mu_expected(f, mu).unwrap();
                let l = mu_line(&c, mu).unwrap();
                let stab = stabilizer_of_line(&c, &l, DEFAULT_ORBIT_MAX_Q).unwrap();
                assert_eq!(stab.len() as u64, spec.stab_order, "q={q} mu={code}");
                assert_eq!(
                    identify_group(f, &stab).unwrap(),
                    spec.stab_id,
                    "q={q} mu={code}"
                );
                let orbit = orbit_of_line(&c, &l, false, DEFAULT_ORBIT_MAX_Q).unwrap();
                assert_eq!(orbit.size, spec.orbit_len, "q={q} mu={code}");

                let mut measured: Vec<_> = stab.iter().map(|g| *g.source()).collect();
                let mut template: Vec<_> = mu_stabilizer_matrices(f, mu)
                    .unwrap()
                    .iter()
                    .map(|g| *g.source())
                    .collect();
                measured.sort();
                template.sort();
                assert_eq!(measured, template, "q={q} mu={code}");
            }
        }
    }

    #[test]
    fn known_square_case_over_q7() {
        // mu = 2 is a square over F_7, giving the Klein four-group.
        let f = FieldCtx::new(7).unwrap();
        let spec = mu_expected(&f, f.from_int(2)).unwrap();
        assert_eq!(spec.case, MuCase::OddSquare);
        assert_eq!(spec.stab_id, GroupId::C2xC2);
        assert_eq!(spec.orbit_len, 84);
    }

    #[test]
    fn special_fourth_power_case_over_q37() {
        let f = FieldCtx::new(37).unwrap();
        // -1/3 = 12 over F_37, and it is a fourth power.
        let mu = f.from_int(12);
        assert_eq!(f.neg(f.inv(f.from_int(3)).unwrap()), mu);
        assert_eq!(f.fourth_roots(mu).len(), 4);
        let spec = mu_expected(&f, mu).unwrap();
        assert_eq!(spec.case, MuCase::OddFourthRootA4);
        assert_eq!(spec.stab_order, 12);
        assert_eq!(spec.orbit_len, 4218);
        let mats = mu_stabilizer_matrices(&f, mu).unwrap();
        assert_eq!(mats.len(), 12);
        assert_eq!(identify_group(&f, &mats).unwrap(), GroupId::A4);
    }

    #[test]
    fn char3_pair_formula_counts() {
        let f9 = FieldCtx::new(9).unwrap();
        assert!(char3_equivalent_pairs(&f9).unwrap().is_empty());
        let f27 = FieldCtx::new(27).unwrap();
        let pairs = char3_equivalent_pairs(&f27).unwrap();
        assert_eq!(pairs.len(), 3, "(q - 3)/8 pairs when q = 3 mod 4");
        for (a, b) in &pairs {
            assert!(f27.is_square(*a) && f27.is_square(*b));
            assert_ne!(a, b);
        }
        let f7 = FieldCtx::new(7).unwrap();
        assert_eq!(
            char3_equivalent_pairs(&f7).unwrap_err(),
            FamiliesError::NotChar3
        );
    }

    #[test]
    fn char3_family_census_over_q9() {
        let c = cubic(9);
        let census = char3_family_census(&c, DEFAULT_ORBIT_MAX_Q).unwrap();
        assert_eq!(census.orbit_count, 7);
        assert_eq!(census.triple_count, 0);
        assert!(census.pairs.is_empty());
        let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
        for (_, s) in &census.groups {
            *sizes.entry(*s).or_insert(0) += 1;
        }
        assert_eq!(sizes, BTreeMap::from([(360u64, 4u64), (180, 3)]));
        assert_eq!(census.covered_lines, 4 * 360 + 3 * 180);
        let f = c.field();
        assert_eq!(
            char3_family_census(&cubic(7), DEFAULT_ORBIT_MAX_Q).unwrap_err(),
            FamiliesError::NotChar3
        );
        // Non-squares stay alone; fused groups are squares only.
        for (g, _) in &census.groups {
            if g.len() > 1 {
                assert!(g.iter().all(|m| f.is_square(*m)));
            }
        }
    }

    #[test]
    fn coincidence_predicate_matches_known_orders() {
        // q = 11 and 23: -1/3 is 7 and 15, both non-squares.
        let f11 = FieldCtx::new(11).unwrap();
        assert_eq!(lambda_mu_coincidence(&f11), Some(f11.from_int(7)));
        let f23 = FieldCtx::new(23).unwrap();
        assert_eq!(lambda_mu_coincidence(&f23), Some(f23.from_int(15)));
        for q in [5u32, 7, 13, 8, 9, 16, 27] {
            let f = FieldCtx::new(q).unwrap();
            assert_eq!(lambda_mu_coincidence(&f), None, "q={q}");
        }
    }

    #[test]
    fn half_and_minus_half_share_their_cube_class() {
        // -1 is always a cube, so the two predicates agree over odd fields.
        for q in [5u32, 7, 9, 11, 13, 25, 27, 37] {
            let f = FieldCtx::new(q).unwrap();
            if q % 2 == 0 {
                continue;
            }
            if f.p() == 3 {
                // 2 = -1 here; both predicates are about cube classes of
                // -1/2 = 1 and 1/2 = -1, trivially cubes.
                continue;
            }
            let half = f.inv(f.from_int(2)).unwrap();
            assert_eq!(
                f.is_nth_power(half, 3),
                f.is_nth_power(f.neg(half), 3),
                "q={q}"
            );
        }
    }

    #[test]
    fn even_family_lines_are_pairwise_inequivalent() {
        // Over F_8 the six family lines sit in six different orbits, none
        // of them the marked line's.
        let c = cubic(8);
        let f = c.field();
        let mut reps = std::collections::HashSet::new();
        for code in 2..8u32 {
            let mu = f.elem(code).unwrap();
            let l = mu_line(&c, mu).unwrap();
            let orbit = orbit_of_line(&c, &l, false, DEFAULT_ORBIT_MAX_Q).unwrap();
            assert_eq!(orbit.size, 252);
            assert!(reps.insert(orbit.canonical), "distinct orbits");
        }
        let marked = orbit_of_line(&c, &lambda_line(&c), false, DEFAULT_ORBIT_MAX_Q).unwrap();
        assert!(!reps.contains(&marked.canonical));
        assert_eq!(marked.size, 504);
    }
}
