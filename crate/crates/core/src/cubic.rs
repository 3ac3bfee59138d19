//! The twisted cubic in PG(3,q), its osculating planes, and the
//! classification of every line of the space relative to the curve.
//!
//! The curve is taken in the canonical parametrization
//!
//! ```text
//! P(t) = (t^3, t^2, t, 1)  for t in F_q,    P(inf) = (1, 0, 0, 0),
//! ```
//!
//! with osculating plane `(1, -3t, 3t^2, -t^3)` at `P(t)` and `(0,0,0,1)` at
//! `P(inf)`. Lines joining curve points with parameter sum `a1` and product
//! `a2` form the chord family `(a2^2, a1*a2, a1^2-a2, a2, -a1, 1)`; meets of
//! two osculating planes form the axis family
//! `(b2^2, b1*b2, 3*b2, (b1^2-b2)/3, -b1, 1)` (undefined in characteristic 3,
//! where all osculating planes share a single pencil axis instead).
//!
//! [`CubicCtx::classify_line`] sorts any line into exactly one
//! [`LineClassKind`]; [`CubicCtx::class_census`] counts all classes over the
//! whole line set, optionally sharded over worker threads (the counts are
//! sums, so the result is independent of the worker count).

use crate::gfq::{Elem, FieldCtx, GfError};
use crate::pg3::{line_through, plane_contains_point, LineKey, Plane, PlueckerLine, Point};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors for operations that are undefined in some characteristic.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CubicError {
    /// The axis family degenerates in characteristic 3 (the osculating
    /// planes form a pencil; see [`CubicCtx::pencil_axis`]).
    #[error("the axis family is undefined in characteristic 3")]
    Char3Axis,
    /// The null polarity matrix is singular in characteristic 3.
    #[error("the null polarity is undefined in characteristic 3")]
    Char3Polarity,
}

/// A parameter of the curve: an element of F_q or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubicParam {
    Finite(Elem),
    Infinity,
}

/// How a line sits relative to the cubic and its osculating planes.
///
/// Exactly one kind applies to every line. `Generator` denotes the
/// degenerate axis with a repeated plane parameter; as a point set every
/// generator is a tangent line of the curve, so classification reports those
/// lines as `Tangent` and `Generator` never appears in a census. It is kept
/// so axis-family parameters with a repeated root still have a named kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineClassKind {
    /// Meets the curve in two distinct points.
    RealChord,
    /// Meets the curve in one point with contact of order two.
    Tangent,
    /// Chord-family line whose parameter quadratic has no roots (the two
    /// curve points live in the quadratic extension).
    ImaginaryChord,
    /// Meet of two distinct osculating planes (not in characteristic 3).
    RealAxis,
    /// Degenerate axis (repeated plane); same line set as `Tangent`.
    Generator,
    /// Axis-family line whose parameter quadratic has no roots.
    ImaginaryAxis,
    /// Meets the curve once, not a tangent, inside the osculating plane at
    /// the meeting point.
    UnisecantOsc,
    /// Meets the curve once, not a tangent, in no osculating plane.
    UnisecantNonOsc,
    /// Misses the curve, lies in an osculating plane, and is not an axis.
    ExternalInOscPlane,
    /// Misses the curve, lies in no osculating plane, and belongs to
    /// neither the chord nor the axis family. The orbit structure of this
    /// class is what the crate's search machinery measures.
    ExternalGeneric,
    /// The single line shared by all osculating planes in characteristic 3
    /// (equations x0 = x3 = 0).
    Char3PencilAxis,
}

impl LineClassKind {
    /// All kinds, in census/report order.
    pub const ALL: [LineClassKind; 11] = [
        LineClassKind::RealChord,
        LineClassKind::Tangent,
        LineClassKind::ImaginaryChord,
        LineClassKind::RealAxis,
        LineClassKind::Generator,
        LineClassKind::ImaginaryAxis,
        LineClassKind::UnisecantOsc,
        LineClassKind::UnisecantNonOsc,
        LineClassKind::ExternalInOscPlane,
        LineClassKind::ExternalGeneric,
        LineClassKind::Char3PencilAxis,
    ];

    /// Stable machine-readable label (used by report/CSV output).
    pub fn label(self) -> &'static str {
        match self {
            LineClassKind::RealChord => "real_chord",
            LineClassKind::Tangent => "tangent",
            LineClassKind::ImaginaryChord => "imaginary_chord",
            LineClassKind::RealAxis => "real_axis",
            LineClassKind::Generator => "generator",
            LineClassKind::ImaginaryAxis => "imaginary_axis",
            LineClassKind::UnisecantOsc => "unisecant_osc",
            LineClassKind::UnisecantNonOsc => "unisecant_non_osc",
            LineClassKind::ExternalInOscPlane => "external_in_osc_plane",
            LineClassKind::ExternalGeneric => "external_generic",
            LineClassKind::Char3PencilAxis => "char3_pencil_axis",
        }
    }

    fn idx(self) -> usize {
        LineClassKind::ALL
            .iter()
            .position(|k| *k == self)
            .expect("kind is listed in ALL")
    }
}

impl std::fmt::Display for LineClassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A classified line. `witness` carries the family parameters when the kind
/// has them: `(a1, a2)` (sum and product of the two curve parameters) for
/// chord kinds, `(b1, b2)` (sum and product of the two plane parameters) for
/// axis kinds, `(2t, t^2)` for a tangent at `P(t)`. It is `None` for the
/// other kinds and for chords/tangents/axes through the infinite parameter,
/// which fall outside the two parametrized families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineClass {
    pub kind: LineClassKind,
    pub witness: Option<(Elem, Elem)>,
}

/// The twisted cubic with its cached points, osculating planes and tangent
/// keys. Construction cross-checks the coordinate conventions (chord versus
/// two-point join, osculating incidence, pencil axis in characteristic 3),
/// so a successfully built context is internally consistent.
pub struct CubicCtx {
    field: FieldCtx,
    points: Vec<Point>,
    planes: Vec<Plane>,
    tangent_keys: Vec<LineKey>,
    pencil_axis: Option<PlueckerLine>,
}

impl CubicCtx {
    /// Builds the field and the curve context for order `q`.
    pub fn new(q: u32) -> Result<CubicCtx, GfError> {
        Ok(CubicCtx::from_field(FieldCtx::new(q)?))
    }

    /// Builds the curve context over an existing field.
    pub fn from_field(field: FieldCtx) -> CubicCtx {
        let q = field.q() as usize;
        let one = field.one();
        let zero = field.zero();
        let three = field.from_int(3);

        // Index layout: code 0..q for finite parameters, q for infinity.
        let mut points = Vec::with_capacity(q + 1);
        let mut planes = Vec::with_capacity(q + 1);
        for code in 0..q as u32 {
            let t = field.elem(code).expect("code below q");
            let t2 = field.square(t);
            let t3 = field.mul(t2, t);
            points.push(Point::new(&field, [t3, t2, t, one]));
            planes.push(Plane::new(
                &field,
                [
                    one,
                    field.neg(field.mul(three, t)),
                    field.mul(three, t2),
                    field.neg(t3),
                ],
            ));
        }
        points.push(Point::new(&field, [one, zero, zero, zero]));
        planes.push(Plane::new(&field, [zero, zero, zero, one]));

        let mut ctx = CubicCtx {
            field,
            points,
            planes,
            tangent_keys: Vec::new(),
            pencil_axis: None,
        };

        let mut tangent_keys = Vec::with_capacity(q + 1);
        for code in 0..q as u32 {
            let t = ctx.field.elem(code).expect("code below q");
            let tan = ctx.chord_vector(ctx.field.add(t, t), ctx.field.square(t));
            tangent_keys.push(tan.key(&ctx.field));
        }
        // At infinity the tangent is the join of (1,0,0,0) and (0,1,0,0).
        let inf_dir = Point::new(&ctx.field, [zero, one, zero, zero]);
        let tan_inf = line_through(&ctx.field, &ctx.points[q], &inf_dir)
            .expect("distinct points span the infinite tangent");
        tangent_keys.push(tan_inf.key(&ctx.field));
        ctx.tangent_keys = tangent_keys;

        if ctx.field.p() == 3 {
            // All osculating planes share the line x0 = x3 = 0.
            let e1 = Point::new(&ctx.field, [zero, one, zero, zero]);
            let e2 = Point::new(&ctx.field, [zero, zero, one, zero]);
            let axis = line_through(&ctx.field, &e1, &e2).expect("independent points");
            for h in &ctx.planes {
                assert!(
                    crate::pg3::line_in_plane(&ctx.field, &axis, h),
                    "every osculating plane must contain the pencil axis"
                );
            }
            ctx.pencil_axis = Some(axis);
        }

        ctx.self_check();
        ctx
    }

    /// Convention cross-checks, run once at construction.
    fn self_check(&self) {
        let f = &self.field;
        let q = f.q();
        // Each osculating plane touches the curve exactly at its own point.
        for (i, h) in self.planes.iter().enumerate() {
            for (j, p) in self.points.iter().enumerate() {
                assert_eq!(
                    plane_contains_point(f, h, p),
                    i == j,
                    "osculating plane meets the curve only at its own point"
                );
            }
        }
        // Chord family agrees with the two-point join on a few pairs.
        let mut checked = 0;
        'outer: for c1 in 0..q {
            for c2 in (c1 + 1)..q {
                let t1 = f.elem(c1).expect("below q");
                let t2 = f.elem(c2).expect("below q");
                let joined = line_through(
                    f,
                    &self.points[c1 as usize],
                    &self.points[c2 as usize],
                )
                .expect("curve points are distinct");
                let family = self.chord_vector(f.add(t1, t2), f.mul(t1, t2));
                assert_eq!(joined, family, "chord family must match two-point joins");
                checked += 1;
                if checked >= 6 {
                    break 'outer;
                }
            }
        }
        // Tangent at t lies along the derivative direction (3t^2, 2t, 1, 0).
        let t = f.one();
        let two = f.from_int(2);
        let three = f.from_int(3);
        let dir = Point::new(f, [three, two, f.one(), f.zero()]);
        let tan = line_through(f, &self.points[t.code() as usize], &dir)
            .expect("point and direction differ");
        assert_eq!(
            tan.key(f),
            self.tangent_keys[t.code() as usize],
            "tangent key must match the derivative-direction join"
        );
    }

    #[inline]
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    fn param_index(&self, t: CubicParam) -> usize {
        match t {
            CubicParam::Finite(x) => x.code() as usize,
            CubicParam::Infinity => self.field.q() as usize,
        }
    }

    fn param_at(&self, idx: usize) -> CubicParam {
        if idx == self.field.q() as usize {
            CubicParam::Infinity
        } else {
            CubicParam::Finite(self.field.elem(idx as u32).expect("index below q"))
        }
    }

    /// All q+1 parameters in cache order (finite by code, then infinity).
    pub fn parameters(&self) -> impl Iterator<Item = CubicParam> + '_ {
        (0..=self.field.q() as usize).map(move |i| self.param_at(i))
    }

    /// The curve point with parameter `t`.
    pub fn cubic_point(&self, t: CubicParam) -> Point {
        self.points[self.param_index(t)]
    }

    /// All q+1 curve points (finite parameters by code, then infinity).
    pub fn cubic_points(&self) -> &[Point] {
        &self.points
    }

    /// The osculating plane at parameter `t`.
    pub fn osculating_plane(&self, t: CubicParam) -> Plane {
        self.planes[self.param_index(t)]
    }

    /// All q+1 osculating planes, aligned with [`Self::cubic_points`].
    pub fn osculating_planes(&self) -> &[Plane] {
        &self.planes
    }

    /// The tangent line at parameter `t`.
    pub fn tangent_line(&self, t: CubicParam) -> PlueckerLine {
        PlueckerLine::from_key(&self.field, self.tangent_keys[self.param_index(t)])
            .expect("cached tangent keys are canonical")
    }

    /// The line shared by all osculating planes; `Some` exactly in
    /// characteristic 3.
    pub fn pencil_axis(&self) -> Option<&PlueckerLine> {
        self.pencil_axis.as_ref()
    }

    /// The chord-family line with parameter sum `a1` and product `a2`:
    /// `(a2^2, a1*a2, a1^2 - a2, a2, -a1, 1)`.
    pub fn chord_vector(&self, a1: Elem, a2: Elem) -> PlueckerLine {
        let f = &self.field;
        let v = [
            f.square(a2),
            f.mul(a1, a2),
            f.sub(f.square(a1), a2),
            a2,
            f.neg(a1),
            f.one(),
        ];
        PlueckerLine::from_coords(f, v).expect("chord vectors satisfy the quadric relation")
    }

    /// The axis-family line with plane-parameter sum `b1` and product `b2`:
    /// `(b2^2, b1*b2, 3*b2, (b1^2 - b2)/3, -b1, 1)`. Errors in
    /// characteristic 3.
    pub fn axis_vector(&self, b1: Elem, b2: Elem) -> Result<PlueckerLine, CubicError> {
        let f = &self.field;
        if f.p() == 3 {
            return Err(CubicError::Char3Axis);
        }
        let three = f.from_int(3);
        let third = f.inv(three).expect("3 is invertible away from characteristic 3");
        let v = [
            f.square(b2),
            f.mul(b1, b2),
            f.mul(three, b2),
            f.mul(f.sub(f.square(b1), b2), third),
            f.neg(b1),
            f.one(),
        ];
        Ok(PlueckerLine::from_coords(f, v).expect("axis vectors satisfy the quadric relation"))
    }

    /// The null polarity on points: `(x0,x1,x2,x3) -> (x3, -3x2, 3x1, -x0)`
    /// as a plane. Errors in characteristic 3, where the matrix is singular.
    pub fn null_polarity_point(&self, p: &Point) -> Result<Plane, CubicError> {
        let f = &self.field;
        if f.p() == 3 {
            return Err(CubicError::Char3Polarity);
        }
        let three = f.from_int(3);
        let x = p.coords();
        Ok(Plane::new(
            f,
            [
                x[3],
                f.neg(f.mul(three, x[2])),
                f.mul(three, x[1]),
                f.neg(x[0]),
            ],
        ))
    }

    /// The null polarity on lines: the meet of the polar planes of two
    /// spanning points. Involutive.
    pub fn null_polarity_line(&self, l: &PlueckerLine) -> Result<PlueckerLine, CubicError> {
        let f = &self.field;
        let (a, b) = l.spanning_points(f);
        let ha = self.null_polarity_point(&a)?;
        let hb = self.null_polarity_point(&b)?;
        Ok(crate::pg3::plane_meet(f, &ha, &hb)
            .expect("polar planes of independent points are distinct"))
    }

    /// Solves `l` against the chord family: `Some((a1, a2))` iff `l` equals
    /// the family line for those parameters.
    fn solve_chord_family(&self, l: &PlueckerLine) -> Option<(Elem, Elem)> {
        let f = &self.field;
        let v = l.coords();
        if v[5].code() == 0 {
            return None;
        }
        let s = f.inv(v[5]).expect("nonzero slot");
        let m: Vec<Elem> = v.iter().map(|e| f.mul(*e, s)).collect();
        let a1 = f.neg(m[4]);
        let a2 = m[3];
        let ok = m[0] == f.square(a2)
            && m[1] == f.mul(a1, a2)
            && m[2] == f.sub(f.square(a1), a2);
        ok.then_some((a1, a2))
    }

    /// Solves `l` against the axis family (callers guard characteristic 3).
    fn solve_axis_family(&self, l: &PlueckerLine) -> Option<(Elem, Elem)> {
        let f = &self.field;
        debug_assert_ne!(f.p(), 3);
        let v = l.coords();
        if v[5].code() == 0 {
            return None;
        }
        let s = f.inv(v[5]).expect("nonzero slot");
        let m: Vec<Elem> = v.iter().map(|e| f.mul(*e, s)).collect();
        let three = f.from_int(3);
        let third = f.inv(three).expect("away from characteristic 3");
        let b1 = f.neg(m[4]);
        let b2 = f.mul(m[2], third);
        let ok = m[0] == f.square(b2)
            && m[1] == f.mul(b1, b2)
            && m[3] == f.mul(f.sub(f.square(b1), b2), third);
        ok.then_some((b1, b2))
    }

    /// Assigns the unique [`LineClassKind`] of `l`, with family parameters
    /// as witness where applicable.
    pub fn classify_line(&self, l: &PlueckerLine) -> LineClass {
        let f = &self.field;
        let q = f.q() as usize;

        // Parameters of the curve points on l (at most two).
        let mut meets: [usize; 2] = [0; 2];
        let mut meet_count = 0usize;
        for (i, p) in self.points.iter().enumerate() {
            if l.contains_point(f, p) {
                assert!(meet_count < 2, "a line meets the cubic in at most 2 points");
                meets[meet_count] = i;
                meet_count += 1;
            }
        }

        match meet_count {
            2 => {
                let witness = match (self.param_at(meets[0]), self.param_at(meets[1])) {
                    (CubicParam::Finite(t1), CubicParam::Finite(t2)) => {
                        Some((f.add(t1, t2), f.mul(t1, t2)))
                    }
                    _ => None,
                };
                LineClass {
                    kind: LineClassKind::RealChord,
                    witness,
                }
            }
            1 => {
                let idx = meets[0];
                if l.key(f) == self.tangent_keys[idx] {
                    let witness = match self.param_at(idx) {
                        CubicParam::Finite(t) => Some((f.add(t, t), f.square(t))),
                        CubicParam::Infinity => None,
                    };
                    return LineClass {
                        kind: LineClassKind::Tangent,
                        witness,
                    };
                }
                // A unisecant through P(t) can only lie in the osculating
                // plane at t itself (other planes avoid P(t)).
                let (a, b) = l.spanning_points(f);
                let h = &self.planes[idx];
                let kind = if plane_contains_point(f, h, &a) && plane_contains_point(f, h, &b) {
                    LineClassKind::UnisecantOsc
                } else {
                    LineClassKind::UnisecantNonOsc
                };
                LineClass {
                    kind,
                    witness: None,
                }
            }
            _ => {
                // External line. Chord-family membership first: at zero
                // meets a family hit must have an irreducible quadratic.
                if let Some((a1, a2)) = self.solve_chord_family(l) {
                    debug_assert_eq!(
                        f.quadratic_root_count(a1, a2),
                        0,
                        "external chord-family lines have rootless parameters"
                    );
                    return LineClass {
                        kind: LineClassKind::ImaginaryChord,
                        witness: Some((a1, a2)),
                    };
                }

                let (a, b) = l.spanning_points(f);
                let mut containing: [usize; 2] = [0; 2];
                let mut n_planes = 0usize;
                for (i, h) in self.planes.iter().enumerate() {
                    if plane_contains_point(f, h, &a) && plane_contains_point(f, h, &b) {
                        if n_planes < 2 {
                            containing[n_planes] = i;
                        }
                        n_planes += 1;
                    }
                }

                if f.p() == 3 {
                    // Two distinct osculating planes meet exactly in the
                    // pencil axis, so a non-axis line lies in at most one.
                    if n_planes == q + 1 {
                        return LineClass {
                            kind: LineClassKind::Char3PencilAxis,
                            witness: None,
                        };
                    }
                    assert!(n_planes <= 1, "only the pencil axis lies in two planes");
                    let kind = if n_planes == 1 {
                        LineClassKind::ExternalInOscPlane
                    } else {
                        LineClassKind::ExternalGeneric
                    };
                    return LineClass {
                        kind,
                        witness: None,
                    };
                }

                match n_planes {
                    2 => {
                        let witness = match (
                            self.param_at(containing[0]),
                            self.param_at(containing[1]),
                        ) {
                            (CubicParam::Finite(s1), CubicParam::Finite(s2)) => {
                                Some((f.add(s1, s2), f.mul(s1, s2)))
                            }
                            _ => None,
                        };
                        LineClass {
                            kind: LineClassKind::RealAxis,
                            witness,
                        }
                    }
                    1 => LineClass {
                        kind: LineClassKind::ExternalInOscPlane,
                        witness: None,
                    },
                    0 => {
                        if let Some((b1, b2)) = self.solve_axis_family(l) {
                            debug_assert_eq!(
                                f.quadratic_root_count(b1, b2),
                                0,
                                "plane-free axis-family lines have rootless parameters"
                            );
                            LineClass {
                                kind: LineClassKind::ImaginaryAxis,
                                witness: Some((b1, b2)),
                            }
                        } else {
                            LineClass {
                                kind: LineClassKind::ExternalGeneric,
                                witness: None,
                            }
                        }
                    }
                    _ => unreachable!("three osculating planes never share a line away from characteristic 3"),
                }
            }
        }
    }

    /// Counts every class over all lines of PG(3,q). `workers` shards the
    /// line enumeration; every kind (including empty ones) is present in the
    /// result, and the counts do not depend on `workers`.
    pub fn class_census(&self, workers: usize) -> BTreeMap<LineClassKind, u64> {
        let total = crate::pg3::line_count(self.field.q());
        let workers = workers.max(1).min(total.max(1) as usize);
        let mut counts = [0u64; 11];

        if workers == 1 {
            for i in 0..total {
                let l = crate::pg3::line_by_index(&self.field, i);
                counts[self.classify_line(&l).kind.idx()] += 1;
            }
        } else {
            let chunk = total.div_ceil(workers as u64);
            let partials = std::thread::scope(|scope| {
                let mut handles = Vec::with_capacity(workers);
                for w in 0..workers as u64 {
                    let start = w * chunk;
                    let end = (start + chunk).min(total);
                    handles.push(scope.spawn(move || {
                        let mut local = [0u64; 11];
                        for i in start..end {
                            let l = crate::pg3::line_by_index(&self.field, i);
                            local[self.classify_line(&l).kind.idx()] += 1;
                        }
                        local
                    }));
                }
                handles
                    .into_iter()
                    .map(|h| h.join().expect("census worker panicked"))
                    .collect::<Vec<_>>()
            });
            for local in partials {
                for (acc, x) in counts.iter_mut().zip(local) {
                    *acc += x;
                }
            }
        }

        LineClassKind::ALL
            .iter()
            .map(|k| (*k, counts[k.idx()]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pg3::all_lines;

    fn cubic(q: u32) -> CubicCtx {
        CubicCtx::new(q).expect("valid field order")
    }

    fn fin(f: &FieldCtx, v: i64) -> CubicParam {
        CubicParam::Finite(f.from_int(v))
    }

    fn pt(f: &FieldCtx, v: [i64; 4]) -> Point {
        Point::new(f, v.map(|c| f.from_int(c)))
    }

    /// external line through (1,0,0,1) and (0,0,1,0)
    fn lambda(c: &CubicCtx) -> PlueckerLine {
        let f = c.field();
        line_through(f, &pt(f, [1, 0, 0, 1]), &pt(f, [0, 0, 1, 0])).unwrap()
    }

    /// external line through (0,mu,0,1) and (1,0,1,0)
    fn mu_line(c: &CubicCtx, mu: Elem) -> PlueckerLine {
        let f = c.field();
        let a = Point::new(f, [f.zero(), mu, f.zero(), f.one()]);
        let b = pt(f, [1, 0, 1, 0]);
        line_through(f, &a, &b).unwrap()
    }

    #[test]
    fn curve_points_match_the_parametrization() {
        let c = cubic(5);
        let f = c.field();
        assert_eq!(c.cubic_point(fin(f, 0)), pt(f, [0, 0, 0, 1]));
        assert_eq!(c.cubic_point(CubicParam::Infinity), pt(f, [1, 0, 0, 0]));
        assert_eq!(c.cubic_point(fin(f, 2)), pt(f, [3, 4, 2, 1]));
    }

    #[test]
    fn osculating_planes_match_the_parametrization() {
        let c = cubic(7);
        let f = c.field();
        assert_eq!(
            c.osculating_plane(CubicParam::Infinity),
            Plane::new(f, [f.zero(), f.zero(), f.zero(), f.one()])
        );
        assert_eq!(
            c.osculating_plane(fin(f, 0)),
            Plane::new(f, [f.one(), f.zero(), f.zero(), f.zero()])
        );
        let h = c.osculating_plane(fin(f, 1));
        assert_eq!(h, Plane::new(f, [1, 4, 3, 6].map(|v| f.from_int(v))));
    }

    #[test]
    fn no_four_curve_points_are_coplanar() {
        for q in [5u32, 7, 8, 9, 11, 13, 16] {
            let c = cubic(q);
            let f = c.field();
            let pts = c.cubic_points();
            let n = pts.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        // The plane through three curve points.
                        let l = line_through(f, &pts[i], &pts[j]).unwrap();
                        let third = pts[k];
                        assert!(!l.contains_point(f, &third), "three curve points are never collinear");
                        let h = plane_through(f, &pts[i], &pts[j], &pts[k]);
                        for (m, p) in pts.iter().enumerate() {
                            if m == i || m == j || m == k {
                                continue;
                            }
                            assert!(
                                !plane_contains_point(f, &h, p),
                                "no four curve points are coplanar (q={q})"
                            );
                        }
                    }
                }
            }
        }
    }

    /// The plane spanned by three non-collinear points (test helper).
    fn plane_through(f: &FieldCtx, a: &Point, b: &Point, c: &Point) -> Plane {
        // Solve the 3x4 system [a; b; c] x^T = 0 by brute force over the
        // plane coordinates (test-only; q is small).
        for h in crate::pg3::all_points(f) {
            let hh = Plane::new(f, *h.coords());
            if plane_contains_point(f, &hh, a)
                && plane_contains_point(f, &hh, b)
                && plane_contains_point(f, &hh, c)
            {
                return hh;
            }
        }
        unreachable!("three points always span at least one plane");
    }

    #[test]
    fn chord_vector_examples() {
        let c = cubic(5);
        let f = c.field();
        // a1 = a2 = 0 is the tangent at P(0).
        let tan0 = c.chord_vector(f.zero(), f.zero());
        let mut v = [f.zero(); 6];
        v[5] = f.one();
        assert_eq!(tan0, PlueckerLine::from_coords(f, v).unwrap());
        assert_eq!(tan0, c.tangent_line(fin(f, 0)));
        // a1 = 1, a2 = 0 is the join of P(0) and P(1).
        let join = line_through(f, &c.cubic_point(fin(f, 0)), &c.cubic_point(fin(f, 1))).unwrap();
        assert_eq!(c.chord_vector(f.one(), f.zero()), join);
        // Its raw vector is proportional to (0,0,1,0,-1,1).
        let raw = PlueckerLine::from_coords(
            f,
            [f.zero(), f.zero(), f.one(), f.zero(), f.from_int(-1), f.one()],
        )
        .unwrap();
        assert_eq!(join, raw);
    }

    #[test]
    fn axis_vector_examples() {
        let c = cubic(11);
        let f = c.field();
        // b1 = 0, b2 = 1/3 gives the mu-family line with mu = 1/9.
        let third = f.inv(f.from_int(3)).unwrap();
        let ninth = f.inv(f.from_int(9)).unwrap();
        let ax = c.axis_vector(f.zero(), third).unwrap();
        assert_eq!(ax, mu_line(&c, ninth));
        // Characteristic 3 has no axis family.
        let c9 = cubic(9);
        let f9 = c9.field();
        assert_eq!(
            c9.axis_vector(f9.zero(), f9.one()).unwrap_err(),
            CubicError::Char3Axis
        );
    }

    #[test]
    fn axis_vector_is_the_meet_of_two_osculating_planes() {
        let c = cubic(7);
        let f = c.field();
        for c1 in 0..7u32 {
            for c2 in (c1 + 1)..7u32 {
                let t1 = f.elem(c1).unwrap();
                let t2 = f.elem(c2).unwrap();
                let meet = crate::pg3::plane_meet(
                    f,
                    &c.osculating_plane(CubicParam::Finite(t1)),
                    &c.osculating_plane(CubicParam::Finite(t2)),
                )
                .unwrap();
                let fam = c.axis_vector(f.add(t1, t2), f.mul(t1, t2)).unwrap();
                assert_eq!(meet, fam, "axis family must match plane meets");
            }
        }
    }

    #[test]
    fn null_polarity_swaps_curve_and_planes_and_chords_and_axes() {
        let c = cubic(7);
        let f = c.field();
        // Point polarity sends P(t) to the osculating plane at t.
        for t in c.parameters() {
            let img = c.null_polarity_point(&c.cubic_point(t)).unwrap();
            assert_eq!(img, c.osculating_plane(t));
        }
        // Line polarity sends the chord with parameters (a1,a2) to the axis
        // with the same parameters — all pairs.
        for a1c in 0..7u32 {
            for a2c in 0..7u32 {
                let a1 = f.elem(a1c).unwrap();
                let a2 = f.elem(a2c).unwrap();
                let img = c.null_polarity_line(&c.chord_vector(a1, a2)).unwrap();
                assert_eq!(img, c.axis_vector(a1, a2).unwrap());
            }
        }
    }

    #[test]
    fn null_polarity_is_an_involution_on_lines() {
        let c = cubic(7);
        let f = c.field();
        for (i, l) in all_lines(f).enumerate() {
            if i % 11 != 0 {
                continue; // deterministic sample
            }
            let img = c.null_polarity_line(&l).unwrap();
            assert_eq!(c.null_polarity_line(&img).unwrap(), l);
        }
    }

    #[test]
    fn null_polarity_errors_in_characteristic_3() {
        let c = cubic(9);
        let f = c.field();
        let p = pt(f, [1, 0, 0, 0]);
        assert_eq!(
            c.null_polarity_point(&p).unwrap_err(),
            CubicError::Char3Polarity
        );
    }

    #[test]
    fn classify_named_lines() {
        // The (1,0,0,1)-(0,0,1,0) line misses the curve and every plane
        // family away from characteristic 3...
        let c7 = cubic(7);
        assert_eq!(
            c7.classify_line(&lambda(&c7)).kind,
            LineClassKind::ExternalGeneric
        );
        let c8 = cubic(8);
        assert_eq!(
            c8.classify_line(&lambda(&c8)).kind,
            LineClassKind::ExternalGeneric
        );
        // ...but lies in the osculating plane at t=1 in characteristic 3.
        let c9 = cubic(9);
        assert_eq!(
            c9.classify_line(&lambda(&c9)).kind,
            LineClassKind::ExternalInOscPlane
        );

        // mu = 1/9 is the axis with parameters (0, 1/3): imaginary for
        // q = 11 (x^2 + 1/3 rootless), real for q = 7.
        let c11 = cubic(11);
        let f11 = c11.field();
        let ninth11 = f11.inv(f11.from_int(9)).unwrap();
        let cls = c11.classify_line(&mu_line(&c11, ninth11));
        assert_eq!(cls.kind, LineClassKind::ImaginaryAxis);
        let third11 = f11.inv(f11.from_int(3)).unwrap();
        assert_eq!(cls.witness, Some((f11.zero(), third11)));

        let f7 = c7.field();
        let ninth7 = f7.inv(f7.from_int(9)).unwrap();
        assert_eq!(
            c7.classify_line(&mu_line(&c7, ninth7)).kind,
            LineClassKind::RealAxis
        );

        // mu = 0 meets the curve once outside its osculating plane;
        // mu = 1 is tangent for even q, a real chord for odd q.
        assert_eq!(
            c7.classify_line(&mu_line(&c7, f7.zero())).kind,
            LineClassKind::UnisecantNonOsc
        );
        assert_eq!(
            c7.classify_line(&mu_line(&c7, f7.one())).kind,
            LineClassKind::RealChord
        );
        let f8 = c8.field();
        assert_eq!(
            c8.classify_line(&mu_line(&c8, f8.one())).kind,
            LineClassKind::Tangent
        );

        // The pencil axis in characteristic 3.
        let axis = *c9.pencil_axis().unwrap();
        assert_eq!(
            c9.classify_line(&axis).kind,
            LineClassKind::Char3PencilAxis
        );
    }

    #[test]
    fn tangents_classify_as_tangents_with_their_parameters() {
        for q in [5u32, 8, 9] {
            let c = cubic(q);
            let f = c.field();
            for t in c.parameters() {
                let cls = c.classify_line(&c.tangent_line(t));
                assert_eq!(cls.kind, LineClassKind::Tangent);
                match t {
                    CubicParam::Finite(x) => {
                        assert_eq!(cls.witness, Some((f.add(x, x), f.square(x))));
                    }
                    CubicParam::Infinity => assert_eq!(cls.witness, None),
                }
            }
        }
    }

    fn expected_sizes(q: u64, char3: bool) -> BTreeMap<LineClassKind, u64> {
        let mut m: BTreeMap<LineClassKind, u64> = LineClassKind::ALL
            .iter()
            .map(|k| (*k, 0u64))
            .collect();
        m.insert(LineClassKind::Tangent, q + 1);
        m.insert(LineClassKind::RealChord, q * (q + 1) / 2);
        m.insert(LineClassKind::ImaginaryChord, q * (q - 1) / 2);
        m.insert(LineClassKind::UnisecantOsc, q * (q + 1));
        m.insert(LineClassKind::UnisecantNonOsc, q * q * q - q);
        m.insert(LineClassKind::ExternalGeneric, (q * q - q) * (q * q - 1));
        if char3 {
            m.insert(LineClassKind::Char3PencilAxis, 1);
            m.insert(LineClassKind::ExternalInOscPlane, (q + 1) * (q * q - 1));
        } else {
            m.insert(LineClassKind::RealAxis, q * (q + 1) / 2);
            m.insert(LineClassKind::ImaginaryAxis, q * (q - 1) / 2);
            m.insert(LineClassKind::ExternalInOscPlane, q * q * q - q);
        }
        m
    }

    #[test]
    fn censuses_match_the_closed_forms() {
        for q in [5u32, 7, 8, 9, 11] {
            let c = cubic(q);
            let census = c.class_census(1);
            let expected = expected_sizes(q as u64, q % 3 == 0);
            assert_eq!(census, expected, "class census at q={q}");
            let total: u64 = census.values().sum();
            assert_eq!(total, crate::pg3::line_count(q));
        }
    }

    #[test]
    fn census_is_worker_count_independent() {
        let c = cubic(7);
        let one = c.class_census(1);
        for w in [2usize, 3, 5, 16] {
            assert_eq!(c.class_census(w), one);
        }
    }

    #[test]
    fn chord_family_with_two_roots_is_exactly_the_finite_real_chords() {
        for q in [5u32, 7, 8, 9] {
            let c = cubic(q);
            let f = c.field();
            let mut family_keys = std::collections::HashSet::new();
            for a1c in 0..q {
                for a2c in 0..q {
                    let a1 = f.elem(a1c).unwrap();
                    let a2 = f.elem(a2c).unwrap();
                    if f.quadratic_root_count(a1, a2) == 2 {
                        family_keys.insert(c.chord_vector(a1, a2).key(f));
                    }
                }
            }
            let mut finite_chords = std::collections::HashSet::new();
            let mut through_infinity = 0u64;
            for l in all_lines(f) {
                let cls = c.classify_line(&l);
                if cls.kind == LineClassKind::RealChord {
                    match cls.witness {
                        Some(_) => {
                            finite_chords.insert(l.key(f));
                        }
                        None => through_infinity += 1,
                    }
                }
            }
            assert_eq!(family_keys, finite_chords, "q={q}");
            // Chords through the infinite point: one per finite parameter.
            assert_eq!(through_infinity, u64::from(q), "q={q}");
        }
    }

    #[test]
    fn witnesses_reproduce_their_lines() {
        let c = cubic(7);
        let f = c.field();
        for l in all_lines(f) {
            let cls = c.classify_line(&l);
            if let Some((x, y)) = cls.witness {
                let rebuilt = match cls.kind {
                    LineClassKind::RealChord
                    | LineClassKind::Tangent
                    | LineClassKind::ImaginaryChord => c.chord_vector(x, y),
                    LineClassKind::RealAxis | LineClassKind::ImaginaryAxis => {
                        c.axis_vector(x, y).unwrap()
                    }
                    _ => panic!("witness on a kind without a family"),
                };
                assert_eq!(rebuilt, l);
            }
        }
    }

    #[test]
    fn external_generic_set_is_closed_under_the_null_polarity() {
        for q in [5u32, 7] {
            let c = cubic(q);
            let f = c.field();
            let mut class_keys = std::collections::HashSet::new();
            for l in all_lines(f) {
                if c.classify_line(&l).kind == LineClassKind::ExternalGeneric {
                    class_keys.insert(l.key(f));
                }
            }
            for key in &class_keys {
                let l = PlueckerLine::from_key(f, *key).unwrap();
                let img = c.null_polarity_line(&l).unwrap();
                assert!(
                    class_keys.contains(&img.key(f)),
                    "polarity must preserve the class (q={q})"
                );
            }
        }
    }
}
