//! Points, planes and Plücker line coordinates in PG(3,q).
//!
//! Homogeneous 4-tuples are kept in a canonical form with the first nonzero
//! coordinate scaled to 1, so tuple equality is projective equality. A line
//! is stored as the 6-tuple
//!
//! ```text
//! (p01, p02, p03, p12, p31, p23),   pij = xi*yj - xj*yi,  p31 = x3*y1 - x1*y3
//! ```
//!
//! for any two spanning points x, y; the tuple is normalized the same way and
//! satisfies the quadric relation `p01*p23 + p02*p31 + p03*p12 = 0`, which is
//! asserted on every construction. Note the fifth slot is p31 (not p13): this
//! index order keeps the chord/axis coordinate vectors of the twisted cubic
//! in their familiar polynomial shape, and the `cubic` module cross-checks it
//! at context build time.
//!
//! [`LineKey`] packs a normalized 6-tuple into a single integer (six base-q
//! digits, leftmost slot most significant), giving a total order on lines:
//! key order is exactly lexicographic order on normalized tuples. Orbit code
//! uses the smallest key of an orbit as its canonical representative.

use crate::gfq::{Elem, FieldCtx};
use thiserror::Error;

/// Errors from line construction and key decoding.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum Pg3Error {
    /// `line_through` needs two distinct points.
    #[error("the two points coincide and span no line")]
    IdenticalPoints,
    /// `plane_meet` needs two distinct planes.
    #[error("the two planes coincide and meet in no line")]
    IdenticalPlanes,
    /// The 6-tuple or key does not describe a (normalized) line.
    #[error("coordinates do not satisfy the line conditions")]
    NotALine,
}

/// A point of PG(3,q), normalized so its first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Point([Elem; 4]);

/// A plane of PG(3,q) (dual coordinates), normalized like a point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Plane([Elem; 4]);

/// A line of PG(3,q) in normalized Plücker coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PlueckerLine([Elem; 6]);

/// A line's packed integer key; see the module docs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LineKey(pub u64);

fn normalize4(ctx: &FieldCtx, mut v: [Elem; 4]) -> [Elem; 4] {
    let lead = v.iter().find(|e| e.code() != 0).copied();
    let lead = lead.expect("projective 4-tuples must be nonzero");
    if lead != ctx.one() {
        let s = ctx.inv(lead).expect("leading coordinate is nonzero");
        for e in v.iter_mut() {
            *e = ctx.mul(*e, s);
        }
    }
    v
}

impl Point {
    /// Normalizes the homogeneous tuple; panics on the zero tuple.
    pub fn new(ctx: &FieldCtx, coords: [Elem; 4]) -> Point {
        Point(normalize4(ctx, coords))
    }

    #[inline]
    pub fn coords(&self) -> &[Elem; 4] {
        &self.0
    }
}

impl Plane {
    /// Normalizes the dual tuple; panics on the zero tuple.
    pub fn new(ctx: &FieldCtx, coords: [Elem; 4]) -> Plane {
        Plane(normalize4(ctx, coords))
    }

    #[inline]
    pub fn coords(&self) -> &[Elem; 4] {
        &self.0
    }
}

/// Whether the point lies on the plane.
#[inline]
pub fn plane_contains_point(ctx: &FieldCtx, h: &Plane, p: &Point) -> bool {
    let mut acc = ctx.zero();
    for i in 0..4 {
        acc = ctx.add(acc, ctx.mul(h.0[i], p.0[i]));
    }
    acc == ctx.zero()
}

impl PlueckerLine {
    /// Builds a line from raw 6-tuple coordinates, normalizing and checking
    /// the quadric relation.
    pub fn from_coords(ctx: &FieldCtx, v: [Elem; 6]) -> Result<PlueckerLine, Pg3Error> {
        if v.iter().all(|e| e.code() == 0) {
            return Err(Pg3Error::NotALine);
        }
        let mut w = v;
        let lead = w.iter().find(|e| e.code() != 0).copied().expect("nonzero");
        if lead != ctx.one() {
            let s = ctx.inv(lead).expect("leading coordinate is nonzero");
            for e in w.iter_mut() {
                *e = ctx.mul(*e, s);
            }
        }
        let line = PlueckerLine(w);
        if !line.satisfies_quadric(ctx) {
            return Err(Pg3Error::NotALine);
        }
        Ok(line)
    }

    #[inline]
    pub fn coords(&self) -> &[Elem; 6] {
        &self.0
    }

    /// p01*p23 + p02*p31 + p03*p12 = 0 — true for every actual line.
    #[inline]
    pub fn satisfies_quadric(&self, ctx: &FieldCtx) -> bool {
        let v = &self.0;
        let s = ctx.add(
            ctx.add(ctx.mul(v[0], v[5]), ctx.mul(v[1], v[4])),
            ctx.mul(v[2], v[3]),
        );
        s == ctx.zero()
    }

    /// The packed integer key of this (normalized) line.
    #[inline]
    pub fn key(&self, ctx: &FieldCtx) -> LineKey {
        let q = u64::from(ctx.q());
        let mut k = 0u64;
        for e in self.0 {
            k = k * q + u64::from(e.code());
        }
        LineKey(k)
    }

    /// Decodes a key back into a line, rejecting keys that are not the
    /// canonical key of any line.
    pub fn from_key(ctx: &FieldCtx, key: LineKey) -> Result<PlueckerLine, Pg3Error> {
        let q = u64::from(ctx.q());
        let mut k = key.0;
        let mut v = [ctx.zero(); 6];
        for i in (0..6).rev() {
            let d = (k % q) as u32;
            k /= q;
            v[i] = ctx.elem(d).ok_or(Pg3Error::NotALine)?;
        }
        if k != 0 {
            return Err(Pg3Error::NotALine);
        }
        let line = PlueckerLine::from_coords(ctx, v)?;
        // Normalization must be a no-op, otherwise the key was non-canonical.
        if line.0 != v {
            return Err(Pg3Error::NotALine);
        }
        Ok(line)
    }

    /// Two independent points spanning this line, extracted from the nonzero
    /// columns of the antisymmetric Plücker matrix. Deterministic.
    pub fn spanning_points(&self, ctx: &FieldCtx) -> (Point, Point) {
        let m = self.matrix(ctx);
        let mut first: Option<[Elem; 4]> = None;
        for j in 0..4 {
            let col = [m[0][j], m[1][j], m[2][j], m[3][j]];
            if col.iter().all(|e| e.code() == 0) {
                continue;
            }
            match first {
                None => first = Some(col),
                Some(a) => {
                    if !proportional4(ctx, &a, &col) {
                        return (Point::new(ctx, a), Point::new(ctx, col));
                    }
                }
            }
        }
        unreachable!("a rank-2 Plücker matrix has two independent columns");
    }

    /// The q+1 points of this line; the two spanning points come first
    /// (in the order `spanning_points` yields them), then the rest.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<Point> {
        let (a, b) = self.spanning_points(ctx);
        let mut out = Vec::with_capacity(ctx.q() as usize + 1);
        out.push(a);
        for alpha in ctx.elements() {
            let mut v = [ctx.zero(); 4];
            for i in 0..4 {
                v[i] = ctx.add(b.0[i], ctx.mul(alpha, a.0[i]));
            }
            out.push(Point::new(ctx, v));
        }
        out
    }

    /// Whether the point lies on this line (four 3x3 minor conditions of the
    /// stacked 3x4 matrix [x; y; z] written in Plücker coordinates).
    pub fn contains_point(&self, ctx: &FieldCtx, z: &Point) -> bool {
        let v = &self.0; // (p01, p02, p03, p12, p31, p23); p13 = -v[4]
        let z = &z.0;
        // columns {0,1,2}: z0*p12 - z1*p02 + z2*p01
        let m1 = ctx.add(
            ctx.sub(ctx.mul(z[0], v[3]), ctx.mul(z[1], v[1])),
            ctx.mul(z[2], v[0]),
        );
        if m1 != ctx.zero() {
            return false;
        }
        // columns {0,1,3}: z0*p13 - z1*p03 + z3*p01 = -z0*p31 - z1*p03 + z3*p01
        let m2 = ctx.add(
            ctx.sub(ctx.neg(ctx.mul(z[0], v[4])), ctx.mul(z[1], v[2])),
            ctx.mul(z[3], v[0]),
        );
        if m2 != ctx.zero() {
            return false;
        }
        // columns {0,2,3}: z0*p23 - z2*p03 + z3*p02
        let m3 = ctx.add(
            ctx.sub(ctx.mul(z[0], v[5]), ctx.mul(z[2], v[2])),
            ctx.mul(z[3], v[1]),
        );
        if m3 != ctx.zero() {
            return false;
        }
        // columns {1,2,3}: z1*p23 - z2*p13 + z3*p12 = z1*p23 + z2*p31 + z3*p12
        let m4 = ctx.add(
            ctx.add(ctx.mul(z[1], v[5]), ctx.mul(z[2], v[4])),
            ctx.mul(z[3], v[3]),
        );
        m4 == ctx.zero()
    }

    /// The full antisymmetric matrix of the line.
    fn matrix(&self, ctx: &FieldCtx) -> [[Elem; 4]; 4] {
        let v = &self.0;
        let z = ctx.zero();
        let p01 = v[0];
        let p02 = v[1];
        let p03 = v[2];
        let p12 = v[3];
        let p13 = ctx.neg(v[4]); // stored slot is p31
        let p23 = v[5];
        [
            [z, p01, p02, p03],
            [ctx.neg(p01), z, p12, p13],
            [ctx.neg(p02), ctx.neg(p12), z, p23],
            [ctx.neg(p03), ctx.neg(p13), ctx.neg(p23), z],
        ]
    }
}

fn proportional4(ctx: &FieldCtx, a: &[Elem; 4], b: &[Elem; 4]) -> bool {
    // a is nonzero; b proportional to a iff all 2x2 minors vanish.
    for i in 0..4 {
        for j in (i + 1)..4 {
            if ctx.sub(ctx.mul(a[i], b[j]), ctx.mul(a[j], b[i])) != ctx.zero() {
                return false;
            }
        }
    }
    true
}

/// The line through two distinct points.
pub fn line_through(ctx: &FieldCtx, x: &Point, y: &Point) -> Result<PlueckerLine, Pg3Error> {
    if x == y {
        return Err(Pg3Error::IdenticalPoints);
    }
    let (x, y) = (&x.0, &y.0);
    let pij = |i: usize, j: usize| ctx.sub(ctx.mul(x[i], y[j]), ctx.mul(x[j], y[i]));
    let v = [
        pij(0, 1),
        pij(0, 2),
        pij(0, 3),
        pij(1, 2),
        pij(3, 1),
        pij(2, 3),
    ];
    let line = PlueckerLine::from_coords(ctx, v)?;
    assert!(
        line.satisfies_quadric(ctx),
        "constructed line must satisfy the quadric relation"
    );
    Ok(line)
}

/// Whether the line lies inside the plane.
pub fn line_in_plane(ctx: &FieldCtx, l: &PlueckerLine, h: &Plane) -> bool {
    let (a, b) = l.spanning_points(ctx);
    plane_contains_point(ctx, h, &a) && plane_contains_point(ctx, h, &b)
}

/// The line in which two distinct planes meet (the kernel of the stacked
/// 2x4 system, spanned by two explicit solutions).
pub fn plane_meet(ctx: &FieldCtx, h1: &Plane, h2: &Plane) -> Result<PlueckerLine, Pg3Error> {
    if h1 == h2 {
        return Err(Pg3Error::IdenticalPlanes);
    }
    // Gaussian elimination on the 2x4 matrix [h1; h2].
    let mut rows = [h1.0, h2.0];
    let mut pivots: Vec<usize> = Vec::with_capacity(2);
    let mut r = 0usize;
    for col in 0..4 {
        let mut pivot_row = None;
        for i in r..2 {
            if rows[i][col].code() != 0 {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(i) = pivot_row else { continue };
        rows.swap(r, i);
        let s = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        for c in 0..4 {
            rows[r][c] = ctx.mul(rows[r][c], s);
        }
        let other = 1 - r;
        if rows[other][col].code() != 0 {
            let f = rows[other][col];
            for c in 0..4 {
                rows[other][c] = ctx.sub(rows[other][c], ctx.mul(f, rows[r][c]));
            }
        }
        pivots.push(col);
        r += 1;
        if r == 2 {
            break;
        }
    }
    debug_assert_eq!(r, 2, "distinct planes give a rank-2 system");

    // Two basis solutions, one per free column.
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    debug_assert_eq!(free.len(), 2);
    let mut basis: Vec<[Elem; 4]> = Vec::with_capacity(2);
    for &fc in &free {
        let mut sol = [ctx.zero(); 4];
        sol[fc] = ctx.one();
        for (ri, &pc) in pivots.iter().enumerate() {
            sol[pc] = ctx.neg(rows[ri][fc]);
        }
        basis.push(sol);
    }
    let a = Point::new(ctx, basis[0]);
    let b = Point::new(ctx, basis[1]);
    line_through(ctx, &a, &b)
}

/// Total number of lines in PG(3,q): (q^2+1)(q^2+q+1).
pub fn line_count(q: u32) -> u64 {
    let q = u64::from(q);
    (q * q + 1) * (q * q + q + 1)
}

/// Total number of points (and of planes) in PG(3,q): (q^3+q^2+q+1).
pub fn point_count(q: u32) -> u64 {
    let q = u64::from(q);
    q * q * q + q * q + q + 1
}

/// The `idx`-th line of PG(3,q) under a fixed enumeration of reduced
/// row-echelon bases of the 2-dimensional subspaces (duplicate-free, covers
/// every line exactly once). `idx` must be below [`line_count`].
///
/// The enumeration exists so censuses can shard the index space into
/// contiguous worker ranges.
pub fn line_by_index(ctx: &FieldCtx, idx: u64) -> PlueckerLine {
    let q = u64::from(ctx.q());
    let el = |d: u64| ctx.elem(d as u32).expect("digit below q");
    let zero = ctx.zero();
    let one = ctx.one();

    // Echelon shapes by pivot columns, with their parameter counts:
    // (0,1): q^4   (0,2): q^3   (0,3): q^2   (1,2): q^2   (1,3): q   (2,3): 1
    let sizes = [q * q * q * q, q * q * q, q * q, q * q, q, 1];
    let mut i = idx;
    let mut shape = 0usize;
    while shape < 6 && i >= sizes[shape] {
        i -= sizes[shape];
        shape += 1;
    }
    assert!(shape < 6, "line index out of range");

    let (u, v): ([Elem; 4], [Elem; 4]) = match shape {
        0 => {
            let a = el(i % q);
            let b = el((i / q) % q);
            let c = el((i / (q * q)) % q);
            let d = el(i / (q * q * q));
            ([one, zero, a, b], [zero, one, c, d])
        }
        1 => {
            let a = el(i % q);
            let b = el((i / q) % q);
            let c = el(i / (q * q));
            ([one, a, zero, b], [zero, zero, one, c])
        }
        2 => {
            let a = el(i % q);
            let b = el(i / q);
            ([one, a, b, zero], [zero, zero, zero, one])
        }
        3 => {
            let a = el(i % q);
            let b = el(i / q);
            ([zero, one, zero, a], [zero, zero, one, b])
        }
        4 => {
            let a = el(i);
            ([zero, one, a, zero], [zero, zero, zero, one])
        }
        _ => ([zero, zero, one, zero], [zero, zero, zero, one]),
    };
    let pu = Point::new(ctx, u);
    let pv = Point::new(ctx, v);
    line_through(ctx, &pu, &pv).expect("echelon rows are independent")
}

/// Iterates every line of PG(3,q) exactly once.
pub fn all_lines<'a>(ctx: &'a FieldCtx) -> impl Iterator<Item = PlueckerLine> + 'a {
    (0..line_count(ctx.q())).map(move |i| line_by_index(ctx, i))
}

/// Iterates every point of PG(3,q) exactly once (echelon enumeration).
pub fn all_points<'a>(ctx: &'a FieldCtx) -> impl Iterator<Item = Point> + 'a {
    let q = u64::from(ctx.q());
    (0..point_count(ctx.q())).map(move |idx| {
        let el = |d: u64| ctx.elem(d as u32).expect("digit below q");
        let zero = ctx.zero();
        let one = ctx.one();
        let mut i = idx;
        let sizes = [q * q * q, q * q, q, 1];
        let mut shape = 0usize;
        while shape < 4 && i >= sizes[shape] {
            i -= sizes[shape];
            shape += 1;
        }
        let v = match shape {
            0 => [one, el(i % q), el((i / q) % q), el(i / (q * q))],
            1 => [zero, one, el(i % q), el(i / q)],
            2 => [zero, zero, one, el(i)],
            _ => [zero, zero, zero, one],
        };
        Point::new(ctx, v)
    })
}

/// Dense rank of a normalized line inside `[0, dense_rank_space(q))`:
/// the leading-1 position is encoded by an offset and the remaining digits
/// as a base-q number. Used for direct-indexed visited tables.
pub(crate) fn dense_rank(ctx: &FieldCtx, l: &PlueckerLine) -> u64 {
    let q = u64::from(ctx.q());
    let v = l.coords();
    let k = v.iter().position(|e| e.code() != 0).expect("nonzero line");
    debug_assert_eq!(v[k].code(), 1, "line must be normalized");
    let mut offset = 0u64;
    for m in 0..k {
        offset += q.pow((5 - m) as u32);
    }
    let mut r = 0u64;
    for e in v.iter().skip(k + 1) {
        r = r * q + u64::from(e.code());
    }
    offset + r
}

/// Size of the dense rank space: q^5 + q^4 + q^3 + q^2 + q + 1.
pub(crate) fn dense_rank_space(q: u32) -> u64 {
    let q = u64::from(q);
    q.pow(5) + q.pow(4) + q.pow(3) + q.pow(2) + q + 1
}
