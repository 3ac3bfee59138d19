//! Exact arithmetic in the Galois field GF(q), q = p^n.
//!
//! An element is an integer *code* in `[0, q)`: the base-p digits of the code
//! are the coefficients (constant term first) of its residue polynomial
//! modulo a fixed irreducible monic polynomial of degree n. Code 0 is the
//! field zero and code 1 the field one, and for prime q the code is simply
//! the integer residue mod p.
//!
//! Multiplicative structure goes through discrete exp/log tables with respect
//! to a fixed primitive element, so `mul`, `inv`, `pow` and root extraction
//! are O(1) table lookups; addition works digit-wise on codes (a plain XOR in
//! characteristic 2). Fields up to a configurable bound (default 2^14) are
//! supported, which keeps every table comfortably in cache.
//!
//! The context also answers the residue questions that drive the geometry
//! built on top of it: q mod 3 (written `xi` and normalized to {-1, 0, 1}),
//! q mod 4 and mod 12, and whether -1 and -3 are squares.

use std::fmt;
use thiserror::Error;

/// Default upper bound on the supported field order.
pub const DEFAULT_MAX_Q: u32 = 1 << 14;

/// Errors from field construction and partial field operations.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GfError {
    /// The requested order is not of the form p^n.
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    /// Orders 2 and 3 are rejected: the geometry layers need q >= 4.
    #[error("field order {0} is below the supported minimum of 4")]
    TooSmall(u32),
    /// The requested order exceeds the configured bound.
    #[error("field order {0} exceeds the configured bound {1}")]
    TooLarge(u32, u32),
    /// Inversion or division by the zero element.
    #[error("division by zero field element")]
    DivisionByZero,
}

/// A field element, identified by its integer code in `[0, q)`.
///
/// Elements are plain codes and carry no reference to their field; all
/// arithmetic goes through the [`FieldCtx`] that produced them. Mixing
/// elements of different contexts is a logic error.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u16);

impl Elem {
    /// The integer code of this element.
    #[inline]
    pub fn code(self) -> u32 {
        u32::from(self.0)
    }

    #[inline]
    pub(crate) fn from_code(code: u32) -> Elem {
        debug_assert!(code <= u32::from(u16::MAX));
        Elem(code as u16)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Residue data of q that controls case splits throughout the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueFacts {
    /// q mod 3 normalized to {-1, 0, 1}.
    pub xi: i32,
    /// q mod 4.
    pub q_mod_4: u32,
    /// q mod 12.
    pub q_mod_12: u32,
    /// Whether -3 (as a field element) is a square; 0 counts as a square.
    pub minus3_is_square: bool,
    /// Whether -1 is a square.
    pub minus1_is_square: bool,
}

/// Arithmetic context for one finite field GF(p^n).
///
/// Construction chooses a canonical model: the irreducible monic modulus of
/// degree n whose non-leading coefficient vector packs to the smallest base-p
/// integer, and the primitive element with the smallest code. All derived
/// quantities (orbit censuses, stabilizers, ...) are model-independent; a
/// test rebuilds a census under an alternative modulus/generator pair to keep
/// that claim honest.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, little-endian coefficients, length n+1. `[0, 1]` when n = 1.
    modulus: Vec<u32>,
    /// exp[i] = code of g^i for i in [0, 2(q-1)); doubled to skip a reduction in `mul`.
    exp: Vec<u16>,
    /// log[code] = discrete log base g; log[0] is a sentinel.
    log: Vec<u32>,
    /// Base-p digit matrix, row per code, n columns. Empty when n = 1.
    digits: Vec<u8>,
    /// is_sq[code]; in even characteristic every element is a square.
    is_sq: Vec<bool>,
    /// Absolute trace to F_2 (p = 2 only), one entry per code.
    trace2: Vec<u8>,
    primitive: Elem,
}

impl FieldCtx {
    /// Builds the field of order q, rejecting non-prime-powers, q < 4, and
    /// q above [`DEFAULT_MAX_Q`].
    pub fn new(q: u32) -> Result<FieldCtx, GfError> {
        FieldCtx::with_limit(q, DEFAULT_MAX_Q)
    }

    /// As [`FieldCtx::new`] with an explicit upper bound on q.
    pub fn with_limit(q: u32, max_q: u32) -> Result<FieldCtx, GfError> {
        let (p, n) = prime_power_split(q).ok_or(GfError::NotPrimePower(q))?;
        if q < 4 {
            return Err(GfError::TooSmall(q));
        }
        if q > max_q || q > DEFAULT_MAX_Q.max(max_q) {
            return Err(GfError::TooLarge(q, max_q.min(DEFAULT_MAX_Q)));
        }
        Ok(FieldCtx::build(p, n, 0, 0))
    }

    /// Builds GF(p^n) under the `modulus_rank`-th irreducible modulus and the
    /// `primitive_rank`-th primitive element instead of the canonical pair.
    ///
    /// Only exists so tests can demonstrate that results do not depend on the
    /// chosen field model.
    #[doc(hidden)]
    pub fn with_alternative_model(
        q: u32,
        modulus_rank: usize,
        primitive_rank: usize,
    ) -> Result<FieldCtx, GfError> {
        let (p, n) = prime_power_split(q).ok_or(GfError::NotPrimePower(q))?;
        if q < 4 {
            return Err(GfError::TooSmall(q));
        }
        if q > DEFAULT_MAX_Q {
            return Err(GfError::TooLarge(q, DEFAULT_MAX_Q));
        }
        Ok(FieldCtx::build(p, n, modulus_rank, primitive_rank))
    }

    fn build(p: u32, n: u32, modulus_rank: usize, primitive_rank: usize) -> FieldCtx {
        let q = p.pow(n);
        let modulus = find_modulus(p, n, modulus_rank);

        // Digit decomposition of every code (n >= 2 only; prime fields work
        // directly on residues).
        let digits = if n >= 2 {
            let mut d = vec![0u8; (q as usize) * (n as usize)];
            for code in 0..q {
                let mut c = code;
                for i in 0..n {
                    d[(code * n + i) as usize] = (c % p) as u8;
                    c /= p;
                }
            }
            d
        } else {
            Vec::new()
        };

        // Find the primitive element of the requested rank by checking
        // multiplicative orders against the prime factorization of q - 1.
        let factors = prime_factors(q - 1);
        let mut primitive = 0u32;
        let mut seen = 0usize;
        for cand in 2..q {
            let ok = factors
                .iter()
                .all(|&r| poly_pow(p, &modulus, cand, ((q - 1) / r) as u64, n) != 1);
            if ok {
                if seen == primitive_rank {
                    primitive = cand;
                    break;
                }
                seen += 1;
            }
        }
        assert!(primitive >= 2, "no primitive element found (rank too large?)");

        // exp/log tables from repeated polynomial multiplication by g.
        let qm1 = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * qm1];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for i in 0..qm1 {
            exp[i] = cur as u16;
            exp[i + qm1] = cur as u16;
            debug_assert_eq!(log[cur as usize], u32::MAX, "generator is not primitive");
            log[cur as usize] = i as u32;
            cur = poly_mul_codes(p, &modulus, cur, primitive, n);
        }
        assert_eq!(cur, 1, "generator order does not divide q - 1 correctly");

        let is_sq = (0..q)
            .map(|c| c == 0 || p == 2 || log[c as usize] % 2 == 0)
            .collect();

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            exp,
            log,
            digits,
            is_sq,
            trace2: Vec::new(),
            primitive: Elem::from_code(primitive),
        };

        if p == 2 {
            // Absolute trace x + x^2 + x^4 + ... + x^(2^(n-1)).
            let mut tr = vec![0u8; q as usize];
            for c in 0..q {
                let x = Elem::from_code(c);
                let mut acc = x;
                let mut t = x;
                for _ in 1..n {
                    t = ctx.mul(t, t);
                    acc = ctx.add(acc, t);
                }
                debug_assert!(acc.code() <= 1, "trace must land in the prime subfield");
                tr[c as usize] = acc.code() as u8;
            }
            ctx.trace2 = tr;
        }

        ctx
    }

    /// The characteristic p.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The extension degree n.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The field order q = p^n.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Little-endian coefficients of the monic modulus (length n+1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed primitive element g (smallest primitive code).
    #[inline]
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    /// The zero element.
    #[inline]
    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    /// The one element.
    #[inline]
    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// The element with the given code, if the code is in range.
    pub fn elem(&self, code: u32) -> Option<Elem> {
        (code < self.q).then(|| Elem::from_code(code))
    }

    /// The image of a signed integer in the prime subfield (v mod p).
    pub fn from_int(&self, v: i64) -> Elem {
        Elem::from_code(v.rem_euclid(i64::from(self.p)) as u32)
    }

    /// Iterates all q elements: zero first, then 1 = g^0, g, g^2, ...
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(move |i| {
            if i == 0 {
                Elem(0)
            } else {
                Elem(self.exp[(i - 1) as usize])
            }
        })
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.n == 1 {
            let s = x.code() + y.code();
            Elem::from_code(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Elem::from_code(x.code() ^ y.code())
        } else {
            self.add_digitwise(x, y)
        }
    }

    fn add_digitwise(&self, x: Elem, y: Elem) -> Elem {
        let n = self.n as usize;
        let dx = &self.digits[x.code() as usize * n..][..n];
        let dy = &self.digits[y.code() as usize * n..][..n];
        let mut code = 0u32;
        let mut pw = 1u32;
        for i in 0..n {
            let mut d = u32::from(dx[i]) + u32::from(dy[i]);
            if d >= self.p {
                d -= self.p;
            }
            code += d * pw;
            pw *= self.p;
        }
        Elem::from_code(code)
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if self.p == 2 {
            return x;
        }
        if self.n == 1 {
            let c = x.code();
            return Elem::from_code(if c == 0 { 0 } else { self.p - c });
        }
        let n = self.n as usize;
        let dx = &self.digits[x.code() as usize * n..][..n];
        let mut code = 0u32;
        let mut pw = 1u32;
        for &d in dx.iter() {
            let d = u32::from(d);
            code += if d == 0 { 0 } else { self.p - d } * pw;
            pw *= self.p;
        }
        Elem::from_code(code)
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem(0);
        }
        let i = self.log[x.code() as usize] + self.log[y.code() as usize];
        Elem(self.exp[i as usize])
    }

    /// Multiplicative inverse; errors on zero.
    #[inline]
    pub fn inv(&self, x: Elem) -> Result<Elem, GfError> {
        if x.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let i = (self.q - 1) - self.log[x.code() as usize];
        Ok(Elem(self.exp[i as usize]))
    }

    /// x / y; errors when y = 0.
    #[inline]
    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e for a signed exponent; 0^0 = 1, and negative exponents of zero error.
    pub fn pow(&self, x: Elem, e: i64) -> Result<Elem, GfError> {
        if x.0 == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(Elem(0)),
                std::cmp::Ordering::Equal => Ok(Elem(1)),
                std::cmp::Ordering::Less => Err(GfError::DivisionByZero),
            };
        }
        let m = i64::from(self.q - 1);
        let em = e.rem_euclid(m) as u64;
        let idx = (u64::from(self.log[x.code() as usize]) * em) % m as u64;
        Ok(Elem(self.exp[idx as usize]))
    }

    #[inline]
    pub fn square(&self, x: Elem) -> Elem {
        self.mul(x, x)
    }

    /// Whether x is a square (0 counts as a square).
    #[inline]
    pub fn is_square(&self, x: Elem) -> bool {
        self.is_sq[x.code() as usize]
    }

    /// Whether x is a k-th power (0 counts for every k >= 1).
    pub fn is_nth_power(&self, x: Elem, k: u32) -> bool {
        assert!(k >= 1);
        if x.0 == 0 {
            return true;
        }
        let g = gcd(k, self.q - 1);
        self.log[x.code() as usize] % g == 0
    }

    /// All y with y^k = x, sorted by code. Exact and exhaustive: for x != 0
    /// there are either 0 or gcd(k, q-1) solutions; for x = 0 exactly `{0}`.
    pub fn nth_roots(&self, x: Elem, k: u32) -> Vec<Elem> {
        assert!(k >= 1);
        if x.0 == 0 {
            return vec![Elem(0)];
        }
        let m = self.q - 1;
        let g = gcd(k, m);
        let l = self.log[x.code() as usize];
        if l % g != 0 {
            return Vec::new();
        }
        // Solve (k/g) t = l/g (mod m/g); the k/g factor is invertible there.
        let mg = m / g;
        let kg = (k / g) % mg;
        let t0 = if mg == 1 {
            0
        } else {
            (u64::from(l / g) * u64::from(mod_inverse(kg, mg))) % u64::from(mg)
        };
        let mut roots: Vec<Elem> = (0..g)
            .map(|j| Elem(self.exp[(t0 + u64::from(j) * u64::from(mg)) as usize % (m as usize)]))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        debug_assert_eq!(roots.len(), g as usize);
        roots
    }

    /// Square roots of x (see [`FieldCtx::nth_roots`]).
    pub fn square_roots(&self, x: Elem) -> Vec<Elem> {
        self.nth_roots(x, 2)
    }

    /// Cube roots of x.
    pub fn cube_roots(&self, x: Elem) -> Vec<Elem> {
        self.nth_roots(x, 3)
    }

    /// Fourth roots of x.
    pub fn fourth_roots(&self, x: Elem) -> Vec<Elem> {
        self.nth_roots(x, 4)
    }

    /// Number of roots in GF(q) of x^2 - b x + c (0, 1, or 2).
    pub fn quadratic_root_count(&self, b: Elem, c: Elem) -> usize {
        if self.p == 2 {
            // x^2 + bx + c: b = 0 gives the unique root sqrt(c); otherwise
            // substitute x = b y to reach y^2 + y = c/b^2, solvable exactly
            // when the absolute trace of the right side vanishes.
            if b.0 == 0 {
                return 1;
            }
            let rhs = self
                .div(c, self.square(b))
                .expect("b is nonzero on this branch");
            if self.trace2[rhs.code() as usize] == 0 {
                2
            } else {
                0
            }
        } else {
            let disc = self.sub(self.square(b), self.mul(self.from_int(4), c));
            if disc.0 == 0 {
                1
            } else if self.is_square(disc) {
                2
            } else {
                0
            }
        }
    }

    /// The residue facts record for this q.
    pub fn residue_facts(&self) -> ResidueFacts {
        let xi = match self.q % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        };
        let minus3 = self.neg(self.from_int(3));
        let minus1 = self.neg(self.one());
        ResidueFacts {
            xi,
            q_mod_4: self.q % 4,
            q_mod_12: self.q % 12,
            minus3_is_square: self.is_square(minus3),
            minus1_is_square: self.is_square(minus1),
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(GF({}^{}) = GF({}))", self.p, self.n, self.q)
    }
}

/// Splits q into (p, n) with q = p^n, p prime, n >= 1.
pub fn prime_power_split(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0;
    let mut m = q;
    for d in 2.. {
        if d * d > q {
            break;
        }
        if m % d == 0 {
            p = d;
            break;
        }
    }
    if p == 0 {
        return Some((q, 1)); // q itself is prime
    }
    let mut n = 0;
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    (m == 1).then_some((p, n))
}

fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of a modulo m (gcd(a, m) = 1) by the extended Euclid algorithm.
fn mod_inverse(a: u32, m: u32) -> u32 {
    let (mut old_r, mut r) = (i64::from(a), i64::from(m));
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1, "inputs must be coprime");
    old_s.rem_euclid(i64::from(m)) as u32
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over F_p on digit-packed codes. Only used while
// constructing a context (table fill, modulus search); everything afterwards
// runs on the tables.
// ---------------------------------------------------------------------------

fn code_to_poly(p: u32, code: u32, n: u32) -> Vec<u32> {
    let mut c = code;
    (0..n)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn poly_to_code(p: u32, poly: &[u32]) -> u32 {
    poly.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// (a * b) mod m for digit-packed residues a, b; m is monic of degree n.
fn poly_mul_codes(p: u32, m: &[u32], a: u32, b: u32, n: u32) -> u32 {
    if n == 1 {
        return ((u64::from(a) * u64::from(b)) % u64::from(p)) as u32;
    }
    let pa = code_to_poly(p, a, n);
    let pb = code_to_poly(p, b, n);
    let n = n as usize;
    let mut prod = vec![0u64; 2 * n - 1];
    for (i, &ca) in pa.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in pb.iter().enumerate() {
            prod[i + j] += u64::from(ca) * u64::from(cb);
        }
    }
    // Reduce by the monic modulus from the top down.
    for i in (n..prod.len()).rev() {
        let c = prod[i] % u64::from(p);
        if c == 0 {
            continue;
        }
        for j in 0..n {
            // prod[i - n + j] -= c * m[j]  (mod p), kept non-negative
            let sub = (c * u64::from(m[j])) % u64::from(p);
            let cur = prod[i - n + j] % u64::from(p);
            prod[i - n + j] = (cur + u64::from(p) - sub) % u64::from(p);
        }
        prod[i] = 0;
    }
    let reduced: Vec<u32> = prod[..n].iter().map(|&c| (c % u64::from(p)) as u32).collect();
    poly_to_code(p, &reduced)
}

/// a^e mod m on digit-packed residues.
fn poly_pow(p: u32, m: &[u32], a: u32, mut e: u64, n: u32) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_codes(p, m, acc, base, n);
        }
        base = poly_mul_codes(p, m, base, base, n);
        e >>= 1;
    }
    acc
}

/// Remainder of the monic polynomial f by the monic polynomial g (both
/// little-endian coefficient vectors over F_p).
fn poly_rem(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().expect("nonempty");
        if lead != 0 {
            let shift = r.len() - 1 - dg;
            for j in 0..=dg {
                let idx = shift + j;
                let sub = (u64::from(lead) * u64::from(g[j])) % u64::from(p);
                r[idx] = ((u64::from(r[idx]) + u64::from(p) - sub) % u64::from(p)) as u32;
            }
        }
        r.pop();
        while r.len() > dg && *r.last().expect("nonempty") == 0 && r.len() > 1 {
            r.pop();
        }
    }
    r
}

fn poly_is_zero(r: &[u32]) -> bool {
    r.iter().all(|&c| c == 0)
}

/// Is the monic polynomial f (little-endian, degree >= 2) irreducible over F_p?
/// Checked by trial division against every monic polynomial of degree <= deg(f)/2.
fn poly_is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    for d in 1..=(deg / 2) {
        let count = p.pow(d as u32);
        for k in 0..count {
            let mut g = code_to_poly(p, k, d as u32);
            g.push(1); // monic of degree d
            if poly_is_zero(&poly_rem(p, f, &g)) {
                return false;
            }
        }
    }
    true
}

/// The `rank`-th irreducible monic polynomial of degree n over F_p, ordering
/// candidates by the base-p packing of their non-leading coefficients.
fn find_modulus(p: u32, n: u32, rank: usize) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1]; // the polynomial x; prime fields reduce mod p directly
    }
    let mut seen = 0usize;
    for k in 0..p.pow(n) {
        let mut f = code_to_poly(p, k, n);
        f.push(1);
        if poly_is_irreducible(p, &f) {
            if seen == rank {
                return f;
            }
            seen += 1;
        }
    }
    panic!("no irreducible polynomial of degree {n} over F_{p} at rank {rank}");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::new(q).expect("valid field order")
    }

    #[test]
    fn construction_accepts_prime_powers_and_rejects_the_rest() {
        let f7 = f(7);
        assert_eq!((f7.p(), f7.n(), f7.q()), (7, 1, 7));
        let f9 = f(9);
        assert_eq!((f9.p(), f9.n(), f9.q()), (3, 2, 9));
        assert_eq!(FieldCtx::new(6).unwrap_err(), GfError::NotPrimePower(6));
        assert_eq!(FieldCtx::new(0).unwrap_err(), GfError::NotPrimePower(0));
        assert_eq!(FieldCtx::new(1).unwrap_err(), GfError::NotPrimePower(1));
        assert_eq!(FieldCtx::new(2).unwrap_err(), GfError::TooSmall(2));
        assert_eq!(FieldCtx::new(3).unwrap_err(), GfError::TooSmall(3));
        assert_eq!(
            FieldCtx::with_limit(81, 64).unwrap_err(),
            GfError::TooLarge(81, 64)
        );
        assert!(matches!(
            FieldCtx::new(1 << 15),
            Err(GfError::TooLarge(_, _))
        ));
    }

    #[test]
    fn small_field_inverses_match_hand_computation() {
        let f5 = f(5);
        // 2 * 3 = 6 = 1 in F_5
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(f5.zero()).unwrap_err(), GfError::DivisionByZero);

        let f7 = f(7);
        // -1/2 in F_7: inv(2) = 4, -4 = 3
        let minus_half = f7.neg(f7.inv(f7.from_int(2)).unwrap());
        assert_eq!(minus_half, f7.from_int(3));
        // 1/9 in F_7: 9 = 2, inv(2) = 4
        let ninth = f7.inv(f7.mul(f7.from_int(3), f7.from_int(3))).unwrap();
        assert_eq!(ninth, f7.from_int(4));
    }

    #[test]
    fn square_roots_match_expectations() {
        let f7 = f(7);
        let roots = f7.square_roots(f7.from_int(2));
        assert_eq!(
            roots,
            vec![f7.from_int(3), f7.from_int(4)],
            "2 = 3^2 = 4^2 in F_7"
        );
        assert!(f7.square_roots(f7.from_int(3)).is_empty(), "3 is not a square mod 7");

        let f8 = f(8);
        for x in f8.elements() {
            assert_eq!(
                f8.square_roots(x).len(),
                1,
                "squaring is a bijection in even characteristic"
            );
        }
    }

    #[test]
    fn cube_and_fourth_roots_match_expectations() {
        let f5 = f(5);
        assert_eq!(f5.cube_roots(f5.from_int(3)), vec![f5.from_int(2)]);

        let f7 = f(7);
        assert_eq!(
            f7.cube_roots(f7.one()),
            vec![f7.from_int(1), f7.from_int(2), f7.from_int(4)]
        );
        assert!(f7.cube_roots(f7.from_int(2)).is_empty());
        assert_eq!(
            f7.fourth_roots(f7.one()),
            vec![f7.from_int(1), f7.from_int(6)]
        );
        assert_eq!(f7.fourth_roots(f7.zero()), vec![f7.zero()]);

        let f37 = f(37);
        assert_eq!(f37.fourth_roots(f37.from_int(12)).len(), 4);
    }

    #[test]
    fn roots_agree_with_brute_force_for_all_small_fields() {
        for q in 4..=128u32 {
            if prime_power_split(q).is_none() {
                continue;
            }
            let fq = f(q);
            let all: Vec<Elem> = fq.elements().collect();
            for k in 2..=4u32 {
                for &x in &all {
                    let mut brute: Vec<Elem> = all
                        .iter()
                        .copied()
                        .filter(|&y| fq.pow(y, i64::from(k)).unwrap() == x)
                        .collect();
                    brute.sort_unstable();
                    assert_eq!(fq.nth_roots(x, k), brute, "q={q} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_has_order_q_minus_1() {
        for q in 4..=256u32 {
            if prime_power_split(q).is_none() {
                continue;
            }
            let fq = f(q);
            let mut seen = std::collections::HashSet::new();
            for x in fq.elements() {
                assert!(seen.insert(x), "enumeration repeats {x} at q={q}");
                if x != fq.zero() {
                    assert_eq!(fq.pow(x, i64::from(q) - 1).unwrap(), fq.one());
                }
            }
            assert_eq!(seen.len(), q as usize);
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively_in_small_fields() {
        for q in [8u32, 9] {
            let fq = f(q);
            let all: Vec<Elem> = fq.elements().collect();
            for &x in &all {
                for &y in &all {
                    assert_eq!(fq.add(x, y), fq.add(y, x));
                    assert_eq!(fq.mul(x, y), fq.mul(y, x));
                    assert_eq!(fq.sub(fq.add(x, y), y), x);
                    for &z in &all {
                        assert_eq!(fq.add(fq.add(x, y), z), fq.add(x, fq.add(y, z)));
                        assert_eq!(fq.mul(fq.mul(x, y), z), fq.mul(x, fq.mul(y, z)));
                        assert_eq!(
                            fq.mul(x, fq.add(y, z)),
                            fq.add(fq.mul(x, y), fq.mul(x, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn square_and_cube_counts_match_group_theory() {
        for q in [5u32, 7, 8, 9, 11, 13, 16, 25, 27] {
            let fq = f(q);
            let squares = fq.elements().filter(|&x| x != fq.zero() && fq.is_square(x)).count();
            let expected_squares = if q % 2 == 0 {
                (q - 1) as usize
            } else {
                ((q - 1) / 2) as usize
            };
            assert_eq!(squares, expected_squares, "q={q}");

            let cubes = fq
                .elements()
                .filter(|&x| x != fq.zero() && fq.is_nth_power(x, 3))
                .count();
            let expected_cubes = ((q - 1) / gcd(3, q - 1)) as usize;
            assert_eq!(cubes, expected_cubes, "q={q}");
        }
    }

    #[test]
    fn residue_facts_match_known_values() {
        let r7 = f(7).residue_facts();
        assert_eq!(r7.xi, 1);
        assert!(r7.minus3_is_square, "-3 = 4 = 2^2 in F_7");

        let r11 = f(11).residue_facts();
        assert_eq!(r11.xi, -1);
        assert_eq!(r11.q_mod_12, 11);
        assert!(!r11.minus1_is_square);

        let r9 = f(9).residue_facts();
        assert_eq!(r9.xi, 0);
        assert_eq!(r9.q_mod_4, 1);

        // For odd q coprime to 3, -3 is a square exactly when q = 1 mod 3,
        // and -1 is a square exactly when q = 1 mod 4.
        for q in [5u32, 7, 11, 13, 17, 19, 23, 25, 29, 31, 37, 41, 49] {
            let r = f(q).residue_facts();
            assert_eq!(r.minus3_is_square, q % 3 == 1, "q={q}");
            assert_eq!(r.minus1_is_square, q % 4 == 1, "q={q}");
        }
    }

    #[test]
    fn quadratic_root_count_matches_brute_force() {
        for q in [5u32, 7, 8, 9, 11, 13, 16, 27] {
            let fq = f(q);
            let all: Vec<Elem> = fq.elements().collect();
            for &b in &all {
                for &c in &all {
                    let brute = all
                        .iter()
                        .filter(|&&x| {
                            fq.add(fq.sub(fq.square(x), fq.mul(b, x)), c) == fq.zero()
                        })
                        .count();
                    assert_eq!(
                        fq.quadratic_root_count(b, c),
                        brute,
                        "q={q} b={b} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_modulus_is_the_expected_small_polynomial() {
        assert_eq!(f(9).modulus(), &[1, 0, 1], "x^2 + 1 over F_3");
        assert_eq!(f(16).modulus(), &[1, 1, 0, 0, 1], "x^4 + x + 1 over F_2");
        assert_eq!(f(25).modulus(), &[2, 0, 1], "x^2 + 2 over F_5");
    }

    #[test]
    fn alternative_field_models_stay_consistent() {
        // Same field under a different modulus/generator still has the same
        // abstract structure: squares count, multiplicative order, traces of
        // low-level identities.
        let a = f(9);
        let b = FieldCtx::with_alternative_model(9, 1, 1).expect("alternative model");
        assert_ne!(a.modulus(), b.modulus());
        for ctx in [&a, &b] {
            let sq = ctx.elements().filter(|&x| x != ctx.zero() && ctx.is_square(x)).count();
            assert_eq!(sq, 4);
            assert_eq!(ctx.residue_facts().xi, 0);
        }
    }

    #[test]
    fn element_enumeration_starts_with_zero_and_one() {
        for q in [5u32, 8, 9, 25] {
            let fq = f(q);
            let first: Vec<Elem> = fq.elements().take(2).collect();
            assert_eq!(first, vec![fq.zero(), fq.one()]);
        }
    }
}
