//! Token parsing for field elements, points, and line coordinates.
//!
//! Element tokens come in three shapes: a plain nonnegative integer is an
//! element code in `[0, q)`; a leading `-` or an embedded `/` switches to
//! integer arithmetic inside the field, so `-2`, `1/9`, and `-1/3` resolve
//! through the prime subfield. The arithmetic forms are the only sane way to
//! name those constants over extension fields, where codes are polynomial
//! packings rather than residues.

use cubic_orbits::gfq::{Elem, FieldCtx};
use cubic_orbits::pg3::{PlueckerLine, Point};

use crate::error::CliError;

pub fn parse_element(f: &FieldCtx, tok: &str) -> Result<Elem, CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad element token '{tok}': {why}"));
    if let Some((num, den)) = tok.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| bad("the numerator is not an integer"))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| bad("the denominator is not an integer"))?;
        return f
            .div(f.from_int(n), f.from_int(d))
            .map_err(|e| bad(&e.to_string()));
    }
    if let Some(rest) = tok.strip_prefix('-') {
        let n: i64 = rest.parse().map_err(|_| bad("not an integer"))?;
        return Ok(f.from_int(-n));
    }
    let code: u32 = tok
        .parse()
        .map_err(|_| bad("not a nonnegative integer, fraction, or negated integer"))?;
    f.elem(code)
        .ok_or_else(|| bad(&format!("element codes lie in [0, {})", f.q())))
}

pub fn parse_point(f: &FieldCtx, tok: &str) -> Result<Point, CliError> {
    let parts: Vec<&str> = tok.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "point '{tok}' must have exactly 4 comma-separated coordinates"
        )));
    }
    let mut coords = [f.zero(); 4];
    for (slot, part) in coords.iter_mut().zip(&parts) {
        *slot = parse_element(f, part.trim())?;
    }
    if coords.iter().all(|&c| c == f.zero()) {
        return Err(CliError::Usage(format!(
            "point '{tok}' is the zero tuple, which names no projective point"
        )));
    }
    Ok(Point::new(f, coords))
}

pub fn parse_line_coords(f: &FieldCtx, tok: &str) -> Result<PlueckerLine, CliError> {
    let parts: Vec<&str> = tok.split(',').collect();
    if parts.len() != 6 {
        return Err(CliError::Usage(format!(
            "line '{tok}' must have exactly 6 comma-separated coordinates"
        )));
    }
    let mut coords = [f.zero(); 6];
    for (slot, part) in coords.iter_mut().zip(&parts) {
        *slot = parse_element(f, part.trim())?;
    }
    PlueckerLine::from_coords(f, coords).map_err(CliError::from)
}
