use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::witness;

/// `(p, w, B1_max(p, w))` on a uniform grid over the unit square, `p` outer.
pub fn surface_rows(p_steps: usize, w_steps: usize) -> Result<Vec<(f64, f64, f64)>> {
    if p_steps < 2 || w_steps < 2 {
        return Err(Error::domain(format!("grid steps must be at least 2, got {p_steps} x {w_steps}")));
    }
    let mut rows = Vec::with_capacity(p_steps * w_steps);
    for i in 0..p_steps {
        let p = i as f64 / (p_steps - 1) as f64;
        for j in 0..w_steps {
            let w = j as f64 / (w_steps - 1) as f64;
            rows.push((p, w, witness::b1_max_constrained(p, w)?));
        }
    }
    Ok(rows)
}

pub fn surface_csv(p_steps: usize, w_steps: usize) -> Result<String> {
    let mut out = String::from("p,w,b1_max\n");
    for (p, w, b) in surface_rows(p_steps, w_steps)? {
        writeln!(out, "{p},{w},{b}").expect("writing to a string");
    }
    Ok(out)
}

pub fn export_surface(p_steps: usize, w_steps: usize, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, surface_csv(p_steps, w_steps)?)?;
    Ok(())
}
