use super::{Poly, Ring, RingError, WittElem};

/// Lifts the simple roots of a monic `f` over `W_N(F_p)` from `F_p`.
///
/// The reduction of `f` must split into distinct linear factors over `F_p`;
/// the lifts are returned in increasing order of residue representative.
pub fn hensel_lift_roots(f: &Poly<WittElem>) -> Result<Vec<WittElem>, RingError> {
    if !f.is_monic() {
        return Err(RingError::NotMonic);
    }
    let ring = f.template().ring();
    let p = ring.p();
    let deg = f.degree().unwrap_or(0);
    let df = f.derivative();
    let mut residues = Vec::new();
    for r in 0..p {
        let x = ring.from_u64(r);
        if f.eval(&x).residue() == 0 {
            if df.eval(&x).residue() == 0 {
                return Err(RingError::NonSeparableReduction);
            }
            residues.push(x);
        }
    }
    if residues.len() < deg {
        return Err(RingError::NonSplitReduction);
    }
    let mut roots: Vec<WittElem> = residues
        .into_iter()
        .map(|mut x| {
            for _ in 0..ring.length() {
                let step = f.eval(&x) * df.eval(&x).try_inv().expect("simple root");
                x = x - step;
            }
            x
        })
        .collect();
    roots.sort();
    Ok(roots)
}
