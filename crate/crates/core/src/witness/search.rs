use super::{verify_folner, FolnerWitness, Variant};
use crate::coarse::Entourage;
use crate::error::{Error, Result};

/// Tries `A_x = G^{∘r}[x] × {0}` for `r = 1..=r_max` and returns the first
/// radius whose witness passes [`verify_folner`] at `(tested, eps)`.
pub fn folner_from_balls(
    gens: &Entourage,
    tested: &Entourage,
    eps: f64,
    r_max: usize,
) -> Result<Option<(usize, FolnerWitness)>> {
    if !gens.is_symmetric() || !gens.contains_diagonal() {
        return Err(Error::InvalidParameter("generators must be symmetric and contain the diagonal".into()));
    }
    let n = gens.space().len();
    let mut ball = gens.clone();
    for r in 1..=r_max {
        if r > 1 {
            ball = ball.compose(gens)?;
        }
        // A_x(y) ≠ ∅ iff y ∈ G^r[x], i.e. (x, y) ∈ (G^r)^{-1} = G^r
        let counts: Vec<_> = (0..n).flat_map(|x| ball.ball_of(x).iter().map(move |&y| (x, y, 1))).collect();
        let w = FolnerWitness::new(ball.clone(), counts, Variant::Diagonal)?;
        match verify_folner(&w, tested, eps) {
            Ok(_) => return Ok(Some((r, w))),
            Err(Error::Violation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
