//! Entourage algebra on a small space: diagonal, inverse, composition,
//! union, and balls in the column convention `T[x] = {w : (w, x) ∈ T}`.

use coarse_lab::{Entourage, Space};

fn main() -> coarse_lab::Result<()> {
    let space = Space::new(["a", "b", "c", "d"])?;
    let t = Entourage::from_label_pairs(&space, &[("a", "b"), ("b", "c"), ("c", "d")])?;

    let diag = Entourage::diagonal(&space);
    let two = t.compose(&t)?;
    let closed = t.symmetrized().union(&diag)?;

    println!("T        = {:?}", labelled(&t));
    println!("T^-1     = {:?}", labelled(&t.inverse()));
    println!("T o T    = {:?}", labelled(&two));
    println!("T[c]     = {:?}", t.ball_labels(&["c"])?.iter().map(|&i| space.label(i)).collect::<Vec<_>>());
    println!("deg(T)   = {}", t.degree().max());
    println!("U^3 full = {}", closed.power(3) == Entourage::full(&space));

    assert!(t.is_subset(&closed) && diag.is_subset(&closed));
    assert_eq!(two.inverse(), t.inverse().compose(&t.inverse())?);
    Ok(())
}

fn labelled(e: &Entourage) -> Vec<(String, String)> {
    let s = e.space();
    e.pairs().map(|(x, y)| (s.label(x).to_string(), s.label(y).to_string())).collect()
}
