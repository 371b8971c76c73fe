//! Compression `Φ_S` to interval blocks and Schur reconstruction `Ψ` on the
//! 24-cycle: the defect is `(1/8) · adjacency`.

use coarse_lab::{gallery, pipeline};
use coarse_lab::roe::{self, BandedOperator};
use coarse_lab::witness::L2Profile;
use coarse_lab::Entourage;

fn main() -> coarse_lab::Result<()> {
    let n = 24;
    let width = 8;
    let (space, gens) = gallery::cycle(n);
    let b = BandedOperator::adjacency(&gens);

    // S[x] = {x, …, x + 7}
    let window = Entourage::from_pairs(&space, (0..n).flat_map(|x| (0..width).map(move |k| (x, (x + k) % n))))?;
    let p = L2Profile::uniform(&window)?;

    let blocks = roe::compress(&b, &window)?;
    println!("‖b‖ = {:.12}, ‖Φ_S(b)‖ = {:.12}", roe::operator_norm(&b)?.value, blocks.norm());

    let d = roe::schur_defect(&b, &p)?;
    println!("‖Ψ∘Φ_S(b) - b‖ = {:.12} (bound {:.6})", d.defect, d.bound);
    println!("Schur bound for b: {}", roe::schur_bound(&b));

    // A wider cycle and a tent profile meet the displacement precondition.
    let (_, gens) = gallery::cycle(120);
    let b = BandedOperator::adjacency(&gens).scale(0.5.into());
    let eps = 0.5;
    let tent = pipeline::tent_profile(&gens, 25)?;
    let d = roe::nuclearity_defect(&b, &tent, &gens, eps)?;
    println!("tent r=25 on the 120-cycle: defect {:.6} <= {:.6} < {eps} (δ = {:.4})", d.defect, d.bound, d.delta);
    Ok(())
}
