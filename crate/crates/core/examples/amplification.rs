//! Upgrading a weakly localized vector to a certificate at constant `κ`,
//! and the block-matrix amplification `W* a V`.

use coarse_lab::gallery;
use coarse_lab::linalg::C64;
use coarse_lab::onl::{self, AmplifiedOperator};
use coarse_lab::roe::{self, BandedOperator};

fn main() -> coarse_lab::Result<()> {
    let (space, gens) = gallery::cycle(60);
    let a = BandedOperator::adjacency(&gens).scale(C64::new(0.5, 0.0));
    println!("‖a‖ = {:.12}", roe::operator_norm(&a)?.value);

    // best vector on the radius-2 windows, ratio cos(π/8)
    let window = gens.power(2);
    let check = onl::beta_check(&a, &window, f64::MIN_POSITIVE)?;
    let mut xi = vec![C64::new(0.0, 0.0); space.len()];
    for (i, v) in onl::localized_norm(&a, &window, check.center()).1 {
        xi[i] = v;
    }
    println!("start ratio {:.6}", check.best_ratio());
    for n in 1..=4 {
        match onl::amplify(&a, &gens, &window, &xi, 0.9, n) {
            Ok(cert) => println!(
                "n = {n}: ratio {:.6} > 0.9, support {} points, window radius {}",
                cert.ratio,
                cert.vector.len(),
                2 * n + 1
            ),
            Err(e) => println!("n = {n}: {e}"),
        }
    }

    let blocks = vec![
        vec![a.clone(), BandedOperator::zero(gens.clone())],
        vec![BandedOperator::identity(&space).with_band(gens.clone())?, a.scale(C64::new(0.0, 1.0))],
    ];
    let m = AmplifiedOperator::new(blocks)?;
    let xis: Vec<Vec<C64>> = (0..space.len()).map(|_| vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).collect();
    let b = onl::matrix_amplify_compress(&m, &xis, &xis)?;
    println!("‖W* a V‖ = {:.6} <= ‖a^(2)‖ = {:.6}", roe::operator_norm(&b)?.value, m.norm());
    println!("W* a V supported on T: {}", b.lies_in(&gens));
    Ok(())
}
