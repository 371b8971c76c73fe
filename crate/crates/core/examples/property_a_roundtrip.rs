//! Følner witness → ℓ¹/ℓ² profiles → kernel → ℓ² profile → Følner witness,
//! verifying every stage on the 24-cycle.

use coarse_lab::gallery;
use coarse_lab::witness::{self, convert};

fn main() -> coarse_lab::Result<()> {
    let eps = 0.3;
    let (_, gens) = gallery::cycle(24);

    let (r, w) = witness::folner_from_balls(&gens, &gens, eps, 20)?.expect("balls are Følner on a cycle");
    let ratio = witness::verify_folner(&w, &gens, eps)?.epsilon;
    println!("ball witness radius {r}: ratio {ratio:.6} < {eps}");

    let (_, l2) = convert::folner_to_l2(&w)?;
    let disp = witness::verify_l2(&l2, &gens)?.epsilon;
    println!("l2 displacement {disp:.6} <= sqrt(2 eps) = {:.6}", (2.0 * eps).sqrt());

    let k = convert::l2_to_kernel(&l2);
    let kq = witness::verify_kernel(&k, &gens)?;
    println!("kernel: sup |1 - k| = {:.6}, min eigenvalue {:.2e}", kq.quality.epsilon, kq.min_eigenvalue);

    let back = convert::kernel_to_l2(&k, eps)?;
    let disp2 = witness::verify_l2(&back.profile, &gens)?.epsilon;
    println!("square root cut to radius {}, residual {:.2e}, displacement {disp2:.6}", back.radius, back.residual);

    let out = convert::l2_to_folner(&back.profile, &gens, disp2 + 1e-12)?;
    let target = 2.0 * disp2 / (1.0 - disp2);
    println!("discretized on grid {}: ratio {:.6} < {target:.6}", out.grid, out.ratio);
    assert!(out.ratio < target);
    Ok(())
}
