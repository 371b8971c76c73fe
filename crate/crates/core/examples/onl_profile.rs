//! Best localized ratio `max_x ‖a P_{S[x]}‖ / ‖a‖` as the window grows, on a
//! cycle and on a random 3-regular graph.

use coarse_lab::gallery;
use coarse_lab::onl;
use coarse_lab::roe::BandedOperator;

fn main() -> coarse_lab::Result<()> {
    let (_, cycle) = gallery::cycle(400);
    let (_, expander) = gallery::random_regular_graph(400, 3, 1)?;
    let a_cycle = BandedOperator::adjacency(&cycle);
    let a_exp = BandedOperator::adjacency(&expander);
    let exp_ball = expander.symmetrized().union(&coarse_lab::Entourage::diagonal(expander.space()))?;

    println!("{:>3} {:>14} {:>14} {:>14}", "w", "cycle", "cos(π/(2w+4))", "3-regular");
    for w in [1, 2, 3, 5, 10] {
        let c = onl::beta_check(&a_cycle, &cycle.power(w), f64::MIN_POSITIVE)?.best_ratio();
        let e = onl::beta_check(&a_exp, &exp_ball.power(w), f64::MIN_POSITIVE)?.best_ratio();
        let closed = (std::f64::consts::PI / (2 * w + 4) as f64).cos();
        println!("{w:>3} {c:>14.10} {closed:>14.10} {e:>14.10}");
    }
    Ok(())
}
