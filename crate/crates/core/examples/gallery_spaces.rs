//! The built-in families and their generating entourages.

use coarse_lab::gallery::{self, FiniteGroup, MetricTable};
use coarse_lab::roe::{self, BandedOperator};

fn main() -> coarse_lab::Result<()> {
    let mut rows = Vec::new();

    let (s, g) = gallery::cycle(12);
    rows.push(("cycle(12)", s.len(), g));
    let (s, g) = gallery::path(8);
    rows.push(("path(8)", s.len(), g));
    let (s, g) = gallery::random_regular_graph(40, 3, 7)?;
    rows.push(("random 3-regular(40)", s.len(), g));

    let d4 = FiniteGroup::dihedral(4)?;
    let (s, act) = gallery::left_translation(&d4);
    let k: Vec<usize> = d4.generators().iter().flat_map(|&x| [x, d4.inverse(x)]).chain([d4.identity()]).collect();
    let g = gallery::group_action_space(&d4, &s, &act, &k)?;
    rows.push(("cayley(D4)", s.len(), g));

    let groups = [FiniteGroup::cyclic(5)?, FiniteGroup::cyclic(7)?, FiniteGroup::cyclic(9)?];
    let (s, g) = gallery::box_space(&groups, 1)?;
    rows.push(("box(Z5, Z7, Z9)", s.len(), g));

    let m = MetricTable::graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])?;
    let (s, g) = gallery::metric_space(&m, 2.0)?;
    rows.push(("path metric(6) <= 2", s.len(), g));

    println!("{:<22} {:>6} {:>6} {:>4} {:>10}", "space", "points", "pairs", "deg", "‖adj‖");
    for (name, n, g) in rows {
        let norm = roe::operator_norm(&BandedOperator::adjacency(&g))?.value;
        println!("{name:<22} {n:>6} {:>6} {:>4} {norm:>10.6}", g.len(), g.degree().max());
    }

    println!("free group, 2 generators, ball sizes: {:?}", (0..5).map(|r| gallery::free_ball_size(2, r)).collect::<Vec<_>>());
    Ok(())
}
