// Solves all three games by retrograde analysis and checks the closed forms.
//
// cargo run --release --example solve_oracle -- 12

use hqn::oracle::{is_cold_closed_form, nim_xor_cold, solve_nim_piles, solve_retrograde, wythoff_cold_pair};
use hqn::RuleSet;

fn main() -> hqn::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);

    for rules in RuleSet::ALL {
        let grid = solve_retrograde(rules, n, n)?;
        let mismatches = grid
            .positions()
            .filter(|&p| grid.is_cold(p) != is_cold_closed_form(rules, p))
            .count();
        println!("{rules} on {n}x{n}: {} cold cells, {mismatches} closed-form mismatches", grid.cold_positions().count());
        for r in 0..n {
            let line: String = (0..n)
                .map(|c| if grid.is_cold(hqn::Position::new(r, c)) { 'o' } else { '.' })
                .collect();
            println!("  {line}");
        }
    }

    let pairs: Vec<String> = (0..8)
        .map(|k| {
            let (p, _) = wythoff_cold_pair(k);
            format!("({},{})", p.row, p.col)
        })
        .collect();
    println!("Wythoff cold pairs: {}", pairs.join(" "));

    // three piles: the xor rule against a brute-force solve
    let dims = [8, 8, 8];
    let cold = solve_nim_piles(&dims);
    let agree = (0..cold.len()).all(|i| {
        let piles = [(i / 64) as u64, ((i / 8) % 8) as u64, (i % 8) as u64];
        cold[i] == nim_xor_cold(&piles)
    });
    println!("3-pile Nim on 8x8x8 matches the xor rule: {agree}");
    Ok(())
}
