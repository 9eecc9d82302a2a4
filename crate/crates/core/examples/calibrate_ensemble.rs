//! Distribution of the ensemble-vs-binomial total variation over master seeds.
//!
//! cargo run --release -p qwalk --example calibrate_ensemble -- [seeds] [trials] [steps]

use qwalk::classical::{binomial_distribution, ensemble_average};
use qwalk::stats::total_variation;
use qwalk::{CoinSpec, StandardState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let seeds = args.first().copied().unwrap_or(20);
    let trials = args.get(1).copied().unwrap_or(400);
    let steps = args.get(2).copied().unwrap_or(50);

    for (dim, coin) in [(1, CoinSpec::Hadamard), (2, CoinSpec::Dft), (2, CoinSpec::Hadamard)] {
        let mut cfg = WalkConfig::new(dim, coin.clone(), StandardState::AllMinus, steps);
        cfg.dressed = true;
        let exact = binomial_distribution(dim, steps);
        let mut tvs = Vec::with_capacity(seeds);
        for seed in 0..seeds as u64 {
            let avg = ensemble_average(&cfg, trials, seed)?;
            tvs.push(total_variation(&avg, &exact)?);
        }
        tvs.sort_by(f64::total_cmp);
        let mean = tvs.iter().sum::<f64>() / tvs.len() as f64;
        println!(
            "d={dim} coin={coin} trials={trials} steps={steps}: mean {mean:.4}  min {:.4}  median {:.4}  max {:.4}",
            tvs[0],
            tvs[tvs.len() / 2],
            tvs[tvs.len() - 1]
        );
    }
    Ok(())
}
